#include "qcrl/trainer.hpp"

#include "qcrl/errors.hpp"
#include "qcrl/parallel.hpp"

#include <algorithm>
#include <chrono>

namespace qcrl {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + mid));
}

}  // namespace

std::vector<double> deterministic_action(const Policy& policy, const EpisodeTask& task,
                                         const std::vector<std::vector<double>>& observations) {
  const int n = task.sections();
  if (static_cast<int>(observations.size()) != n) throw StructuralError("expected one observation per section");
  Eigen::MatrixXd obs(task.obs_dim(), n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < task.obs_dim(); ++i) obs(i, k) = observations[k][i];
  }
  const Eigen::MatrixXd mu = policy.mean(obs);
  std::vector<std::vector<double>> parts(n);
  for (int k = 0; k < n; ++k) {
    parts[k].resize(mu.rows());
    for (Eigen::Index j = 0; j < mu.rows(); ++j) parts[k][j] = std::clamp(mu(j, k), -1.0, 1.0);
  }
  return task.assemble(parts);
}

std::vector<double> deterministic_action(const Policy& policy, const EpisodeTask& task) {
  const int n = task.sections();
  std::vector<std::vector<double>> obs(n, std::vector<double>(task.obs_dim(), 0.0));
  if (n > 1) {
    for (int k = 0; k < n; ++k) obs[k][1] = static_cast<double>(k) / n;
  }
  return deterministic_action(policy, task, obs);
}

PolicyEvaluation evaluate_policy(const Policy& policy, const EpisodeTask& task, std::uint64_t seed, int episodes,
                                 const SolverConfig& solver, int threads) {
  PolicyEvaluation out;
  out.fidelities.resize(episodes);
  parallel_for(
      static_cast<std::size_t>(episodes),
      [&](std::size_t i) {
        const EpisodeSetup setup = task.reset(seed, 0, i);
        const std::vector<double> action = deterministic_action(policy, task, setup.observations);
        out.fidelities[i] = task.env().evaluate(action, &setup.noise, solver).fidelity;
      },
      threads);
  for (double f : out.fidelities) out.mean_fidelity += f / episodes;
  return out;
}

TrainReport train(const EpisodeTask& task, const TrainOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  const PpoConfig& cfg = options.ppo;
  cfg.validate();
  options.reward.validate();
  const Environment& env = task.env();
  const RewardBaselines baselines = compute_baselines(env);
  const int max_steps = options.solver.max_steps;

  TrainReport report;
  report.policy = Policy(task.obs_dim(), task.section_action_dim(), cfg.hidden, cfg.init_log_std, cfg.log_std_min,
                         cfg.log_std_max, options.seed);
  Policy& policy = report.policy;
  Adam adam(policy.num_params(), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
  CounterRng shuffle_rng(stream_key({options.seed, 0x5EEDULL}));

  auto evaluate_best = [&] {
    std::vector<double> action = deterministic_action(policy, task);
    const EpisodeResult r = env.evaluate(action, nullptr, options.solver);
    if (report.best_action.empty() || r.fidelity > report.best_action_fidelity) {
      report.best_action = std::move(action);
      report.best_action_fidelity = r.fidelity;
    }
  };
  if (options.track_best_waveform) evaluate_best();

  const int n_env = cfg.num_envs;
  const int n_sec = task.sections();
  double total_steps = 0.0;
  long total_episodes = 0;

  for (int u = 0; u < cfg.num_updates; ++u) {
    const auto t_update = clock::now();
    std::vector<EpisodeSetup> setups(n_env);
    for (int i = 0; i < n_env; ++i) setups[i] = task.reset(options.seed, i, u);

    // Sample every section of every episode. Observations never depend on
    // earlier actions, so all sections can be drawn before simulating.
    std::vector<std::vector<ActionSample>> samples(n_sec);
    for (int k = 0; k < n_sec; ++k) {
      Eigen::MatrixXd obs(task.obs_dim(), n_env);
      std::vector<CounterRng> rngs;
      rngs.reserve(n_env);
      for (int i = 0; i < n_env; ++i) {
        for (int j = 0; j < task.obs_dim(); ++j) obs(j, i) = setups[i].observations[k][j];
        rngs.emplace_back(stream_key({options.seed, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(k), 0xAC7ULL}));
      }
      samples[k] = sample_actions(policy, obs, rngs);
    }

    std::vector<EpisodeResult> results(n_env);
    std::vector<double> rewards(n_env);
    parallel_for(
        n_env,
        [&](std::size_t i) {
          std::vector<std::vector<double>> parts(n_sec);
          for (int k = 0; k < n_sec; ++k) parts[k] = samples[k][i].clamped;
          const std::vector<double> raw = task.assemble(parts);
          results[i] = env.evaluate(raw, &setups[i].noise, options.solver);
          rewards[i] = reward(results[i], options.reward, baselines, env.channels(), max_steps);
        },
        options.threads);

    // Transitions; the episode reward is credited to every section.
    Batch batch;
    const int n_tr = n_env * n_sec;
    batch.obs.resize(task.obs_dim(), n_tr);
    batch.actions.resize(policy.act_dim(), n_tr);
    batch.log_probs.resize(n_tr);
    batch.advantages.resize(n_tr);
    batch.returns.resize(n_tr);
    std::vector<double> r(n_sec), v(n_sec), adv(n_sec), ret(n_sec);
    for (int i = 0; i < n_env; ++i) {
      for (int k = 0; k < n_sec; ++k) {
        r[k] = rewards[i];
        v[k] = samples[k][i].value;
      }
      gae(r, v, 0.0, cfg.gamma, cfg.gae_lambda, adv, ret);
      for (int k = 0; k < n_sec; ++k) {
        const int c = i * n_sec + k;
        for (int j = 0; j < task.obs_dim(); ++j) batch.obs(j, c) = setups[i].observations[k][j];
        for (int j = 0; j < policy.act_dim(); ++j) batch.actions(j, c) = samples[k][i].raw[j];
        batch.log_probs(c) = samples[k][i].log_prob;
        batch.advantages(c) = adv[k];
        batch.returns(c) = ret[k];
      }
    }

    UpdateRecord rec;
    rec.update = u;
    std::vector<double> steps(n_env);
    for (int i = 0; i < n_env; ++i) {
      rec.mean_fidelity += results[i].fidelity / n_env;
      rec.max_fidelity = std::max(rec.max_fidelity, results[i].fidelity);
      rec.mean_reward += rewards[i] / n_env;
      if (results[i].status != SolveStatus::ok) ++rec.budget_exceeded_count;
      steps[i] = results[i].steps_taken;
      total_steps += steps[i];
    }
    total_episodes += n_env;
    rec.mean_steps = 0.0;
    for (double s : steps) rec.mean_steps += s / n_env;
    rec.median_steps = median(steps);

    rec.ppo = ppo_update(policy, adam, std::move(batch), cfg, shuffle_rng);

    report.best_max_fidelity = std::max(report.best_max_fidelity, rec.max_fidelity);
    const bool improved = rec.mean_fidelity > report.best_mean_fidelity;
    if (improved) report.best_mean_fidelity = rec.mean_fidelity;
    if (improved && options.track_best_waveform) evaluate_best();
    rec.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t_update).count();
    report.history.push_back(rec);
    if (options.on_update) options.on_update(rec);
    if (options.stop_fidelity > 0.0 && report.best_mean_fidelity >= options.stop_fidelity) break;
  }
  report.mean_steps = total_episodes > 0 ? total_steps / total_episodes : 0.0;
  report.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t_start).count();
  return report;
}

}  // namespace qcrl
