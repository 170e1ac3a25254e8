#include "qcrl/commands.hpp"

#include "qcrl/errors.hpp"
#include "qcrl/parallel.hpp"
#include "qcrl/trainer.hpp"
#include "qcrl/waveform_io.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>

namespace qcrl {

using nlohmann::json;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const char* file) { return (std::filesystem::path(dir) / file).string(); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void mean_sd(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  for (double x : v) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
}

TrainOptions train_options(const RunConfig& config, std::uint64_t seed, int threads) {
  TrainOptions o;
  o.ppo = config.ppo;
  o.reward = config.reward;
  o.solver = config.solver;
  o.seed = seed;
  o.threads = threads;
  o.stop_fidelity = config.stop_fidelity;
  return o;
}

json metrics_line(std::uint64_t seed, const UpdateRecord& r) {
  return {{"seed", seed},
          {"update", r.update},
          {"mean_fidelity", r.mean_fidelity},
          {"max_fidelity", r.max_fidelity},
          {"mean_reward", r.mean_reward},
          {"budget_exceeded", r.budget_exceeded_count},
          {"mean_steps", r.mean_steps},
          {"median_steps", r.median_steps},
          {"wall_ms", r.wall_ms},
          {"policy_loss", r.ppo.policy_loss},
          {"value_loss", r.ppo.value_loss},
          {"entropy", r.ppo.entropy},
          {"approx_kl", r.ppo.approx_kl},
          {"clip_frac", r.ppo.clip_frac},
          {"grad_norm", r.ppo.grad_norm}};
}

}  // namespace

TrainSummary cmd_train(const RunConfig& config, const std::string& out_dir, std::ostream* log) {
  config.validate();
  ensure_dir(out_dir);
  write_text(join(out_dir, "config.json"), serialize_config(config));
  const auto env = make_environment(config);
  const EpisodeTask task = make_task(*env, config);

  std::ofstream metrics(join(out_dir, "metrics.jsonl"));
  if (!metrics) throw std::runtime_error("cannot write metrics.jsonl");

  TrainSummary summary;
  std::vector<std::vector<Waveform>> best_waveforms;
  std::vector<std::vector<double>> best_scalars;
  for (std::uint64_t seed : config.seeds) {
    TrainOptions o = train_options(config, seed, 0);
    o.on_update = [&](const UpdateRecord& r) {
      metrics << metrics_line(seed, r).dump() << "\n";
      if (log != nullptr && (r.update % 10 == 0 || r.update + 1 == config.ppo.num_updates)) {
        *log << "seed " << seed << " update " << r.update << " mean F " << std::setprecision(6) << r.mean_fidelity
             << " max F " << r.max_fidelity << " steps " << r.median_steps << "\n";
      }
    };
    const TrainReport rep = train(task, o);
    metrics.flush();

    SeedSummary s;
    s.seed = seed;
    s.updates = static_cast<int>(rep.history.size());
    s.best_fidelity = rep.best_mean_fidelity;
    s.best_max_fidelity = rep.best_max_fidelity;
    s.mean_steps = rep.mean_steps;
    s.wall_ms = rep.wall_ms;
    s.best_action = rep.best_action;
    // Replays exactly what gets saved, so eval of best_waveform.csv agrees.
    std::vector<Waveform> w = env->decode(rep.best_action);
    std::vector<double> sc = env->decode_scalars(rep.best_action);
    s.waveform_fidelity = env->evaluate_waveforms(w, sc, config.solver).fidelity;
    best_waveforms.push_back(std::move(w));
    best_scalars.push_back(std::move(sc));
    summary.seeds.push_back(std::move(s));
  }

  std::vector<double> best;
  for (const auto& s : summary.seeds) best.push_back(s.best_fidelity);
  mean_sd(best, summary.mean_best_fidelity, summary.sd_best_fidelity);
  for (std::size_t i = 1; i < summary.seeds.size(); ++i) {
    if (summary.seeds[i].waveform_fidelity > summary.seeds[summary.best_seed_index].waveform_fidelity) {
      summary.best_seed_index = i;
    }
  }
  const std::size_t b = summary.best_seed_index;
  save_waveform_csv(join(out_dir, "best_waveform.csv"), best_waveforms[b], env->scalars(), best_scalars[b],
                    config.noise.grid_rate);

  json report;
  report["environment"] = env->name();
  report["n_seeds"] = summary.seeds.size();
  report["best_fidelity"] = {{"mean", summary.mean_best_fidelity}, {"sd", summary.sd_best_fidelity}, {"values", best}};
  report["best_waveform"] = {{"seed", summary.seeds[b].seed}, {"fidelity", summary.seeds[b].waveform_fidelity}};
  json per = json::array();
  for (const auto& s : summary.seeds) {
    per.push_back({{"seed", s.seed},
                   {"updates", s.updates},
                   {"best_fidelity", s.best_fidelity},
                   {"best_max_fidelity", s.best_max_fidelity},
                   {"waveform_fidelity", s.waveform_fidelity},
                   {"mean_steps", s.mean_steps},
                   {"wall_ms", s.wall_ms}});
  }
  report["seeds"] = per;
  write_text(join(out_dir, "report.json"), report.dump(2) + "\n");
  return summary;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::max_steps:
      return "max_steps";
    case SweepAxis::area_weight:
      return "area_weight";
    case SweepAxis::smoothing:
      return "smoothing";
    case SweepAxis::noise_sigma:
      return "noise_sigma";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  for (SweepAxis a : {SweepAxis::max_steps, SweepAxis::area_weight, SweepAxis::smoothing, SweepAxis::noise_sigma}) {
    if (to_string(a) == s) return a;
  }
  throw ConfigError("unknown sweep axis '" + s + "' (max_steps, area_weight, smoothing, noise_sigma)");
}

RunConfig apply_axis(const RunConfig& config, SweepAxis axis, double value) {
  RunConfig c = config;
  switch (axis) {
    case SweepAxis::max_steps:
      if (value < 1.0 || value != std::floor(value)) throw ConfigError("max_steps values must be positive integers");
      c.solver.max_steps = static_cast<int>(value);
      break;
    case SweepAxis::area_weight:
      c.reward.w_area = value;
      break;
    case SweepAxis::smoothing:
      c.signal.smooth_sigma = value;
      break;
    case SweepAxis::noise_sigma: {
      const auto env = make_environment(config);
      for (const auto& ch : env->channels()) {
        bool found = false;
        for (auto& n : c.noise.channels) {
          if (n.channel == ch.name) {
            n.params.sigma = value;
            found = true;
          }
        }
        if (!found) c.noise.channels.push_back({ch.name, OuParams{value, 0.0, 0.1}});
      }
      break;
    }
  }
  c.validate();
  return c;
}

std::vector<SweepRow> cmd_sweep(const RunConfig& config, SweepAxis axis, const std::vector<double>& values,
                                const std::string& out_dir, std::ostream* log) {
  if (values.empty()) throw ConfigError("sweep needs at least one axis value");
  config.validate();
  std::vector<RunConfig> configs;
  for (double v : values) configs.push_back(apply_axis(config, axis, v));
  ensure_dir(out_dir);
  write_text(join(out_dir, "config.json"), serialize_config(config));

  const std::size_t n_seeds = config.seeds.size();
  const std::size_t cells = values.size() * n_seeds;
  std::vector<SweepRow> rows(cells);
  const int workers = default_thread_count();
  // Cells run in parallel; each training then runs single-threaded.
  const int inner = cells > 1 && workers > 1 ? 1 : 0;
  std::mutex log_mutex;
  parallel_for(
      cells,
      [&](std::size_t i) {
        const RunConfig& c = configs[i / n_seeds];
        const std::uint64_t seed = c.seeds[i % n_seeds];
        const auto env = make_environment(c);
        const EpisodeTask task = make_task(*env, c);
        const TrainReport rep = train(task, train_options(c, seed, inner));
        SweepRow& r = rows[i];
        r.axis_value = values[i / n_seeds];
        r.seed = seed;
        r.best_fidelity = rep.best_mean_fidelity;
        r.min_infidelity = 1.0 - rep.best_max_fidelity;
        r.mean_steps = rep.mean_steps;
        r.wall_ms = rep.wall_ms;
        if (log != nullptr) {
          std::lock_guard lock(log_mutex);
          *log << to_string(axis) << "=" << r.axis_value << " seed " << seed << " best F " << r.best_fidelity << "\n";
        }
      },
      cells > 1 ? workers : 1);

  std::ofstream out(join(out_dir, "sweep.csv"));
  if (!out) throw std::runtime_error("cannot write sweep.csv");
  out << kSweepHeader << "\n" << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.axis_value << "," << r.seed << "," << r.best_fidelity << "," << r.min_infidelity << "," << r.mean_steps
        << "," << r.wall_ms << "\n";
  }
  return rows;
}

namespace {

std::vector<double> scalars_for(const Environment& env, const WaveformFile& file) {
  std::vector<double> out;
  for (const auto& s : env.scalars()) {
    std::size_t i = 0;
    while (i < file.scalar_names.size() && file.scalar_names[i] != s.name) ++i;
    if (i == file.scalar_names.size()) throw StructuralError("waveform file lacks scalar '" + s.name + "'");
    out.push_back(file.scalars[i]);
  }
  return out;
}

}  // namespace

EvalSummary cmd_eval(const RunConfig& config, const std::string& waveform_path, int n_trials,
                     const std::string& out_dir) {
  config.validate();
  if (n_trials < 1) throw ConfigError("eval needs at least one trial");
  const WaveformFile file = load_waveform_csv(waveform_path);
  const auto env = make_environment(config);
  const EpisodeTask task = make_task(*env, config);
  const std::vector<Waveform> waveforms = waveforms_for(*env, file);
  const std::vector<double> scalars = scalars_for(*env, file);
  const std::uint64_t seed = config.seeds.front();

  EvalSummary s;
  s.noiseless_fidelity = env->evaluate_waveforms(waveforms, scalars, config.solver).fidelity;
  s.fidelities.resize(n_trials);
  std::vector<int> failed(n_trials, 0);
  parallel_for(static_cast<std::size_t>(n_trials), [&](std::size_t i) {
    const EpisodeSetup setup = task.reset(seed, 0, i);
    const EpisodeResult r = env->evaluate_waveforms(with_noise(waveforms, setup.noise), scalars, config.solver);
    s.fidelities[i] = r.fidelity;
    failed[i] = r.status == SolveStatus::ok ? 0 : 1;
  });
  for (int f : failed) s.failed_trials += f;
  mean_sd(s.fidelities, s.mean_fidelity, s.sd_fidelity);

  ensure_dir(out_dir);
  json j;
  j["environment"] = env->name();
  j["seed"] = seed;
  j["n_trials"] = n_trials;
  j["noiseless_fidelity"] = s.noiseless_fidelity;
  j["mean_fidelity"] = s.mean_fidelity;
  j["sd_fidelity"] = s.sd_fidelity;
  j["failed_trials"] = s.failed_trials;
  j["fidelities"] = s.fidelities;
  write_text(join(out_dir, "eval.json"), j.dump(2) + "\n");
  return s;
}

HcgsFitResult cmd_fit_hcgs(const RunConfig& config, const std::string& waveform_path, const std::string& out_dir) {
  config.validate();
  const WaveformFile file = load_waveform_csv(waveform_path);
  const auto env = make_environment(config);
  const std::vector<Waveform> waveforms = waveforms_for(*env, file);
  const HcgsFitResult fit = fit_hcgs(*env, waveforms, config.solver);

  ensure_dir(out_dir);
  json j;
  j["environment"] = env->name();
  j["params"] = {{"omega0", fit.params.omega0},
                 {"t0", fit.params.t0},
                 {"delta0", fit.params.delta0},
                 {"t1", fit.params.t1}};
  j["amplitude_rmse"] = fit.amplitude_rmse;
  j["detuning_rmse"] = fit.detuning_rmse;
  j["detuning_degenerate"] = fit.detuning_degenerate;
  j["t1_constrained"] = !fit.detuning_degenerate;
  j["source_fidelity"] = fit.source_fidelity;
  j["fitted_fidelity"] = fit.fitted_fidelity;
  write_text(join(out_dir, "hcgs_fit.json"), j.dump(2) + "\n");
  save_waveform_csv(join(out_dir, "hcgs_waveform.csv"), hcgs_waveforms(*env, fit.params), {}, {},
                    config.noise.grid_rate);
  return fit;
}

AnalysisSummary analyze_waveforms(const std::vector<Waveform>& waveforms, const LowpassParams& lowpass) {
  AnalysisSummary a;
  const Waveform* detuning = nullptr;
  for (const auto& w : waveforms) {
    ChannelAnalysis c;
    c.name = w.spec().name;
    c.kind = to_string(w.spec().kind);
    c.smoothness_lowpass = smoothness_lowpass(w.samples(), w.duration(), lowpass);
    c.smoothness_sder = smoothness_sder(w.samples(), w.duration());
    c.area = pulse_area(w);
    a.channels.push_back(c);
    if (detuning == nullptr && w.spec().kind == ChannelKind::detuning) detuning = &w;
  }
  for (const auto& w : waveforms) {
    if (w.spec().kind != ChannelKind::amplitude) continue;
    InstantaneousAnalysis ia;
    ia.amplitude = w.spec().name;
    std::function<double(double)> delta = [](double) { return 0.0; };
    if (detuning != nullptr) {
      ia.detuning = detuning->spec().name;
      delta = [detuning](double t) { return (*detuning)(t); };
    }
    ia.stats = instantaneous_analysis([&w](double t) { return w(t); }, delta, w.duration());
    a.instantaneous.push_back(ia);
  }
  return a;
}

AnalysisSummary cmd_analyze(const std::string& waveform_path, const std::string& out_dir,
                            const LowpassParams& lowpass) {
  const WaveformFile file = load_waveform_csv(waveform_path);
  const AnalysisSummary a = analyze_waveforms(file.waveforms, lowpass);
  ensure_dir(out_dir);
  json j;
  j["duration_us"] = file.duration;
  json ch = json::array();
  for (const auto& c : a.channels) {
    ch.push_back({{"name", c.name},
                  {"kind", c.kind},
                  {"smoothness_lowpass", c.smoothness_lowpass},
                  {"smoothness_sder", c.smoothness_sder},
                  {"area", c.area}});
  }
  j["channels"] = ch;
  json inst = json::array();
  for (const auto& i : a.instantaneous) {
    inst.push_back({{"amplitude", i.amplitude},
                    {"detuning", i.detuning},
                    {"mean_step", i.stats.mean_step},
                    {"max_step", i.stats.max_step}});
  }
  j["instantaneous"] = inst;
  write_text(join(out_dir, "analysis.json"), j.dump(2) + "\n");
  return a;
}

}  // namespace qcrl
