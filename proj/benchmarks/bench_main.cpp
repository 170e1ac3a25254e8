#include "qcrl/config.hpp"
#include "qcrl/lindblad_generator.hpp"
#include "qcrl/ppo.hpp"
#include "qcrl/rng.hpp"

#include <benchmark/benchmark.h>

using namespace qcrl;

namespace {

std::vector<double> random_action(const Environment& env, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> a(env.action_dim());
  for (double& v : a) v = rng.uniform(-1.0, 1.0);
  return a;
}

EnvVariant variant_of(int i) { return static_cast<EnvVariant>(i); }

void BM_Rhs(benchmark::State& state) {
  const RunConfig c = default_config(variant_of(static_cast<int>(state.range(0))));
  const auto env = make_environment(c);
  const auto a = random_action(*env, 1);
  const RhsFunction rhs = env->make_rhs(env->decode(a), env->decode_scalars(a));
  const CMatrix rho = env->initial_state().matrix();
  CMatrix out;
  double t = 0.0;
  for (auto _ : state) {
    rhs(t, rho, out);
    benchmark::DoNotOptimize(out.data());
    t += 1e-4;
    if (t > env->duration()) t = 0.0;
  }
  state.SetLabel(env->name());
}
BENCHMARK(BM_Rhs)->DenseRange(0, 3);

void BM_Episode(benchmark::State& state) {
  const RunConfig c = default_config(variant_of(static_cast<int>(state.range(0))));
  const auto env = make_environment(c);
  const auto a = random_action(*env, 2);
  long steps = 0;
  for (auto _ : state) {
    const auto r = env->evaluate(a, nullptr, c.solver);
    steps += r.steps_taken;
    benchmark::DoNotOptimize(r.fidelity);
  }
  state.counters["steps"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kAvgIterations);
  state.SetLabel(env->name());
}
BENCHMARK(BM_Episode)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_PpoUpdate(benchmark::State& state) {
  const int obs_dim = 1, act_dim = 200, n = 64;
  PpoConfig cfg;
  Policy policy(obs_dim, act_dim, cfg.hidden, cfg.init_log_std, cfg.log_std_min, cfg.log_std_max, 3);
  CounterRng rng(4);
  Batch b;
  b.obs = Eigen::MatrixXd::Zero(obs_dim, n);
  b.actions = Eigen::MatrixXd(act_dim, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < act_dim; ++i) b.actions(i, j) = rng.normal();
  b.log_probs = Eigen::VectorXd::Constant(n, -200.0);
  b.advantages = Eigen::VectorXd(n);
  b.returns = Eigen::VectorXd(n);
  for (int j = 0; j < n; ++j) {
    b.advantages(j) = rng.normal();
    b.returns(j) = rng.normal();
  }
  Adam adam(policy.num_params(), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
  for (auto _ : state) {
    Policy p = policy;
    Adam a = adam;
    CounterRng shuffle(5);
    benchmark::DoNotOptimize(ppo_update(p, a, b, cfg, shuffle).policy_loss);
  }
}
BENCHMARK(BM_PpoUpdate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
