#include "qcrl/config.hpp"
#include "qcrl/errors.hpp"
#include "qcrl/reward.hpp"
#include "qcrl/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qcrl;

namespace {

EpisodeResult finished(double f, std::vector<double> smoothness, std::vector<double> areas) {
  EpisodeResult r;
  r.fidelity = f;
  r.steps_taken = 10;
  r.smoothness = std::move(smoothness);
  r.areas = std::move(areas);
  return r;
}

}  // namespace

TEST(Reward, FidelityTermAndFloor) {
  const std::vector<ChannelSpec> ch{amplitude_channel("a", 1.0, 10, 0.0)};
  RewardWeights w;
  w.w_omega = 0.0;
  const RewardBaselines b{1.0, 0.0, 1.0};
  EXPECT_NEAR(reward(finished(0.9, {0.0}, {0.0}), w, b, ch, 100), -std::log(0.1), 1e-12);
  EXPECT_NEAR(reward(finished(1.0, {0.0}, {0.0}), w, b, ch, 100), -std::log(1e-6), 1e-9);
  EXPECT_NEAR(reward(finished(0.0, {0.0}, {0.0}), w, b, ch, 100), 0.0, 1e-15);
}

TEST(Reward, SmoothnessDeadZoneAndAreaTerm) {
  const std::vector<ChannelSpec> ch{amplitude_channel("a", 1.0, 10, 0.0), detuning_channel("d", 1.0, 10, 0.0)};
  RewardWeights w;
  w.w_omega = 0.5;
  w.w_delta = 0.25;
  w.w_area = 2.0;
  const RewardBaselines b{4.0, 2.0, 8.0};
  // Below the baselines only the fidelity and area terms count.
  auto t = reward_terms(finished(0.5, {3.9, 1.9}, {2.0, 0.0}), w, b, ch, 100);
  EXPECT_EQ(t.omega_penalty, 0.0);
  EXPECT_EQ(t.delta_penalty, 0.0);
  EXPECT_NEAR(t.area_penalty, 2.0 * 2.0 / 8.0, 1e-15);
  EXPECT_NEAR(t.total, -std::log(0.5) - 0.5, 1e-12);
  t = reward_terms(finished(0.5, {8.0, 3.0}, {0.0, 0.0}), w, b, ch, 100);
  EXPECT_NEAR(t.omega_penalty, 0.5 * (8.0 / 4.0 - 1.0), 1e-15);
  EXPECT_NEAR(t.delta_penalty, 0.25 * (3.0 / 2.0 - 1.0), 1e-15);
}

TEST(Reward, ExcitedPenalty) {
  const std::vector<ChannelSpec> ch{amplitude_channel("a", 1.0, 10, 0.0)};
  RewardWeights w;
  w.w_excited = 3.0;
  auto r = finished(0.0, {0.0}, {0.0});
  r.mean_excited = 0.2;
  EXPECT_NEAR(reward(r, w, {1.0, 0.0, 1.0}, ch, 100), -0.6, 1e-15);
}

TEST(Reward, PenaltyWhenBudgetReached) {
  const std::vector<ChannelSpec> ch{amplitude_channel("a", 1.0, 10, 0.0)};
  const RewardWeights w;
  auto r = finished(0.99, {0.0}, {0.0});
  r.steps_taken = 100;
  EXPECT_EQ(reward(r, w, {1.0, 0.0, 1.0}, ch, 100), w.r_penalty);
  r.steps_taken = 99;
  EXPECT_GT(reward(r, w, {1.0, 0.0, 1.0}, ch, 100), 0.0);
  r.status = SolveStatus::step_underflow;
  EXPECT_EQ(reward(r, w, {1.0, 0.0, 1.0}, ch, 100), w.r_penalty);
}

TEST(Reward, PenaltyProperty) {
  const RunConfig cfg = default_config(EnvVariant::lambda);
  const auto env = make_environment(cfg);
  const auto b = compute_baselines(*env);
  SolverConfig solver = cfg.solver;
  solver.max_steps = 50;
  CounterRng rng(stream_key({5}));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(env->action_dim());
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    const auto r = env->evaluate(a, nullptr, solver);
    ASSERT_GE(r.steps_taken, 50);
    ASSERT_EQ(reward(r, cfg.reward, b, env->channels(), solver.max_steps), cfg.reward.r_penalty);
  }
}

TEST(Reward, BlackmanShapedChannelsAreFree) {
  for (auto variant : {EnvVariant::lambda, EnvVariant::rydberg_two_photon, EnvVariant::transmon}) {
    RunConfig cfg = default_config(variant);
    for (auto kind : {SmoothnessKind::lowpass, SmoothnessKind::second_derivative}) {
      cfg.signal.smoothness.kind = kind;
      const auto env = make_environment(cfg);
      const auto b = compute_baselines(*env);
      EpisodeResult r;
      r.fidelity = 0.5;
      for (const auto& c : env->channels()) {
        auto s = blackman(c.n_samples);
        for (double& v : s) v *= c.max_value;
        r.smoothness.push_back(env->smoothness()(s, env->duration()));
        r.areas.push_back(0.0);
      }
      const auto t = reward_terms(r, cfg.reward, b, env->channels(), 1000);
      EXPECT_EQ(t.omega_penalty, 0.0);
      EXPECT_EQ(t.delta_penalty, 0.0);
      // Any smaller multiple of the window is free as well.
      for (auto& s : r.smoothness) s *= 0.3;
      EXPECT_EQ(reward_terms(r, cfg.reward, b, env->channels(), 1000).omega_penalty, 0.0);
    }
  }
}

TEST(Reward, AreaBaselineUsesFirstAmplitudeChannel) {
  const auto env = make_environment(default_config(EnvVariant::lambda));
  const auto b = compute_baselines(*env);
  EXPECT_NEAR(b.area, 30.0 * blackman_area(50, 1.0), 1e-12);
  EXPECT_GT(b.smoothness_amplitude, 0.0);
  EXPECT_GT(b.smoothness_detuning, 0.0);
}

TEST(Reward, WeightValidation) {
  RewardWeights w;
  w.r_penalty = -5.0;
  EXPECT_THROW(w.validate(), ConfigError);
  w.r_penalty = -20.0;
  w.w_area = -1.0;
  EXPECT_THROW(w.validate(), ConfigError);
  w.w_area = 0.0;
  w.fidelity_floor = 0.0;
  EXPECT_THROW(w.validate(), ConfigError);
}

TEST(Reward, PenaltyBelowEveryFinishedRewardWithBoundedPenalties) {
  const RewardWeights w;
  EXPECT_LT(w.r_penalty, min_finished_reward(w, 100.0, 0.0, 0.0));
}
