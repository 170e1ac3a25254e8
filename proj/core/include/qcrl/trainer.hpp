#pragma once

#include "qcrl/multistep.hpp"
#include "qcrl/ppo.hpp"
#include "qcrl/reward.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qcrl {

struct UpdateRecord {
  int update = 0;
  double mean_fidelity = 0.0;
  double max_fidelity = 0.0;
  double mean_reward = 0.0;
  int budget_exceeded_count = 0;
  double mean_steps = 0.0;
  double median_steps = 0.0;
  double wall_ms = 0.0;
  UpdateMetrics ppo;
};

struct TrainOptions {
  PpoConfig ppo;
  RewardWeights reward;
  SolverConfig solver;  // tolerances and max_steps
  std::uint64_t seed = 0;
  int threads = 0;              // 0 = default worker count
  double stop_fidelity = 0.0;   // stop once the mean-batch fidelity reaches this (0 = never)
  bool track_best_waveform = true;
  std::function<void(const UpdateRecord&)> on_update;
};

struct TrainReport {
  std::vector<UpdateRecord> history;
  double best_mean_fidelity = 0.0;
  double best_max_fidelity = 0.0;
  /// Deterministic (mean) action of the policy at its best noise-free
  /// evaluation, clamped to [-1, 1], and that evaluation's fidelity.
  std::vector<double> best_action;
  double best_action_fidelity = 0.0;
  double mean_steps = 0.0;  // over all episodes
  double wall_ms = 0.0;
  Policy policy;
};

/// Deterministic action of the policy for the noise-free observation
/// sequence, assembled into the environment's raw action.
std::vector<double> deterministic_action(const Policy& policy, const EpisodeTask& task);
std::vector<double> deterministic_action(const Policy& policy, const EpisodeTask& task,
                                         const std::vector<std::vector<double>>& observations);

struct PolicyEvaluation {
  std::vector<double> fidelities;
  double mean_fidelity = 0.0;
};

/// Deterministic policy on `episodes` fresh noise draws (stream (seed, 0, i)).
PolicyEvaluation evaluate_policy(const Policy& policy, const EpisodeTask& task, std::uint64_t seed, int episodes,
                                 const SolverConfig& solver, int threads = 0);

/// PPO training loop: parallel batch rollout, GAE, clipped update. Results
/// depend only on the seed, not on the number of worker threads.
TrainReport train(const EpisodeTask& task, const TrainOptions& options);

}  // namespace qcrl
