#pragma once

#include "qcrl/environment.hpp"

namespace qcrl {

struct RewardWeights {
  double w_fidelity = 1.0;
  double w_omega = 0.001;  // amplitude smoothness
  double w_delta = 0.001;  // detuning smoothness
  double w_area = 0.0;
  double w_excited = 0.0;
  double r_penalty = -20.0;
  double fidelity_floor = 1e-6;  // floor on 1 - F inside the log

  void validate() const;
};

/// Reference values the penalty terms are normalised by.
struct RewardBaselines {
  double smoothness_amplitude = 0.0;  // sum of S(max * Blackman) over amplitude channels
  double smoothness_detuning = 0.0;   // same over detuning channels
  double area = 0.0;                  // reference amplitude * Blackman area
};

RewardBaselines compute_baselines(const Environment& env);

struct RewardTerms {
  double fidelity_term = 0.0;
  double omega_penalty = 0.0;
  double delta_penalty = 0.0;
  double area_penalty = 0.0;
  double excited_penalty = 0.0;
  bool penalised = false;
  double total = 0.0;
};

/// Reward of one episode. Any episode that did not finish within the step
/// budget (status != ok or steps_taken >= max_steps) receives r_penalty.
RewardTerms reward_terms(const EpisodeResult& result, const RewardWeights& weights,
                         const RewardBaselines& baselines, const std::vector<ChannelSpec>& channels,
                         int max_steps);
double reward(const EpisodeResult& result, const RewardWeights& weights, const RewardBaselines& baselines,
              const std::vector<ChannelSpec>& channels, int max_steps);

/// Lowest reward any finished episode can receive with these weights, given
/// an upper bound on the penalty ratios.
double min_finished_reward(const RewardWeights& weights, double max_smoothness_ratio, double max_area_ratio,
                           double max_excited);

}  // namespace qcrl
