#include "qcrl/reward.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qcrl {

void RewardWeights::validate() const {
  if (w_fidelity < 0.0 || w_omega < 0.0 || w_delta < 0.0 || w_area < 0.0 || w_excited < 0.0) {
    throw ConfigError("reward weights must be >= 0");
  }
  if (!(fidelity_floor > 0.0) || fidelity_floor >= 1.0) throw ConfigError("fidelity_floor must lie in (0, 1)");
  if (!(r_penalty < -w_fidelity * std::log(1.0 / fidelity_floor))) {
    throw ConfigError("r_penalty must lie below every achievable reward");
  }
}

RewardBaselines compute_baselines(const Environment& env) {
  RewardBaselines b;
  int n_amp = 0;
  for (const auto& c : env.channels()) {
    const double s = env.smoothness_baseline(c);
    if (c.kind == ChannelKind::amplitude) {
      b.smoothness_amplitude += s;
      if (n_amp++ == 0) b.area = env.area_reference() * blackman_area(c.n_samples, env.duration());
    } else {
      b.smoothness_detuning += s;
    }
  }
  return b;
}

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

RewardTerms reward_terms(const EpisodeResult& result, const RewardWeights& w, const RewardBaselines& b,
                         const std::vector<ChannelSpec>& channels, int max_steps) {
  RewardTerms t;
  if (result.status != SolveStatus::ok || result.steps_taken >= max_steps) {
    t.penalised = true;
    t.total = w.r_penalty;
    return t;
  }
  double s_amp = 0.0, s_det = 0.0, area = 0.0;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].kind == ChannelKind::amplitude) {
      s_amp += result.smoothness[c];
      area += result.areas[c];
    } else {
      s_det += result.smoothness[c];
    }
  }
  t.fidelity_term = -w.w_fidelity * std::log(std::max(1.0 - result.fidelity, w.fidelity_floor));
  if (b.smoothness_amplitude > 0.0) t.omega_penalty = w.w_omega * relu(s_amp / b.smoothness_amplitude - 1.0);
  if (b.smoothness_detuning > 0.0) t.delta_penalty = w.w_delta * relu(s_det / b.smoothness_detuning - 1.0);
  if (b.area > 0.0) t.area_penalty = w.w_area * area / b.area;
  t.excited_penalty = w.w_excited * result.mean_excited;
  t.total = t.fidelity_term - t.omega_penalty - t.delta_penalty - t.area_penalty - t.excited_penalty;
  return t;
}

double reward(const EpisodeResult& result, const RewardWeights& weights, const RewardBaselines& baselines,
              const std::vector<ChannelSpec>& channels, int max_steps) {
  return reward_terms(result, weights, baselines, channels, max_steps).total;
}

double min_finished_reward(const RewardWeights& w, double max_smoothness_ratio, double max_area_ratio,
                           double max_excited) {
  // F = 0 gives a fidelity term of exactly 0.
  return -w.w_omega * relu(max_smoothness_ratio - 1.0) - w.w_delta * relu(max_smoothness_ratio - 1.0) -
         w.w_area * max_area_ratio - w.w_excited * max_excited;
}

}  // namespace qcrl
