#pragma once

#include "qcrl/environment.hpp"
#include "qcrl/noise.hpp"

#include <cstdint>
#include <vector>

namespace qcrl {

/// Per-episode bias on amplitude channels: mu_Omega ~ U[-mu_sigma, mu_sigma]
/// is used as the OU mean, so the path settles near sigma^2 mu / alpha^2.
struct BiasNoise {
  double mu_sigma = 0.0;
  double sigma = 0.1;
  double alpha = 0.1;

  void validate() const;
  bool enabled() const { return mu_sigma > 0.0; }
};

/// Everything the policy sees and the simulator needs for one episode.
struct EpisodeSetup {
  std::vector<std::vector<double>> observations;  // one per section
  EpisodeNoise noise;
};

/// Splits an environment's action into equal time sections. With one section
/// this is the bandit setting with a constant zero observation. With several
/// sections the observation at section k is (O_k, k / n_sections), where
/// O_0 = 0 and O_k = mu_Omega / omega_scale afterwards. The reward is only
/// known after the last section.
class EpisodeTask {
 public:
  EpisodeTask(const Environment& env, int n_sections, NoiseConfig noise, BiasNoise bias);

  const Environment& env() const { return *env_; }
  int sections() const { return n_sections_; }
  int obs_dim() const { return n_sections_ > 1 ? 2 : 1; }
  int section_action_dim() const;
  const NoiseConfig& noise_config() const { return noise_; }
  const BiasNoise& bias() const { return bias_; }

  EpisodeSetup reset(std::uint64_t seed, std::uint64_t env_index, std::uint64_t episode_index) const;

  /// Concatenates per-section actions into the environment's raw action.
  std::vector<double> assemble(const std::vector<std::vector<double>>& section_actions) const;

 private:
  const Environment* env_;
  int n_sections_;
  NoiseConfig noise_;
  BiasNoise bias_;
  double omega_scale_ = 1.0;
};

}  // namespace qcrl
