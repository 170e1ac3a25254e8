#pragma once

#include "qcrl/rng.hpp"
#include "qcrl/signals.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qcrl {

/// nu_t = nu_{t-1} (1 - alpha^2) + sqrt(2) sigma X_t alpha + sigma^2 mu, nu_0 = 0.
struct OuParams {
  double sigma = 0.0;  // channel units (MHz)
  double mu = 0.0;
  double alpha = 0.1;  // in (0, 1]

  void validate() const;
  /// sigma * sqrt(2 / (2 - alpha^2)) for mu = 0.
  double stationary_std() const;
};

std::vector<double> ou_path(const OuParams& params, int n, CounterRng& rng);

/// Returns a copy of w with the dense-grid path added. Amplitudes are clamped
/// at zero unless clamp_amplitude is false.
Waveform apply_noise(const Waveform& w, std::vector<double> path, bool clamp_amplitude = true);

struct ChannelNoise {
  std::string channel;
  OuParams params;
};

struct NoiseConfig {
  std::vector<ChannelNoise> channels;
  bool clamp_amplitude = true;
  double grid_rate = 1000.0;  // dense points per us

  bool enabled() const;
  void validate() const;
  const OuParams* find(const std::string& channel) const;
};

/// Noise realisation for one episode: one dense path per channel (empty when
/// the channel is noiseless).
struct EpisodeNoise {
  std::vector<std::vector<double>> paths;
  bool clamp_amplitude = true;
  double mu_omega = 0.0;  // multi-step bias, 0 otherwise

  bool empty() const;
};

/// Draws the paths for (seed, env_index, episode_index); channel c uses the
/// stream keyed by (seed, env_index, episode_index, c).
EpisodeNoise sample_episode_noise(const NoiseConfig& config, const std::vector<ChannelSpec>& channels,
                                  double duration, std::uint64_t seed, std::uint64_t env_index,
                                  std::uint64_t episode_index);

}  // namespace qcrl
