#include "qcrl/noise.hpp"

#include "qcrl/errors.hpp"

#include <cmath>

namespace qcrl {

void OuParams::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("OU alpha must lie in (0, 1]");
  if (!(sigma >= 0.0)) throw ConfigError("OU sigma must be >= 0");
  if (!std::isfinite(mu)) throw ConfigError("OU mu must be finite");
}

double OuParams::stationary_std() const { return sigma * std::sqrt(2.0 / (2.0 - alpha * alpha)); }

std::vector<double> ou_path(const OuParams& params, int n, CounterRng& rng) {
  params.validate();
  if (n < 1) throw ConfigError("OU path length must be >= 1");
  std::vector<double> nu(n, 0.0);
  const double decay = 1.0 - params.alpha * params.alpha;
  const double drive = std::sqrt(2.0) * params.sigma * params.alpha;
  const double bias = params.sigma * params.sigma * params.mu;
  for (int t = 1; t < n; ++t) {
    const double x = params.sigma > 0.0 ? rng.normal() : 0.0;
    nu[t] = nu[t - 1] * decay + drive * x + bias;
  }
  return nu;
}

Waveform apply_noise(const Waveform& w, std::vector<double> path, bool clamp_amplitude) {
  Waveform out = w;
  out.set_noise(std::move(path), clamp_amplitude);
  return out;
}

bool NoiseConfig::enabled() const {
  for (const auto& c : channels) {
    if (c.params.sigma > 0.0) return true;
  }
  return false;
}

void NoiseConfig::validate() const {
  for (const auto& c : channels) c.params.validate();
  if (!(grid_rate > 0.0)) throw ConfigError("noise grid_rate must be positive");
}

const OuParams* NoiseConfig::find(const std::string& channel) const {
  for (const auto& c : channels) {
    if (c.channel == channel) return &c.params;
  }
  return nullptr;
}

bool EpisodeNoise::empty() const {
  for (const auto& p : paths) {
    if (!p.empty()) return false;
  }
  return true;
}

EpisodeNoise sample_episode_noise(const NoiseConfig& config, const std::vector<ChannelSpec>& channels,
                                  double duration, std::uint64_t seed, std::uint64_t env_index,
                                  std::uint64_t episode_index) {
  EpisodeNoise noise;
  noise.clamp_amplitude = config.clamp_amplitude;
  noise.paths.resize(channels.size());
  const int n = dense_grid_size(duration, config.grid_rate);
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const OuParams* p = config.find(channels[c].name);
    if (p == nullptr) continue;
    CounterRng rng(stream_key({seed, env_index, episode_index, c}));
    noise.paths[c] = ou_path(*p, n, rng);
  }
  return noise;
}

}  // namespace qcrl
