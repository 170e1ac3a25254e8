#include "qcrl/multistep.hpp"

#include "qcrl/errors.hpp"

namespace qcrl {

void BiasNoise::validate() const {
  if (!(mu_sigma >= 0.0)) throw ConfigError("mu_sigma must be >= 0");
  OuParams{sigma, 0.0, alpha}.validate();
}

EpisodeTask::EpisodeTask(const Environment& env, int n_sections, NoiseConfig noise, BiasNoise bias)
    : env_(&env), n_sections_(n_sections), noise_(std::move(noise)), bias_(bias) {
  if (n_sections < 1) throw ConfigError("number of sections must be >= 1");
  bias_.validate();
  noise_.validate();
  if (!env.scalars().empty() && n_sections > 1) {
    throw ConfigError("multi-step episodes do not support scalar actions");
  }
  for (const auto& c : env.channels()) {
    if (c.n_samples % n_sections != 0) {
      throw ConfigError("channel " + c.name + ": n_samples must be divisible by the number of sections");
    }
  }
  for (const auto& c : noise_.channels) {
    bool found = false;
    for (const auto& ch : env.channels()) found = found || ch.name == c.channel;
    if (!found) throw ConfigError("noise configured for unknown channel '" + c.channel + "'");
  }
  omega_scale_ = env.area_reference() > 0.0 ? env.area_reference() : 1.0;
}

int EpisodeTask::section_action_dim() const {
  int n = 0;
  for (const auto& c : env_->channels()) n += c.n_samples / n_sections_;
  return n + static_cast<int>(env_->scalars().size());
}

EpisodeSetup EpisodeTask::reset(std::uint64_t seed, std::uint64_t env_index, std::uint64_t episode_index) const {
  EpisodeSetup s;
  s.noise = sample_episode_noise(noise_, env_->channels(), env_->duration(), seed, env_index, episode_index);
  if (bias_.enabled()) {
    // Stream index past the channel streams.
    CounterRng rng(stream_key({seed, env_index, episode_index, 0xB1A5ULL}));
    s.noise.mu_omega = rng.uniform(-bias_.mu_sigma, bias_.mu_sigma);
    const int n = dense_grid_size(env_->duration(), noise_.grid_rate);
    const auto& channels = env_->channels();
    for (std::size_t c = 0; c < channels.size(); ++c) {
      if (channels[c].kind != ChannelKind::amplitude) continue;
      const std::vector<double> path = ou_path({bias_.sigma, s.noise.mu_omega, bias_.alpha}, n, rng);
      auto& p = s.noise.paths[c];
      if (p.empty()) {
        p = path;
      } else {
        for (int k = 0; k < n; ++k) p[k] += path[k];
      }
    }
  }
  s.observations.resize(n_sections_);
  for (int k = 0; k < n_sections_; ++k) {
    if (n_sections_ == 1) {
      s.observations[k] = {0.0};
    } else {
      s.observations[k] = {k == 0 ? 0.0 : s.noise.mu_omega / omega_scale_,
                           static_cast<double>(k) / n_sections_};
    }
  }
  return s;
}

std::vector<double> EpisodeTask::assemble(const std::vector<std::vector<double>>& section_actions) const {
  if (static_cast<int>(section_actions.size()) != n_sections_) {
    throw StructuralError("expected one action per section");
  }
  const int per = section_action_dim();
  for (const auto& a : section_actions) {
    if (static_cast<int>(a.size()) != per) throw StructuralError("section action has the wrong size");
  }
  if (n_sections_ == 1) return section_actions.front();
  std::vector<double> raw;
  raw.reserve(env_->action_dim());
  std::size_t offset = 0;
  for (const auto& c : env_->channels()) {
    const int m = c.n_samples / n_sections_;
    for (const auto& a : section_actions) raw.insert(raw.end(), a.begin() + offset, a.begin() + offset + m);
    offset += m;
  }
  return raw;
}

}  // namespace qcrl
