#include "qcrl/environment.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>

namespace qcrl {

Environment::Environment(double duration, std::vector<ChannelSpec> channels, std::vector<ScalarSpec> scalars,
                         SmoothnessFunctional smoothness)
    : duration_(duration),
      channels_(std::move(channels)),
      scalars_(std::move(scalars)),
      smoothness_(smoothness) {
  if (!(duration_ > 0.0)) throw ConfigError("environment duration must be positive");
  if (channels_.empty()) throw ConfigError("environment needs at least one channel");
  for (const auto& c : channels_) c.validate();
}

int Environment::action_dim() const {
  int n = static_cast<int>(scalars_.size());
  for (const auto& c : channels_) n += c.n_samples;
  return n;
}

int Environment::output_points() const { return channels_.front().n_samples; }

std::vector<Waveform> Environment::decode(std::span<const double> raw) const {
  if (static_cast<int>(raw.size()) != action_dim()) {
    throw StructuralError(name() + ": action has " + std::to_string(raw.size()) + " entries, expected " +
                          std::to_string(action_dim()));
  }
  std::vector<Waveform> out;
  out.reserve(channels_.size());
  std::size_t offset = 0;
  for (const auto& c : channels_) {
    out.push_back(build_waveform(raw.subspan(offset, c.n_samples), c, duration_));
    offset += c.n_samples;
  }
  return out;
}

std::vector<double> Environment::decode_scalars(std::span<const double> raw) const {
  std::vector<double> out;
  std::size_t offset = raw.size() - scalars_.size();
  for (const auto& s : scalars_) {
    out.push_back(s.center + std::clamp(raw[offset++], -1.0, 1.0) * s.half_range);
  }
  return out;
}

double Environment::area_reference() const {
  for (const auto& c : channels_) {
    if (c.kind == ChannelKind::amplitude) return c.max_value;
  }
  return 0.0;
}

OperatorMatrix Environment::hamiltonian(std::span<const double> channel_values,
                                        std::span<const double> scalars) const {
  const SystemModel m = model(scalars);
  std::vector<double> coeffs(m.controls.size());
  coefficients(channel_values, scalars, coeffs);
  OperatorMatrix h = m.drift;
  for (std::size_t j = 0; j < coeffs.size(); ++j) h += coeffs[j] * m.controls[j];
  return h;
}

RhsFunction Environment::make_rhs(std::vector<Waveform> waveforms, std::vector<double> scalars) const {
  if (waveforms.size() != channels_.size()) throw StructuralError("waveform count does not match channels");
  if (scalars.size() != scalars_.size()) throw StructuralError("scalar count does not match");
  SystemModel m = model(scalars);
  struct State {
    LindbladGenerator gen;
    std::vector<Waveform> waveforms;
    std::vector<double> scalars;
    std::vector<double> values;
    std::vector<double> coeffs;
  };
  auto state = std::make_shared<State>(State{LindbladGenerator(m.drift, std::move(m.controls), std::move(m.collapse)),
                                             std::move(waveforms), std::move(scalars), {}, {}});
  state->values.resize(state->waveforms.size());
  state->coeffs.resize(state->gen.num_controls());
  return [this, state](double t, const CMatrix& rho, CMatrix& out) {
    for (std::size_t c = 0; c < state->waveforms.size(); ++c) state->values[c] = state->waveforms[c](t);
    coefficients(state->values, state->scalars, state->coeffs);
    state->gen.apply(state->coeffs, rho, out);
  };
}

SolverConfig Environment::solver_config(const SolverConfig& base) const {
  SolverConfig cfg = base;
  cfg.t0 = 0.0;
  cfg.t1 = duration_;
  const int n = output_points();
  cfg.output_times.resize(n);
  for (int i = 0; i < n; ++i) cfg.output_times[i] = duration_ * i / (n - 1);
  cfg.output_times.back() = duration_;
  return cfg;
}

std::vector<Waveform> with_noise(const std::vector<Waveform>& waveforms, const EpisodeNoise& noise) {
  std::vector<Waveform> out = waveforms;
  for (std::size_t c = 0; c < out.size() && c < noise.paths.size(); ++c) {
    if (!noise.paths[c].empty()) out[c].set_noise(noise.paths[c], noise.clamp_amplitude);
  }
  return out;
}

EpisodeResult Environment::evaluate(std::span<const double> raw, const EpisodeNoise* noise,
                                    const SolverConfig& solver) const {
  std::vector<Waveform> w = decode(raw);
  if (noise != nullptr && !noise->empty()) w = with_noise(w, *noise);
  return evaluate_waveforms(std::move(w), decode_scalars(raw), solver);
}

EpisodeResult Environment::evaluate_waveforms(std::vector<Waveform> waveforms, std::vector<double> scalars,
                                              const SolverConfig& solver) const {
  EpisodeResult r;
  r.scalars = scalars;
  for (const auto& w : waveforms) {
    r.smoothness.push_back(smoothness_(w.samples(), w.duration()));
    r.areas.push_back(pulse_area(w));
  }
  const SolverConfig cfg = solver_config(solver);
  const SolveResult sr = integrate(make_rhs(std::move(waveforms), std::move(scalars)), initial_state(), cfg);
  r.status = sr.status;
  r.steps_taken = sr.steps_taken;
  if (sr.status != SolveStatus::ok) return r;
  r.fidelity = fidelity(sr.final_state);
  double excited = 0.0;
  for (const auto& s : sr.states_at_outputs) excited += excited_population(s);
  r.mean_excited = sr.states_at_outputs.empty() ? 0.0 : excited / sr.states_at_outputs.size();
  return r;
}

double Environment::smoothness_baseline(const ChannelSpec& spec) const {
  std::vector<double> b = blackman(spec.n_samples);
  for (double& v : b) v *= spec.max_value;
  return smoothness_(b, duration_);
}

}  // namespace qcrl
