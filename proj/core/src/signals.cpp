#include "qcrl/signals.hpp"

#include "qcrl/butterworth.hpp"
#include "qcrl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcrl {

std::string to_string(ChannelKind kind) {
  return kind == ChannelKind::amplitude ? "amplitude" : "detuning";
}

ChannelKind channel_kind_from_string(const std::string& s) {
  if (s == "amplitude") return ChannelKind::amplitude;
  if (s == "detuning") return ChannelKind::detuning;
  throw ConfigError("unknown channel kind '" + s + "'");
}

std::string to_string(UniformInterpolant::Kind kind) {
  return kind == UniformInterpolant::Kind::cubic_spline ? "cubic" : "linear";
}

UniformInterpolant::Kind interp_kind_from_string(const std::string& s) {
  if (s == "cubic") return UniformInterpolant::Kind::cubic_spline;
  if (s == "linear") return UniformInterpolant::Kind::linear;
  throw ConfigError("unknown interpolation '" + s + "'");
}

std::string to_string(SmoothnessKind kind) {
  return kind == SmoothnessKind::lowpass ? "lowpass" : "sder";
}

SmoothnessKind smoothness_kind_from_string(const std::string& s) {
  if (s == "lowpass") return SmoothnessKind::lowpass;
  if (s == "sder") return SmoothnessKind::second_derivative;
  throw ConfigError("unknown smoothness functional '" + s + "'");
}

void ChannelSpec::validate() const {
  if (!(max_value > 0.0)) throw ConfigError("channel " + name + ": max_value must be positive");
  if (n_samples < 4) throw ConfigError("channel " + name + ": n_samples must be >= 4");
  if (!(smooth_sigma >= 0.0)) throw ConfigError("channel " + name + ": smooth_sigma must be >= 0");
}

ChannelSpec amplitude_channel(std::string name, double max_value, int n_samples, double smooth_sigma,
                              UniformInterpolant::Kind interp) {
  return {std::move(name), ChannelKind::amplitude, max_value, n_samples, interp, true, smooth_sigma};
}

ChannelSpec detuning_channel(std::string name, double max_value, int n_samples, double smooth_sigma,
                             UniformInterpolant::Kind interp) {
  return {std::move(name), ChannelKind::detuning, max_value, n_samples, interp, false, smooth_sigma};
}

Waveform::Waveform(ChannelSpec spec, std::vector<double> samples, double duration)
    : spec_(std::move(spec)), samples_(std::move(samples)), duration_(duration) {
  if (static_cast<int>(samples_.size()) != spec_.n_samples) {
    throw StructuralError("waveform " + spec_.name + ": sample count does not match channel spec");
  }
  interp_ = UniformInterpolant(samples_, duration_, spec_.interpolation);
}

void Waveform::set_noise(std::vector<double> path, bool clamp_amplitude) {
  if (path.size() < 2) throw StructuralError("noise path needs at least two points");
  noise_ = std::move(path);
  noise_dt_ = duration_ / static_cast<double>(noise_.size() - 1);
  clamp_ = clamp_amplitude;
}

double Waveform::operator()(double t) const {
  double v = interp_(t);
  if (!noise_.empty()) {
    const double x = std::clamp(t, 0.0, duration_) / noise_dt_;
    auto i = static_cast<std::size_t>(x);
    if (i >= noise_.size() - 1) i = noise_.size() - 2;
    const double u = x - static_cast<double>(i);
    v += noise_[i] + u * (noise_[i + 1] - noise_[i]);
    if (spec_.kind == ChannelKind::amplitude && clamp_) v = std::max(v, 0.0);
    return v;
  }
  // Spline overshoot must not produce a negative Rabi frequency.
  if (spec_.kind == ChannelKind::amplitude) v = std::max(v, 0.0);
  return v;
}

std::vector<double> rescale(std::span<const double> raw, const ChannelSpec& spec) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double r = std::clamp(raw[i], -1.0, 1.0);
    out[i] = spec.kind == ChannelKind::amplitude ? 0.5 * (r + 1.0) * spec.max_value : r * spec.max_value;
  }
  return out;
}

std::vector<double> gaussian_smooth(std::span<const double> samples, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_smooth: sigma must be positive");
  const int half = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(2 * half + 1);
  double norm = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double g = std::exp(-0.5 * k * k / (sigma * sigma));
    kernel[k + half] = g;
    norm += g;
  }
  for (double& g : kernel) g /= norm;

  const int n = static_cast<int>(samples.size());
  std::vector<double> out(samples.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    for (int j = lo; j <= hi; ++j) acc += kernel[j - i + half] * samples[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> condition_samples(std::vector<double> physical, const ChannelSpec& spec) {
  if (spec.smooth_sigma > 0.0) physical = gaussian_smooth(physical, spec.smooth_sigma);
  if (spec.pin_endpoints_zero && !physical.empty()) {
    physical.front() = 0.0;
    physical.back() = 0.0;
  }
  return physical;
}

Waveform interpolate(std::vector<double> samples, const ChannelSpec& spec, double duration) {
  return Waveform(spec, std::move(samples), duration);
}

Waveform build_waveform(std::span<const double> raw, const ChannelSpec& spec, double duration) {
  if (static_cast<int>(raw.size()) != spec.n_samples) {
    throw StructuralError("channel " + spec.name + ": expected " + std::to_string(spec.n_samples) +
                          " raw values, got " + std::to_string(raw.size()));
  }
  return interpolate(condition_samples(rescale(raw, spec), spec), spec, duration);
}

double smoothness_sder(std::span<const double> samples, double duration) {
  const std::size_t n = samples.size();
  if (n < 3) return 0.0;
  const double dt = duration / static_cast<double>(n - 1);
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 = (samples[i + 1] - 2.0 * samples[i] + samples[i - 1]) / (dt * dt);
    acc += d2 * d2 * dt;
  }
  return acc;
}

double smoothness_lowpass(std::span<const double> samples, double duration, const LowpassParams& params) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  if (params.skip < 0) throw ConfigError("lowpass skip must be >= 0");
  const ButterworthLowpass filter(params.order, params.cutoff);
  const std::vector<double> y = params.zero_phase ? filter.filter_zero_phase(samples) : filter.filter(samples);
  const double dt = duration / static_cast<double>(n - 1);
  double acc = 0.0;
  for (std::size_t i = static_cast<std::size_t>(params.skip); i < n; ++i) acc += std::abs(y[i] - samples[i]);
  return acc * dt;
}

double SmoothnessFunctional::operator()(std::span<const double> samples, double duration) const {
  return kind == SmoothnessKind::lowpass ? smoothness_lowpass(samples, duration, lowpass)
                                         : smoothness_sder(samples, duration);
}

std::vector<double> blackman(int n) {
  if (n < 2) throw ConfigError("blackman window needs at least two points");
  std::vector<double> w(n);
  const double m = n - 1;
  using std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    w[i] = 0.42 - 0.5 * std::cos(2.0 * pi * i / m) + 0.08 * std::cos(4.0 * pi * i / m);
  }
  // The closed form leaves ~1e-17 residue at the ends.
  w.front() = 0.0;
  w.back() = 0.0;
  if (n % 2 == 1) w[n / 2] = 1.0;
  return w;
}

double blackman_area(int n, double duration) { return trapezoid(blackman(n), duration); }

double trapezoid(std::span<const double> samples, double duration) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  double acc = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < n; ++i) acc += samples[i];
  return acc * duration / static_cast<double>(n - 1);
}

double pulse_area(const Waveform& w) { return trapezoid(w.samples(), w.duration()); }

int dense_grid_size(double duration, double rate) {
  return static_cast<int>(std::llround(duration * rate)) + 1;
}

InstantaneousStats instantaneous_analysis(const std::function<double(double)>& omega,
                                          const std::function<double(double)>& delta, double duration,
                                          double sample_rate) {
  const int n = dense_grid_size(duration, sample_rate);
  if (n < 2) return {};
  const double dt = duration / (n - 1);
  double phase = 0.0;
  double prev_delta = delta(0.0);
  double prev_s = omega(0.0);
  double sum = 0.0;
  double peak = 0.0;
  for (int k = 1; k < n; ++k) {
    const double t = k * dt;
    const double d = delta(t);
    phase += 0.5 * (prev_delta + d) * dt;
    prev_delta = d;
    const double s = omega(t) * std::cos(2.0 * std::numbers::pi * phase);
    const double step = std::abs(s - prev_s);
    sum += step;
    peak = std::max(peak, step);
    prev_s = s;
  }
  return {sum / (n - 1), peak};
}

}  // namespace qcrl
