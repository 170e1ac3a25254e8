#pragma once
// Action-to-waveform pipeline and signal metrics. Physical units: MHz for
// amplitudes and detunings, microseconds for time.

#include "qcrl/spline.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qcrl {

enum class ChannelKind { amplitude, detuning };

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& s);
std::string to_string(UniformInterpolant::Kind kind);
UniformInterpolant::Kind interp_kind_from_string(const std::string& s);

struct ChannelSpec {
  std::string name;
  ChannelKind kind = ChannelKind::amplitude;
  double max_value = 1.0;  // MHz
  int n_samples = 50;
  UniformInterpolant::Kind interpolation = UniformInterpolant::Kind::cubic_spline;
  bool pin_endpoints_zero = true;
  double smooth_sigma = 1.0;  // Gaussian width in sample units; 0 disables smoothing

  void validate() const;
};

/// Default channel layout helpers.
ChannelSpec amplitude_channel(std::string name, double max_value, int n_samples, double smooth_sigma,
                              UniformInterpolant::Kind interp = UniformInterpolant::Kind::cubic_spline);
ChannelSpec detuning_channel(std::string name, double max_value, int n_samples, double smooth_sigma,
                             UniformInterpolant::Kind interp = UniformInterpolant::Kind::cubic_spline);

/// A channel's physical samples and its continuous interpolant on [0, T].
/// Optional additive noise lives on a uniform dense grid and is linearly
/// interpolated. Amplitude values are clamped at zero when requested.
class Waveform {
 public:
  Waveform() = default;
  Waveform(ChannelSpec spec, std::vector<double> samples, double duration);

  const ChannelSpec& spec() const { return spec_; }
  const std::vector<double>& samples() const { return samples_; }
  double duration() const { return duration_; }
  bool has_noise() const { return !noise_.empty(); }
  const std::vector<double>& noise() const { return noise_; }

  /// Adds a path sampled on t_k = k * T / (path.size() - 1). Throws
  /// StructuralError for fewer than two points.
  void set_noise(std::vector<double> path, bool clamp_amplitude = true);

  double operator()(double t) const;

 private:
  ChannelSpec spec_;
  std::vector<double> samples_;
  double duration_ = 0.0;
  UniformInterpolant interp_;
  std::vector<double> noise_;
  double noise_dt_ = 0.0;
  bool clamp_ = true;
};

/// Raw values in [-1, 1] (clamped) to physical samples.
std::vector<double> rescale(std::span<const double> raw, const ChannelSpec& spec);

/// Normalised Gaussian kernel truncated at ceil(4 sigma), zero padding.
std::vector<double> gaussian_smooth(std::span<const double> samples, double sigma);

/// Builds the waveform from physical samples (no smoothing).
Waveform interpolate(std::vector<double> samples, const ChannelSpec& spec, double duration);

/// rescale -> smooth -> pin -> interpolate.
Waveform build_waveform(std::span<const double> raw, const ChannelSpec& spec, double duration);

/// Smoothing and pinning applied to physical samples.
std::vector<double> condition_samples(std::vector<double> physical, const ChannelSpec& spec);

/// Sum over interior points of ((s+ - 2 s + s-) / dt^2)^2 dt, dt = T / (n - 1).
double smoothness_sder(std::span<const double> samples, double duration);

struct LowpassParams {
  int order = 4;
  double cutoff = 0.2;     // fraction of Nyquist
  bool zero_phase = false;
  int skip = 0;            // leading samples excluded from the sum
};

/// Sum of |filtered - samples| dt with a digital Butterworth low-pass.
double smoothness_lowpass(std::span<const double> samples, double duration, const LowpassParams& params);

enum class SmoothnessKind { lowpass, second_derivative };
std::string to_string(SmoothnessKind kind);
SmoothnessKind smoothness_kind_from_string(const std::string& s);

struct SmoothnessFunctional {
  SmoothnessKind kind = SmoothnessKind::lowpass;
  LowpassParams lowpass;

  double operator()(std::span<const double> samples, double duration) const;
};

std::vector<double> blackman(int n);
/// Trapezoidal area of the n-point Blackman window spread over [0, T].
double blackman_area(int n, double duration);

/// Trapezoidal integral of uniformly spaced samples over [0, T].
double trapezoid(std::span<const double> samples, double duration);
double pulse_area(const Waveform& w);

struct InstantaneousStats {
  double mean_step = 0.0;
  double max_step = 0.0;
};

/// S(t) = Omega(t) cos(2 pi int_0^t Delta) on a grid of `sample_rate` points
/// per microsecond; statistics of |S_{k+1} - S_k|.
InstantaneousStats instantaneous_analysis(const std::function<double(double)>& omega,
                                          const std::function<double(double)>& delta, double duration,
                                          double sample_rate = 1000.0);

/// Number of points of the uniform dense grid covering [0, T] at `rate` per us.
int dense_grid_size(double duration, double rate = 1000.0);

}  // namespace qcrl
