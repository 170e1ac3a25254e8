#include "qcrl/transmon.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qcrl {

void TransmonSpec::validate() const {
  if (delta * (delta + alpha) == 0.0) throw ConfigError("transmon: delta (delta + alpha) must be non-zero");
  const double gamma = t1 > 0.0 ? 1.0 / t1 : -1.0;
  if (!(gamma >= 0.0) || !(kappa > gamma)) throw ConfigError("transmon: need kappa > 1/T1 >= 0");
  if (!(omega_max > 0.0) || !(delta_max > 0.0)) throw ConfigError("transmon: channel limits must be positive");
  if (!(duration > 0.0)) throw ConfigError("transmon: duration must be positive");
  if (n_samples < 2) throw ConfigError("transmon: n_samples must be >= 2");
  if (!(smoothing_ns >= 0.0)) throw ConfigError("transmon: smoothing_ns must be >= 0");
}

double TransmonSpec::drive_coefficient() const {
  return g * alpha / (std::sqrt(2.0) * delta * (delta + alpha));
}

double TransmonSpec::smoothing_samples(double fallback) const {
  if (smoothing_ns <= 0.0) return fallback;
  return smoothing_ns * 1e-3 / (duration / (n_samples - 1));
}

namespace {

std::vector<ChannelSpec> transmon_channels(const TransmonSpec& s, const SignalSettings& sig) {
  s.validate();
  const double sigma = s.smoothing_samples(sig.smooth_sigma);
  return {amplitude_channel("omega", s.omega_max, s.n_samples, sigma, UniformInterpolant::Kind::linear),
          detuning_channel("delta", s.delta_max, s.n_samples, sigma, UniformInterpolant::Kind::linear)};
}

}  // namespace

TransmonEnvironment::TransmonEnvironment(const TransmonSpec& spec, const SignalSettings& signal)
    : Environment(spec.duration, transmon_channels(spec, signal), {}, signal.smoothness), spec_(spec) {}

OperatorMatrix TransmonEnvironment::qubit_lowering() {
  OperatorMatrix q = OperatorMatrix::Zero(6, 6);
  for (int n = 0; n < 2; ++n) {
    q(g0 + n, e0 + n) = 1.0;
    q(e0 + n, f0 + n) = std::sqrt(2.0);
  }
  return q;
}

OperatorMatrix TransmonEnvironment::resonator_lowering() {
  OperatorMatrix a = OperatorMatrix::Zero(6, 6);
  for (int s = 0; s < 3; ++s) a(2 * s, 2 * s + 1) = 1.0;
  return a;
}

SystemModel TransmonEnvironment::model(std::span<const double>) const {
  const OperatorMatrix q = qubit_lowering();
  const OperatorMatrix a = resonator_lowering();
  const OperatorMatrix nq = q.adjoint() * q;
  const OperatorMatrix na = a.adjoint() * a;
  OperatorMatrix x = q.adjoint() * q.adjoint() * a;
  x += x.adjoint().eval();

  SystemModel m;
  m.drift = kTwoPi * spec_.chi * (na * nq);
  // Coefficients: Omega, Omega^2 (Stark shift), Delta.
  m.controls = {kTwoPi * spec_.drive_coefficient() * x, kTwoPi * spec_.k * nq, kTwoPi * nq};
  m.collapse = {{a, spec_.kappa}, {q, 1.0 / spec_.t1}};
  return m;
}

void TransmonEnvironment::coefficients(std::span<const double> v, std::span<const double>,
                                       std::span<double> out) const {
  out[0] = v[0];
  out[1] = v[0] * v[0];
  out[2] = v[1];
}

DensityMatrix TransmonEnvironment::initial_state() const { return DensityMatrix::basis(6, f0); }

double TransmonEnvironment::fidelity(const DensityMatrix& rho) const {
  return std::clamp(population(rho, g0), 0.0, 1.0);
}

}  // namespace qcrl
