#include "qcrl/lambda_system.hpp"

#include "qcrl/errors.hpp"

#include <cmath>

namespace qcrl {

void LambdaSpec::validate() const {
  if (!(gamma >= 0.0)) throw ConfigError("lambda: gamma must be >= 0");
  if (!(omega_max > 0.0) || !(delta_max > 0.0)) throw ConfigError("lambda: channel limits must be positive");
  if (!(duration > 0.0)) throw ConfigError("lambda: duration must be positive");
  if (n_samples < 4) throw ConfigError("lambda: n_samples must be >= 4");
  if (!std::isfinite(target_angle)) throw ConfigError("lambda: target_angle must be finite");
}

namespace {

std::vector<ChannelSpec> lambda_channels(const LambdaSpec& s, const SignalSettings& sig) {
  return {amplitude_channel("omega_p", s.omega_max, s.n_samples, sig.smooth_sigma),
          amplitude_channel("omega_s", s.omega_max, s.n_samples, sig.smooth_sigma),
          detuning_channel("delta_p", s.delta_max, s.n_samples, sig.smooth_sigma),
          detuning_channel("delta_delta", s.delta_max, s.n_samples, sig.smooth_sigma)};
}

const LambdaSpec& validated(const LambdaSpec& s) {
  s.validate();
  return s;
}

}  // namespace

LambdaEnvironment::LambdaEnvironment(const LambdaSpec& spec, const SignalSettings& signal)
    : Environment(validated(spec).duration, lambda_channels(spec, signal), {}, signal.smoothness), spec_(spec) {
  // cos(theta/2)|g1> + sin(theta/2)|g2>: pi gives |g2>, pi/2 gives |+>.
  target_ = CVector::Zero(5);
  target_(g1) = std::cos(spec.target_angle / 2.0);
  target_(g2) = std::sin(spec.target_angle / 2.0);
}

SystemModel LambdaEnvironment::model(std::span<const double>) const {
  SystemModel m;
  m.drift = OperatorMatrix::Zero(5, 5);
  m.drift(e2, e2) = kTwoPi * spec_.delta_x;

  OperatorMatrix pump = OperatorMatrix::Zero(5, 5);
  pump(g1, e1) = pump(e1, g1) = pump(g1, e2) = pump(e2, g1) = 0.5 * kTwoPi;
  OperatorMatrix stokes = OperatorMatrix::Zero(5, 5);
  stokes(g2, e1) = stokes(e1, g2) = 0.5 * kTwoPi;
  stokes(g2, e2) = stokes(e2, g2) = -0.5 * kTwoPi;
  OperatorMatrix det_p = OperatorMatrix::Zero(5, 5);
  det_p(g2, g2) = det_p(e1, e1) = det_p(e2, e2) = kTwoPi;
  OperatorMatrix det_d = OperatorMatrix::Zero(5, 5);
  det_d(g2, g2) = -kTwoPi;
  m.controls = {pump, stokes, det_p, det_d};

  const double rate = spec_.gamma / std::sqrt(2.0);
  m.collapse = {{transition(5, sink, e1), rate}, {transition(5, sink, e2), rate}};
  return m;
}

void LambdaEnvironment::coefficients(std::span<const double> v, std::span<const double>,
                                     std::span<double> out) const {
  for (std::size_t i = 0; i < 4; ++i) out[i] = v[i];
}

DensityMatrix LambdaEnvironment::initial_state() const { return DensityMatrix::basis(5, g1); }

double LambdaEnvironment::fidelity(const DensityMatrix& rho) const { return qcrl::fidelity(rho, target_); }

double LambdaEnvironment::excited_population(const DensityMatrix& rho) const {
  return population(rho, e1) + population(rho, e2);
}

OperatorMatrix h_lambda(double omega_p, double omega_s, double delta_p, double delta_delta,
                        const LambdaSpec& spec) {
  if (omega_p < 0.0 || omega_s < 0.0) throw ConfigError("h_lambda: Rabi frequencies must be >= 0");
  SignalSettings sig;
  const LambdaEnvironment env(spec, sig);
  const double v[4] = {omega_p, omega_s, delta_p, delta_delta};
  return env.hamiltonian(v, {});
}

}  // namespace qcrl
