#include "qcrl/rydberg.hpp"

#include "qcrl/errors.hpp"

#include <cmath>

namespace qcrl {

std::string to_string(RydbergVariant v) {
  return v == RydbergVariant::one_photon ? "one_photon" : "two_photon";
}

RydbergVariant rydberg_variant_from_string(const std::string& s) {
  if (s == "one_photon") return RydbergVariant::one_photon;
  if (s == "two_photon") return RydbergVariant::two_photon;
  throw ConfigError("unknown Rydberg variant '" + s + "'");
}

void RydbergSpec::validate() const {
  if (!(blockade > 0.0)) throw ConfigError("rydberg: blockade must be positive");
  if (!(gamma_r >= 0.0) || !(gamma_e >= gamma_r)) {
    throw ConfigError("rydberg: need gamma_e >= gamma_r >= 0");
  }
  if (!(duration > 0.0)) throw ConfigError("rydberg: duration must be positive");
  if (n_samples < 4) throw ConfigError("rydberg: n_samples must be >= 4");
  if (!(omega_max > 0.0) || !(delta_max > 0.0) || !(omega_s_max > 0.0) || !(omega_eff_max > 0.0) ||
      !(delta_s_max > 0.0)) {
    throw ConfigError("rydberg: channel limits must be positive");
  }
  if (!(delta_p_range >= 0.0) || !(delta_p - delta_p_range > 0.0)) {
    throw ConfigError("rydberg: pump detuning range must stay positive");
  }
}

namespace {

std::vector<ChannelSpec> rydberg_channels(const RydbergSpec& s, const SignalSettings& sig) {
  s.validate();
  if (s.variant == RydbergVariant::one_photon) {
    return {amplitude_channel("omega", s.omega_max, s.n_samples, sig.smooth_sigma),
            detuning_channel("delta", s.delta_max, s.n_samples, sig.smooth_sigma)};
  }
  return {amplitude_channel("omega_eff", s.omega_eff_max, s.n_samples, sig.smooth_sigma),
          amplitude_channel("omega_s", s.omega_s_max, s.n_samples, sig.smooth_sigma),
          detuning_channel("delta_s", s.delta_s_max, s.n_samples, sig.smooth_sigma)};
}

std::vector<ScalarSpec> rydberg_scalars(const RydbergSpec& s) {
  if (s.variant == RydbergVariant::one_photon) return {};
  return {{"delta_p", s.delta_p, s.delta_p_range}};
}

void couple(OperatorMatrix& m, int a, int b, double v) {
  m(a, b) += v;
  m(b, a) += v;
}

}  // namespace

RydbergEnvironment::RydbergEnvironment(const RydbergSpec& spec, const SignalSettings& signal)
    : Environment(spec.duration, rydberg_channels(spec, signal), rydberg_scalars(spec), signal.smoothness),
      spec_(spec) {}

std::string RydbergEnvironment::name() const {
  return spec_.variant == RydbergVariant::one_photon ? "rydberg_one_photon" : "rydberg_two_photon";
}

SystemModel RydbergEnvironment::model(std::span<const double> scalars) const {
  const int n = dim();
  SystemModel m;
  m.drift = OperatorMatrix::Zero(n, n);
  if (spec_.variant == RydbergVariant::one_photon) {
    m.drift(o_rr, o_rr) = kTwoPi * spec_.blockade;
    OperatorMatrix drive = OperatorMatrix::Zero(n, n);
    const double h = 0.5 * kTwoPi;
    couple(drive, 2, o_r0, h);      // atom 1: |10> <-> |r0>
    couple(drive, 3, o_r1, h);      //         |11> <-> |r1>
    couple(drive, o_1r, o_rr, h);   //         |1r> <-> |rr>
    couple(drive, 1, o_0r, h);      // atom 2: |01> <-> |0r>
    couple(drive, 3, o_1r, h);      //         |11> <-> |1r>
    couple(drive, o_r1, o_rr, h);   //         |r1> <-> |rr>
    OperatorMatrix det = OperatorMatrix::Zero(n, n);
    for (int k : {int(o_r0), int(o_0r), int(o_r1), int(o_1r)}) det(k, k) = -kTwoPi;
    det(o_rr, o_rr) = -2.0 * kTwoPi;
    m.controls = {drive, det};
    for (int k : {int(o_r0), int(o_0r), int(o_r1), int(o_1r)}) {
      m.collapse.push_back({transition(n, o_sink, k), spec_.gamma_r});
    }
    m.collapse.push_back({transition(n, o_sink, o_rr), 2.0 * spec_.gamma_r});
    return m;
  }

  const double dp = scalars.empty() ? spec_.delta_p : scalars[0];
  for (int k : {int(t_e0), int(t_0e), int(t_et)}) m.drift(k, k) = kTwoPi * dp;
  m.drift(t_Rt, t_Rt) = kTwoPi * dp;
  m.drift(t_rr, t_rr) = kTwoPi * (2.0 * dp + spec_.blockade);

  const double h = 0.5 * kTwoPi;
  const double s = kTwoPi / std::sqrt(2.0);
  OperatorMatrix pump = OperatorMatrix::Zero(n, n);
  couple(pump, 2, t_e0, h);
  couple(pump, 1, t_0e, h);
  couple(pump, 3, t_et, s);
  couple(pump, t_rt, t_Rt, h);
  OperatorMatrix stokes = OperatorMatrix::Zero(n, n);
  couple(stokes, t_e0, t_r0, h);
  couple(stokes, t_0e, t_0r, h);
  couple(stokes, t_et, t_rt, h);
  couple(stokes, t_Rt, t_rr, s);
  OperatorMatrix det_s = OperatorMatrix::Zero(n, n);
  for (int k : {int(t_r0), int(t_0r), int(t_rt), int(t_Rt)}) det_s(k, k) = kTwoPi;
  m.controls = {pump, stokes, det_s};

  for (int k : {int(t_r0), int(t_0r), int(t_rt), int(t_Rt)}) {
    m.collapse.push_back({transition(n, t_sink, k), spec_.gamma_r});
  }
  for (int k : {int(t_e0), int(t_0e), int(t_et), int(t_Rt)}) {
    m.collapse.push_back({transition(n, t_sink, k), spec_.gamma_e});
  }
  m.collapse.push_back({transition(n, t_sink, t_rr), 2.0 * spec_.gamma_r});
  return m;
}

void RydbergEnvironment::coefficients(std::span<const double> v, std::span<const double> scalars,
                                      std::span<double> out) const {
  if (spec_.variant == RydbergVariant::one_photon) {
    out[0] = v[0];
    out[1] = v[1];
    return;
  }
  const double dp = scalars.empty() ? spec_.delta_p : scalars[0];
  out[0] = std::sqrt(2.0 * dp * std::max(v[0], 0.0));
  out[1] = v[1];
  out[2] = v[2];
}

DensityMatrix bell_initial_state(int dim) {
  CVector psi = CVector::Zero(dim);
  for (int k = 0; k < 4; ++k) psi(k) = 0.5;
  return DensityMatrix::pure(psi);
}

DensityMatrix RydbergEnvironment::initial_state() const { return bell_initial_state(dim()); }

double RydbergEnvironment::fidelity(const DensityMatrix& rho) const {
  return bell_phase_fidelity(rho, kComputational, kCzPhases);
}

double RydbergEnvironment::excited_population(const DensityMatrix& rho) const {
  if (spec_.variant == RydbergVariant::one_photon) {
    double p = 0.0;
    for (int k = o_r0; k <= o_rr; ++k) p += population(rho, k);
    return p;
  }
  return population(rho, t_rr) + population(rho, t_et) + population(rho, t_rt) + population(rho, t_Rt);
}

}  // namespace qcrl
