#include "qcrl/solver.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcrl {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat (fifth minus fourth order weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

// RMS over real and imaginary parts of err / (atol + rtol * max(|y|, |y_new|)).
double error_norm(const CMatrix& err, const CMatrix& y, const CMatrix& y_new, double atol,
                  double rtol) {
  const Eigen::Index n = err.size();
  const Complex* e = err.data();
  const Complex* a = y.data();
  const Complex* b = y_new.data();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sr = atol + rtol * std::max(std::abs(a[i].real()), std::abs(b[i].real()));
    const double si = atol + rtol * std::max(std::abs(a[i].imag()), std::abs(b[i].imag()));
    const double qr = e[i].real() / sr;
    const double qi = e[i].imag() / si;
    acc += qr * qr + qi * qi;
  }
  return std::sqrt(acc / static_cast<double>(2 * n));
}

double scaled_norm(const CMatrix& v, const CMatrix& y, double atol, double rtol) {
  return error_norm(v, y, y, atol, rtol);
}

// Hairer, Norsett & Wanner starting step heuristic.
double initial_step(const RhsFunction& rhs, double t0, const CMatrix& y0, const CMatrix& f0,
                    double span, double atol, double rtol) {
  const double d0 = scaled_norm(y0, y0, atol, rtol);
  const double d1 = scaled_norm(f0, y0, atol, rtol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  CMatrix y1 = y0 + h0 * f0;
  CMatrix f1;
  rhs(t0 + h0, y1, f1);
  const double d2 = scaled_norm(f1 - f0, y0, atol, rtol) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, span});
}

void check_finite(const CMatrix& m, double t) {
  if (!m.allFinite()) {
    throw IntegrationError("non-finite state encountered at t = " + std::to_string(t));
  }
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::ok:
      return "ok";
    case SolveStatus::budget_exceeded:
      return "budget_exceeded";
    case SolveStatus::step_underflow:
      return "step_underflow";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(t1 > t0)) throw ConfigError("solver: t1 must be greater than t0");
  if (max_steps < 1) throw ConfigError("solver: max_steps must be >= 1");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("solver: tolerances must be positive");
  if (!(min_step > 0.0)) throw ConfigError("solver: min_step must be positive");
  double prev = t0;
  for (double t : output_times) {
    if (t < t0 || t > t1) throw ConfigError("solver: output time outside the integration span");
    if (t < prev) throw ConfigError("solver: output times must be sorted");
    prev = t;
  }
}

SolveResult integrate(const RhsFunction& rhs, const DensityMatrix& rho0, const SolverConfig& config) {
  config.validate();
  const double t0 = config.t0;
  const double t1 = config.t1;
  const double span = t1 - t0;
  const double snap = 1e-12 * std::max(1.0, std::abs(t1));
  const double atol = config.atol;
  const double rtol = config.rtol;

  SolveResult result;
  result.states_at_outputs.reserve(config.output_times.size());

  CMatrix y = rho0.matrix();
  CMatrix k1, k2, k3, k4, k5, k6, k7, stage, y_new, err;
  rhs(t0, y, k1);
  check_finite(k1, t0);

  std::size_t next_out = 0;
  auto record_outputs_at = [&](double t) {
    while (next_out < config.output_times.size() && config.output_times[next_out] <= t + snap) {
      result.states_at_outputs.emplace_back(y);
      ++next_out;
    }
  };

  double t = t0;
  record_outputs_at(t);
  double h = initial_step(rhs, t0, y, k1, span, atol, rtol);

  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.final_state = DensityMatrix(y);
    result.t_reached = t;
    return result;
  };

  while (t < t1 - snap) {
    const double stop =
        next_out < config.output_times.size() ? std::min(config.output_times[next_out], t1) : t1;
    const double to_stop = stop - t;
    double h_try = h;
    bool lands_on_stop = false;
    if (h_try >= to_stop - snap) {
      h_try = to_stop;
      lands_on_stop = true;
    }
    if (h_try < config.min_step && !lands_on_stop) return finish(SolveStatus::step_underflow);

    stage = y + h_try * (a21 * k1);
    rhs(t + c2 * h_try, stage, k2);
    stage = y + h_try * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h_try, stage, k3);
    stage = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h_try, stage, k4);
    stage = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h_try, stage, k5);
    stage = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h_try, stage, k6);
    y_new = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    check_finite(y_new, t + h_try);
    rhs(t + h_try, y_new, k7);
    err = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err_norm = error_norm(err, y, y_new, atol, rtol);
    ++result.steps_taken;

    if (err_norm <= 1.0) {
      ++result.accepted_steps;
      t = lands_on_stop ? stop : t + h_try;
      // Keep rho Hermitian with unit trace; the generator is linear and
      // commutes with the adjoint, so the FSAL derivative transforms alike.
      const double tr = y_new.trace().real();
      y = (0.5 / tr) * (y_new + y_new.adjoint());
      k1 = (0.5 / tr) * (k7 + k7.adjoint());
      record_outputs_at(t);
      const double factor =
          err_norm == 0.0 ? kMaxFactor
                          : std::clamp(kSafety * std::pow(err_norm, -0.2), kMinFactor, kMaxFactor);
      const double h_next = h_try * factor;
      h = lands_on_stop ? std::max(h_next, h) : h_next;
    } else {
      ++result.rejected_steps;
      h = h_try * std::clamp(kSafety * std::pow(err_norm, -0.2), kMinFactor, 1.0);
    }

    if (result.steps_taken >= config.max_steps) return finish(SolveStatus::budget_exceeded);
  }
  record_outputs_at(t1);
  return finish(SolveStatus::ok);
}

DensityMatrix integrate_fixed(const RhsFunction& rhs, const DensityMatrix& rho0, double t0, double t1,
                              int n_steps) {
  if (n_steps < 1) throw ConfigError("integrate_fixed: n_steps must be >= 1");
  if (!(t1 > t0)) throw ConfigError("integrate_fixed: t1 must be greater than t0");
  const double h = (t1 - t0) / n_steps;
  CMatrix y = rho0.matrix();
  CMatrix k1, k2, k3, k4, stage;
  for (int i = 0; i < n_steps; ++i) {
    const double t = t0 + i * h;
    rhs(t, y, k1);
    stage = y + (0.5 * h) * k1;
    rhs(t + 0.5 * h, stage, k2);
    stage = y + (0.5 * h) * k2;
    rhs(t + 0.5 * h, stage, k3);
    stage = y + h * k3;
    rhs(t + h, stage, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  check_finite(y, t1);
  return DensityMatrix(y);
}

}  // namespace qcrl
