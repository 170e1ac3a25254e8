#include "qcrl/spline.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qcrl {

UniformInterpolant::UniformInterpolant(std::span<const double> samples, double duration, Kind kind)
    : kind_(kind), duration_(duration), samples_(samples.begin(), samples.end()) {
  const auto n = samples_.size();
  if (n < 2) throw ConfigError("interpolation needs at least two samples");
  if (kind == Kind::cubic_spline && n < 4) {
    throw ConfigError("cubic spline interpolation needs at least four samples");
  }
  if (!(duration > 0.0)) throw ConfigError("interpolation duration must be positive");
  step_ = duration / static_cast<double>(n - 1);
  if (kind != Kind::cubic_spline) return;

  // Tridiagonal system for the interior second derivatives M_1..M_{n-2}:
  //   M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h^2
  second_derivs_.assign(n, 0.0);
  const std::size_t m = n - 2;
  std::vector<double> diag(m, 4.0), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    rhs[i] = 6.0 * (samples_[i + 2] - 2.0 * samples_[i + 1] + samples_[i]) / (step_ * step_);
  }
  for (std::size_t i = 1; i < m; ++i) {
    const double w = 1.0 / diag[i - 1];
    diag[i] -= w;
    rhs[i] -= w * rhs[i - 1];
  }
  second_derivs_[m] = rhs[m - 1] / diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    second_derivs_[i + 1] = (rhs[i] - second_derivs_[i + 2]) / diag[i];
  }
}

double UniformInterpolant::operator()(double t) const {
  const auto n = samples_.size();
  if (n == 0) return 0.0;
  const double x = std::clamp(t, 0.0, duration_) / step_;
  auto i = static_cast<std::size_t>(x);
  if (i >= n - 1) i = n - 2;
  const double u = x - static_cast<double>(i);
  const double y0 = samples_[i];
  const double y1 = samples_[i + 1];
  if (kind_ == Kind::linear) return y0 + u * (y1 - y0);
  const double m0 = second_derivs_[i];
  const double m1 = second_derivs_[i + 1];
  const double v = 1.0 - u;
  const double h2 = step_ * step_ / 6.0;
  return v * y0 + u * y1 + h2 * ((v * v * v - v) * m0 + (u * u * u - u) * m1);
}

}  // namespace qcrl
