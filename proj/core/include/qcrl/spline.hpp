#pragma once

#include <span>
#include <vector>

namespace qcrl {

/// Interpolant through samples on the uniform grid t_i = i * T / (n - 1).
/// Natural cubic spline (zero second derivative at both ends) or piecewise
/// linear.
class UniformInterpolant {
 public:
  enum class Kind { cubic_spline, linear };

  UniformInterpolant() = default;
  UniformInterpolant(std::span<const double> samples, double duration, Kind kind);

  double operator()(double t) const;
  double duration() const { return duration_; }
  Kind kind() const { return kind_; }
  std::span<const double> samples() const { return samples_; }

 private:
  Kind kind_ = Kind::linear;
  double duration_ = 0.0;
  double step_ = 0.0;
  std::vector<double> samples_;
  std::vector<double> second_derivs_;  // cubic only
};

}  // namespace qcrl
