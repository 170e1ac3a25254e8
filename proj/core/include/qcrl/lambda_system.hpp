#pragma once

#include "qcrl/environment.hpp"

namespace qcrl {

/// Physical constants of the four-level Lambda system with a sink state.
/// Frequencies in MHz, rates in 1/us.
struct LambdaSpec {
  double gamma = 1.0;        // total excited-state decay into the sink
  double omega_max = 30.0;   // Omega_P and Omega_S limit
  double delta_x = 100.0;    // offset of e2 above e1
  double delta_max = 10.0;   // Delta_P and Delta_delta limit
  double duration = 1.0;     // us
  int n_samples = 50;
  double target_angle = 3.14159265358979323846;  // pi -> |g2>, pi/2 -> |+>

  void validate() const;
};

/// Basis (g1, g2, e1, e2, g_sink). Channels: Omega_P, Omega_S, Delta_P,
/// Delta_delta.
class LambdaEnvironment : public Environment {
 public:
  enum Level { g1 = 0, g2 = 1, e1 = 2, e2 = 3, sink = 4 };

  LambdaEnvironment(const LambdaSpec& spec, const SignalSettings& signal);

  std::string name() const override { return "lambda"; }
  int dim() const override { return 5; }
  int default_max_steps() const override { return 3000; }

  const LambdaSpec& spec() const { return spec_; }
  const CVector& target() const { return target_; }

  SystemModel model(std::span<const double> scalars) const override;
  void coefficients(std::span<const double> channel_values, std::span<const double> scalars,
                    std::span<double> out) const override;
  DensityMatrix initial_state() const override;
  double fidelity(const DensityMatrix& rho) const override;
  double excited_population(const DensityMatrix& rho) const override;

 private:
  LambdaSpec spec_;
  CVector target_;
};

/// H_Lambda for given controls (MHz), returned in rad/us.
OperatorMatrix h_lambda(double omega_p, double omega_s, double delta_p, double delta_delta,
                        const LambdaSpec& spec);

}  // namespace qcrl
