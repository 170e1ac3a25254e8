#pragma once

#include "qcrl/environment.hpp"

namespace qcrl {

/// Unconditional reset of a three-level transmon through a lossy resonator.
/// Frequencies in MHz, rates in 1/us.
struct TransmonSpec {
  double chi = -8.54922;    // dispersive shift
  double g = 200.0;         // qubit-resonator coupling
  double alpha = -330.0;    // anharmonicity
  double delta = -1600.0;   // qubit-resonator detuning
  double k = 3e-5;          // Stark coefficient, 1/MHz
  double kappa = 125.66370614359172;  // resonator decay (2 pi x 20 MHz)
  double t1 = 500.0;        // qubit lifetime, us
  double omega_max = 330.0;
  double delta_max = 5.0;
  double duration = 0.2;    // us
  int n_samples = 100;
  double smoothing_ns = 14.0;  // Gaussian width; 0 uses the signal setting

  void validate() const;
  /// g alpha / (sqrt(2) delta (delta + alpha)), the f0-g1 drive coefficient.
  double drive_coefficient() const;
  /// Gaussian width in sample units.
  double smoothing_samples(double fallback) const;
};

/// Basis index = 2 * s + n with s in {g, e, f} and n in {0, 1}. Channels:
/// Omega (amplitude), Delta (detuning), both linearly interpolated.
class TransmonEnvironment : public Environment {
 public:
  enum Level { g0 = 0, g1 = 1, e0 = 2, e1 = 3, f0 = 4, f1 = 5 };

  TransmonEnvironment(const TransmonSpec& spec, const SignalSettings& signal);

  std::string name() const override { return "transmon"; }
  int dim() const override { return 6; }
  int default_max_steps() const override { return 900; }

  const TransmonSpec& spec() const { return spec_; }

  SystemModel model(std::span<const double> scalars) const override;
  void coefficients(std::span<const double> channel_values, std::span<const double> scalars,
                    std::span<double> out) const override;
  DensityMatrix initial_state() const override;
  double fidelity(const DensityMatrix& rho) const override;

  static OperatorMatrix qubit_lowering();      // q
  static OperatorMatrix resonator_lowering();  // a

 private:
  TransmonSpec spec_;
};

}  // namespace qcrl
