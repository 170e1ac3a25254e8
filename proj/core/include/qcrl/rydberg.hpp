#pragma once

#include "qcrl/environment.hpp"

namespace qcrl {

enum class RydbergVariant { one_photon, two_photon };

std::string to_string(RydbergVariant v);
RydbergVariant rydberg_variant_from_string(const std::string& s);

/// Two-atom C-Z gate constants. Frequencies in MHz, rates in 1/us.
struct RydbergSpec {
  RydbergVariant variant = RydbergVariant::two_photon;
  double blockade = 500.0;       // B
  double gamma_r = 1.0 / 150.0;  // Rydberg level decay
  double gamma_e = 8.9;          // intermediate level decay (two-photon)
  double duration = 0.5;         // us
  int n_samples = 50;
  // one-photon limits
  double omega_max = 10.0;
  double delta_max = 10.0;
  // two-photon limits
  double omega_s_max = 40.0;
  double omega_eff_max = 56.6;   // Omega_P^2 / (2 Delta_P)
  double delta_s_max = 20.0;
  double delta_p = 2500.0;       // centre of the learnable pump detuning
  double delta_p_range = 250.0;  // half range around delta_p

  void validate() const;
};

/// One-photon basis {00, 01, 10, 11, r0, 0r, r1, 1r, rr, sink}; channels
/// Omega, Delta.
/// Two-photon basis {00, 01, 10, 11, e0, 0e, r0, 0r, e~, r~, R~, rr, sink};
/// channels Omega_eff, Omega_S, Delta_S and the scalar Delta_P.
class RydbergEnvironment : public Environment {
 public:
  RydbergEnvironment(const RydbergSpec& spec, const SignalSettings& signal);

  std::string name() const override;
  int dim() const override { return spec_.variant == RydbergVariant::one_photon ? 10 : 13; }
  int default_max_steps() const override { return 4096; }

  const RydbergSpec& spec() const { return spec_; }

  SystemModel model(std::span<const double> scalars) const override;
  void coefficients(std::span<const double> channel_values, std::span<const double> scalars,
                    std::span<double> out) const override;
  DensityMatrix initial_state() const override;
  double fidelity(const DensityMatrix& rho) const override;
  double excited_population(const DensityMatrix& rho) const override;

  /// Indices of |00>, |01>, |10>, |11>.
  static constexpr std::array<int, 4> kComputational{0, 1, 2, 3};
  static constexpr std::array<double, 3> kCzPhases{0.0, 0.0, 3.14159265358979323846};

  // One-photon level indices.
  enum OneLevel { o_r0 = 4, o_0r = 5, o_r1 = 6, o_1r = 7, o_rr = 8, o_sink = 9 };
  // Two-photon level indices.
  enum TwoLevel { t_e0 = 4, t_0e = 5, t_r0 = 6, t_0r = 7, t_et = 8, t_rt = 9, t_Rt = 10, t_rr = 11, t_sink = 12 };

 private:
  RydbergSpec spec_;
};

/// |psi+> = (|00> + |01> + |10> + |11>) / 2 embedded in dimension dim.
DensityMatrix bell_initial_state(int dim);

}  // namespace qcrl
