#pragma once

#include <span>
#include <vector>

namespace qcrl {

/// One second-order (or first-order, with b2 = a2 = 0) section in
/// transposed direct form II. a0 is normalised to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Digital Butterworth low-pass designed by the bilinear transform with
/// frequency pre-warping. `cutoff` is a fraction of the Nyquist frequency,
/// in (0, 1). Sections are ordered by pole pair; unity gain at DC.
class ButterworthLowpass {
 public:
  ButterworthLowpass(int order, double cutoff);

  int order() const { return order_; }
  double cutoff() const { return cutoff_; }
  const std::vector<Biquad>& sections() const { return sections_; }

  /// Causal filtering. The internal state starts at the steady state of the
  /// first input sample, so a constant input passes through unchanged.
  std::vector<double> filter(std::span<const double> x) const;

  /// Forward-backward (zero-phase) filtering.
  std::vector<double> filter_zero_phase(std::span<const double> x) const;

  /// Expanded transfer-function coefficients (b, a) of the cascade.
  void transfer_function(std::vector<double>& b, std::vector<double>& a) const;

 private:
  int order_;
  double cutoff_;
  std::vector<Biquad> sections_;
};

}  // namespace qcrl
