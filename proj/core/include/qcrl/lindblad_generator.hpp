#pragma once

#include "qcrl/quantum.hpp"

#include <span>
#include <vector>

namespace qcrl {

/// Master-equation generator for H(t) = H0 + sum_j c_j(t) H_j with fixed
/// collapse channels, precompiled into sparse form.
///
/// Uses the effective non-Hermitian Hamiltonian
///   H_eff = H - (i/2) sum_k rate_k L_k^dag L_k
/// so that L(rho) = -i (H_eff rho - (H_eff rho)^dag) + sum_k rate_k L_k rho L_k^dag.
/// The input state must be Hermitian; the output is Hermitian by construction.
/// apply() uses internal scratch space, so one instance must not be shared
/// between threads.
class LindbladGenerator {
 public:
  LindbladGenerator(const OperatorMatrix& drift, std::vector<OperatorMatrix> controls,
                    std::vector<CollapseChannel> channels);

  int dim() const { return dim_; }
  int num_controls() const { return static_cast<int>(controls_.size()); }
  const std::vector<CollapseChannel>& channels() const { return channels_; }

  /// Dense H(t) for the given control coefficients.
  OperatorMatrix hamiltonian(std::span<const double> coeffs) const;

  /// out = L(rho). `out` is resized if needed.
  void apply(std::span<const double> coeffs, const CMatrix& rho, CMatrix& out) const;

 private:
  struct Term {
    int slot;  // index into the combined sparsity pattern
    Complex value;
  };
  struct Element {
    int row;
    int col;
    Complex value;
  };
  struct Jump {
    std::vector<Element> nonzeros;
    double rate;
  };

  int dim_ = 0;
  OperatorMatrix drift_;
  std::vector<OperatorMatrix> controls_;
  std::vector<CollapseChannel> channels_;

  std::vector<Element> pattern_;                // entries of H_eff, value = static part
  std::vector<std::vector<Term>> control_terms_;
  std::vector<Jump> jumps_;
  mutable std::vector<Complex> heff_values_;
  mutable CMatrix product_;
};

}  // namespace qcrl
