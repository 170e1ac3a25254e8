#pragma once

// Dense complex linear algebra for small open quantum systems: density
// matrices, collapse channels, the Lindblad right-hand side and fidelities.
//
// Units: time in microseconds, Hamiltonian entries in rad/us, collapse rates
// in 1/us.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace qcrl {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Hamiltonian or jump operator. Hamiltonians are expected to be Hermitian.
using OperatorMatrix = CMatrix;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct CollapseChannel {
  OperatorMatrix op;  // jump operator L_k (dimensionless)
  double rate = 0.0;  // 1/us, must be >= 0
};

/// Hermitian, unit-trace state of a (possibly mixed) quantum system.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Wraps a square matrix. Only the shape is checked here; use the
  /// accessors below to inspect the physical invariants.
  explicit DensityMatrix(CMatrix m);

  static DensityMatrix basis(int dim, int index);
  static DensityMatrix pure(const CVector& psi);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace_error() const;        // |Tr rho - 1|
  double hermiticity_error() const;  // max |rho_ij - conj(rho_ji)|
  double min_population() const;     // min Re rho_ii

  /// True when the state satisfies the documented invariants.
  bool is_valid(double herm_tol = 1e-10, double trace_tol = 1e-8,
                double pop_tol = 1e-8) const;

 private:
  CMatrix m_;
};

void check_hermitian(const OperatorMatrix& h, double tol = 1e-10);

/// -i[H, rho] + sum_k rate_k (L rho L^dag - 1/2 {L^dag L, rho}).
CMatrix master_rhs(const OperatorMatrix& h, std::span<const CollapseChannel> channels,
                   const DensityMatrix& rho);

/// Fidelity against a pure target. Returns <psi|rho|psi> clamped to [0, 1].
/// Throws UnsupportedTargetError when the target is not rank one.
double fidelity(const DensityMatrix& rho, const DensityMatrix& target);
double fidelity(const DensityMatrix& rho, const CVector& psi);

/// Gate fidelity from one evolution of |psi+> = (|00>+|01>+|10>+|11>)/2.
/// `basis_indices` are the positions of |00>, |01>, |10>, |11>; `phases`
/// are the target phases for |01>, |10>, |11>.
double bell_phase_fidelity(const DensityMatrix& rho_fin, const std::array<int, 4>& basis_indices,
                           const std::array<double, 3>& phases);

double population(const DensityMatrix& rho, int index);

/// Ket |i> in a space of dimension dim.
CVector basis_vector(int dim, int index);

/// |row><col| in a space of dimension dim.
OperatorMatrix transition(int dim, int row, int col);

}  // namespace qcrl
