#include "qcrl/quantum.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcrl {

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw StructuralError("density matrix must be square and non-empty");
  }
}

DensityMatrix DensityMatrix::basis(int dim, int index) {
  if (dim <= 0 || index < 0 || index >= dim) {
    throw StructuralError("basis index " + std::to_string(index) + " out of range");
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw StructuralError("cannot build a state from the zero vector");
  const CVector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim <= 0) throw StructuralError("dimension must be positive");
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::trace_error() const { return std::abs(m_.trace() - Complex(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_population() const { return m_.diagonal().real().minCoeff(); }

bool DensityMatrix::is_valid(double herm_tol, double trace_tol, double pop_tol) const {
  return hermiticity_error() <= herm_tol && trace_error() <= trace_tol &&
         min_population() >= -pop_tol;
}

void check_hermitian(const OperatorMatrix& h, double tol) {
  if (h.rows() != h.cols()) throw StructuralError("operator must be square");
  const double err = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (err > tol) {
    throw StructuralError("operator is not Hermitian (deviation " + std::to_string(err) + ")");
  }
}

CMatrix master_rhs(const OperatorMatrix& h, std::span<const CollapseChannel> channels,
                   const DensityMatrix& rho) {
  const auto dim = rho.dim();
  if (h.rows() != dim || h.cols() != dim) {
    throw StructuralError("Hamiltonian dimension does not match state");
  }
  const CMatrix& r = rho.matrix();
  const Complex minus_i(0.0, -1.0);
  CMatrix out = minus_i * (h * r - r * h);
  for (const auto& ch : channels) {
    if (ch.op.rows() != dim || ch.op.cols() != dim) {
      throw StructuralError("collapse operator dimension does not match state");
    }
    if (ch.rate < 0.0) throw StructuralError("collapse rate must be non-negative");
    const CMatrix ldl = ch.op.adjoint() * ch.op;
    out += ch.rate * (ch.op * r * ch.op.adjoint() - 0.5 * (ldl * r + r * ldl));
  }
  return out;
}

namespace {

// Returns the normalised ket of a rank-one projector.
CVector pure_state_of(const DensityMatrix& target) {
  const CMatrix& t = target.matrix();
  const double purity = (t * t).trace().real();
  const double trace = t.trace().real();
  if (std::abs(trace - 1.0) > 1e-8 || std::abs(purity - 1.0) > 1e-8) {
    throw UnsupportedTargetError("fidelity target must be a pure state");
  }
  Eigen::Index col = 0;
  t.diagonal().real().maxCoeff(&col);
  CVector psi = t.col(col) / std::sqrt(t(col, col).real());
  return psi;
}

}  // namespace

double fidelity(const DensityMatrix& rho, const CVector& psi) {
  if (psi.size() != rho.dim()) throw StructuralError("target dimension does not match state");
  const double f = (psi.adjoint() * rho.matrix() * psi)(0, 0).real() / psi.squaredNorm();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& target) {
  if (rho.dim() != target.dim()) throw StructuralError("target dimension does not match state");
  return fidelity(rho, pure_state_of(target));
}

double bell_phase_fidelity(const DensityMatrix& rho_fin, const std::array<int, 4>& basis_indices,
                           const std::array<double, 3>& phases) {
  for (int idx : basis_indices) {
    if (idx < 0 || idx >= rho_fin.dim()) {
      throw StructuralError("Bell basis index " + std::to_string(idx) + " out of range");
    }
  }
  const int i00 = basis_indices[0];
  Complex sum(1.0, 0.0);
  for (int q = 0; q < 3; ++q) {
    const Complex overlap = 4.0 * rho_fin(basis_indices[q + 1], i00);
    sum += std::polar(1.0, -phases[q]) * overlap;
  }
  return std::clamp(std::norm(sum) / 16.0, 0.0, 1.0);
}

double population(const DensityMatrix& rho, int index) {
  if (index < 0 || index >= rho.dim()) {
    throw StructuralError("population index " + std::to_string(index) + " out of range");
  }
  return rho(index, index).real();
}

CVector basis_vector(int dim, int index) {
  if (index < 0 || index >= dim) throw StructuralError("basis index out of range");
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

OperatorMatrix transition(int dim, int row, int col) {
  if (row < 0 || row >= dim || col < 0 || col >= dim) {
    throw StructuralError("transition index out of range");
  }
  OperatorMatrix m = OperatorMatrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

}  // namespace qcrl
