#include "qcrl/lindblad_generator.hpp"

#include "qcrl/errors.hpp"

#include <map>
#include <utility>

namespace qcrl {

namespace {

constexpr double kZeroTol = 0.0;

}  // namespace

LindbladGenerator::LindbladGenerator(const OperatorMatrix& drift,
                                     std::vector<OperatorMatrix> controls,
                                     std::vector<CollapseChannel> channels)
    : dim_(static_cast<int>(drift.rows())),
      drift_(drift),
      controls_(std::move(controls)),
      channels_(std::move(channels)) {
  if (drift.rows() != drift.cols() || dim_ == 0) {
    throw StructuralError("drift Hamiltonian must be square and non-empty");
  }
  check_hermitian(drift_);
  for (const auto& c : controls_) {
    if (c.rows() != dim_ || c.cols() != dim_) {
      throw StructuralError("control Hamiltonian dimension mismatch");
    }
    check_hermitian(c);
  }

  OperatorMatrix heff_static = drift_;
  for (const auto& ch : channels_) {
    if (ch.op.rows() != dim_ || ch.op.cols() != dim_) {
      throw StructuralError("collapse operator dimension mismatch");
    }
    if (ch.rate < 0.0) throw StructuralError("collapse rate must be non-negative");
    heff_static -= Complex(0.0, 0.5 * ch.rate) * (ch.op.adjoint() * ch.op);

    Jump jump{{}, ch.rate};
    for (int j = 0; j < dim_; ++j) {
      for (int i = 0; i < dim_; ++i) {
        if (std::abs(ch.op(i, j)) > kZeroTol) jump.nonzeros.push_back({i, j, ch.op(i, j)});
      }
    }
    jumps_.push_back(std::move(jump));
  }

  // Union of non-zero positions over the static part and every control term.
  std::map<std::pair<int, int>, int> slots;
  auto slot_of = [&](int i, int j) {
    auto [it, inserted] = slots.try_emplace({i, j}, static_cast<int>(pattern_.size()));
    if (inserted) pattern_.push_back({i, j, Complex(0.0, 0.0)});
    return it->second;
  };
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) {
      if (std::abs(heff_static(i, j)) > kZeroTol) {
        pattern_[slot_of(i, j)].value = heff_static(i, j);
      }
    }
  }
  for (const auto& c : controls_) {
    std::vector<Term> terms;
    for (int j = 0; j < dim_; ++j) {
      for (int i = 0; i < dim_; ++i) {
        if (std::abs(c(i, j)) > kZeroTol) terms.push_back({slot_of(i, j), c(i, j)});
      }
    }
    control_terms_.push_back(std::move(terms));
  }
  heff_values_.resize(pattern_.size());
  product_ = CMatrix::Zero(dim_, dim_);
}

OperatorMatrix LindbladGenerator::hamiltonian(std::span<const double> coeffs) const {
  if (coeffs.size() != controls_.size()) {
    throw StructuralError("wrong number of control coefficients");
  }
  OperatorMatrix h = drift_;
  for (std::size_t j = 0; j < controls_.size(); ++j) h += coeffs[j] * controls_[j];
  return h;
}

void LindbladGenerator::apply(std::span<const double> coeffs, const CMatrix& rho,
                              CMatrix& out) const {
  const int n = dim_;
  for (std::size_t p = 0; p < pattern_.size(); ++p) heff_values_[p] = pattern_[p].value;
  for (std::size_t j = 0; j < control_terms_.size(); ++j) {
    const double c = coeffs[j];
    if (c == 0.0) continue;
    for (const auto& t : control_terms_[j]) heff_values_[t.slot] += c * t.value;
  }

  // product = H_eff * rho, column-major storage.
  product_.setZero();
  Complex* x = product_.data();
  const Complex* r = rho.data();
  for (std::size_t p = 0; p < pattern_.size(); ++p) {
    const Complex v = heff_values_[p];
    if (v == Complex(0.0, 0.0)) continue;
    const int row = pattern_[p].row;
    const int k = pattern_[p].col;
    for (int c = 0; c < n; ++c) x[c * n + row] += v * r[c * n + k];
  }

  out.resize(n, n);
  Complex* o = out.data();
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      // -i X(a,b) + i conj(X(b,a))
      const Complex xab = x[b * n + a];
      const Complex xba = std::conj(x[a * n + b]);
      o[b * n + a] = Complex(xab.imag() - xba.imag(), -xab.real() + xba.real());
    }
  }

  for (const auto& jump : jumps_) {
    if (jump.rate == 0.0) continue;
    for (const auto& e1 : jump.nonzeros) {
      for (const auto& e2 : jump.nonzeros) {
        o[e2.row * n + e1.row] += jump.rate * e1.value * r[e2.col * n + e1.col] * std::conj(e2.value);
      }
    }
  }
}

}  // namespace qcrl
