#include "qcrl/mlp.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>

namespace qcrl {

double relu6(double x) { return std::clamp(x, 0.0, 6.0); }

Eigen::MatrixXd orthogonal_matrix(int rows, int cols, double gain, CounterRng& rng) {
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  Eigen::MatrixXd a(big, small);
  for (int j = 0; j < small; ++j) {
    for (int i = 0; i < big; ++i) a(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  // Sign fix so the distribution is uniform over orthogonal matrices.
  const Eigen::MatrixXd r = qr.matrixQR().topRows(small).triangularView<Eigen::Upper>();
  for (int j = 0; j < small; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  if (rows < cols) return gain * q.transpose();
  return gain * q;
}

Mlp::Mlp(std::vector<int> sizes, std::size_t offset) : sizes_(std::move(sizes)), offset_(offset) {
  if (sizes_.size() < 2) throw ConfigError("MLP needs at least input and output sizes");
  std::size_t pos = offset_;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] < 1 || sizes_[l + 1] < 1) throw ConfigError("MLP layer sizes must be positive");
    Layer layer{sizes_[l], sizes_[l + 1], pos, pos + static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1]};
    pos = layer.b + layer.out;
    layers_.push_back(layer);
  }
  num_params_ = pos - offset_;
}

void Mlp::init(std::span<double> params, CounterRng& rng, double hidden_gain, double output_gain) const {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& L = layers_[l];
    const double gain = l + 1 == layers_.size() ? output_gain : hidden_gain;
    Eigen::Map<Eigen::MatrixXd>(params.data() + L.w, L.out, L.in) = orthogonal_matrix(L.out, L.in, gain, rng);
    std::fill(params.begin() + L.b, params.begin() + L.b + L.out, 0.0);
  }
}

Eigen::MatrixXd Mlp::forward(std::span<const double> params, const Eigen::MatrixXd& x, Cache* cache) const {
  if (x.rows() != input_dim()) throw StructuralError("MLP input has the wrong dimension");
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->pre.clear();
  }
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& L = layers_[l];
    Eigen::Map<const Eigen::MatrixXd> w(params.data() + L.w, L.out, L.in);
    Eigen::Map<const Eigen::VectorXd> b(params.data() + L.b, L.out);
    Eigen::MatrixXd z = w * h;
    z.colwise() += b;
    if (cache != nullptr) cache->inputs.push_back(h);
    if (l + 1 == layers_.size()) return z;
    if (cache != nullptr) cache->pre.push_back(z);
    h = z.unaryExpr([](double v) { return relu6(v); });
  }
  return h;
}

void Mlp::backward(std::span<const double> params, const Cache& cache, const Eigen::MatrixXd& d_out,
                   std::span<double> grad) const {
  Eigen::MatrixXd delta = d_out;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Layer& L = layers_[l];
    Eigen::Map<Eigen::MatrixXd>(grad.data() + L.w, L.out, L.in) += delta * cache.inputs[l].transpose();
    Eigen::Map<Eigen::VectorXd>(grad.data() + L.b, L.out) += delta.rowwise().sum();
    if (l == 0) break;
    Eigen::Map<const Eigen::MatrixXd> w(params.data() + L.w, L.out, L.in);
    Eigen::MatrixXd back = w.transpose() * delta;
    const Eigen::MatrixXd& z = cache.pre[l - 1];
    delta = back.cwiseProduct(z.unaryExpr([](double v) { return (v > 0.0 && v < 6.0) ? 1.0 : 0.0; }));
  }
}

}  // namespace qcrl
