#pragma once

#include "qcrl/rng.hpp"

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace qcrl {

/// Fully connected network with relu6 hidden activations and a linear
/// output layer. Weights live in an external flat parameter vector starting
/// at `offset`; each layer stores W (out x in, column-major) then b.
/// Inputs and outputs are column-per-sample matrices.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<int> sizes, std::size_t offset);

  std::size_t num_params() const { return num_params_; }
  std::size_t offset() const { return offset_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }

  /// Orthogonal weights (gain `hidden_gain` for hidden layers, `output_gain`
  /// for the last), zero biases.
  void init(std::span<double> params, CounterRng& rng, double hidden_gain, double output_gain) const;

  struct Cache {
    std::vector<Eigen::MatrixXd> inputs;  // input of each layer
    std::vector<Eigen::MatrixXd> pre;     // pre-activation of hidden layers
  };

  Eigen::MatrixXd forward(std::span<const double> params, const Eigen::MatrixXd& x, Cache* cache) const;

  /// Accumulates dLoss/dparams into grad given dLoss/doutput.
  void backward(std::span<const double> params, const Cache& cache, const Eigen::MatrixXd& d_out,
                std::span<double> grad) const;

 private:
  struct Layer {
    int in;
    int out;
    std::size_t w;  // offset of W in the flat vector
    std::size_t b;  // offset of b
  };
  std::vector<int> sizes_;
  std::vector<Layer> layers_;
  std::size_t offset_ = 0;
  std::size_t num_params_ = 0;
};

double relu6(double x);

/// Orthogonal matrix of shape rows x cols scaled by gain.
Eigen::MatrixXd orthogonal_matrix(int rows, int cols, double gain, CounterRng& rng);

}  // namespace qcrl
