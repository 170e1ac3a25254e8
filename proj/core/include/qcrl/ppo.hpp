#pragma once

#include "qcrl/mlp.hpp"
#include "qcrl/rng.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace qcrl {

struct PpoConfig {
  double lr = 5e-4;
  double clip_eps = 0.2;
  double ent_coef = 0.0;
  double vf_coef = 0.5;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int num_envs = 64;
  int num_minibatches = 8;
  int update_epochs = 4;
  double max_grad_norm = 0.5;
  int num_updates = 2000;
  int hidden = 256;
  double init_log_std = -0.5;
  double log_std_min = -5.0;
  double log_std_max = 2.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  bool normalize_advantages = true;

  void validate() const;
};

/// Diagonal Gaussian actor and a separate critic, both relu6 MLPs with two
/// hidden layers, plus a state-independent log standard deviation. All
/// parameters live in one flat vector: [actor | critic | log_std].
class Policy {
 public:
  Policy() = default;
  Policy(int obs_dim, int act_dim, int hidden, double init_log_std, double log_std_min, double log_std_max,
         std::uint64_t seed);

  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }
  std::size_t num_params() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  std::size_t log_std_offset() const { return log_std_offset_; }

  /// Clamped log standard deviation.
  Eigen::VectorXd log_std() const;
  Eigen::MatrixXd mean(const Eigen::MatrixXd& obs) const;
  Eigen::VectorXd value(const Eigen::MatrixXd& obs) const;
  double log_std_min() const { return log_std_min_; }
  double log_std_max() const { return log_std_max_; }
  /// Closed-form entropy of the diagonal Gaussian.
  double entropy() const;
  /// Keeps stored log_std inside its bounds.
  void project();

 private:
  int obs_dim_ = 0;
  int act_dim_ = 0;
  Mlp actor_;
  Mlp critic_;
  std::size_t log_std_offset_ = 0;
  double log_std_min_ = -5.0;
  double log_std_max_ = 2.0;
  std::vector<double> params_;
};

double gaussian_log_prob(std::span<const double> x, std::span<const double> mean, std::span<const double> log_std);

struct ActionSample {
  std::vector<double> raw;      // unclamped draw, used for log_prob
  std::vector<double> clamped;  // what the environment receives
  double log_prob = 0.0;
  double value = 0.0;
};

/// One action per observation column. `rngs` supplies one stream per column.
std::vector<ActionSample> sample_actions(const Policy& policy, const Eigen::MatrixXd& obs,
                                         std::span<CounterRng> rngs);
ActionSample sample_action(const Policy& policy, std::span<const double> obs, CounterRng& rng);

/// Generalised advantage estimation over one trajectory. `last_value` is
/// the bootstrap value after the final step (0 for terminal episodes).
void gae(std::span<const double> rewards, std::span<const double> values, double last_value, double gamma,
         double lambda, std::span<double> advantages, std::span<double> returns);

/// Flat training batch with one column per transition.
struct Batch {
  Eigen::MatrixXd obs;      // obs_dim x N
  Eigen::MatrixXd actions;  // act_dim x N, unclamped
  Eigen::VectorXd log_probs;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  int size() const { return static_cast<int>(log_probs.size()); }
  Batch select(std::span<const int> idx) const;
};

struct LossInfo {
  double loss = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_frac = 0.0;
};

/// Loss on a minibatch (advantages used as given) and its gradient, which is
/// written into grad (resized and zeroed).
LossInfo ppo_loss(const Policy& policy, const Batch& mb, const PpoConfig& config, std::vector<double>* grad);

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n, double beta1, double beta2, double eps);
  void step(std::span<double> params, std::span<const double> grad, double lr);
  long steps() const { return t_; }

 private:
  std::vector<double> m_, v_;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
};

struct UpdateMetrics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_frac = 0.0;
  double grad_norm = 0.0;  // before clipping, mean over minibatches
};

/// Normalises advantages (if configured), then runs update_epochs passes over
/// num_minibatches shuffled minibatches with gradient-norm clipping and Adam.
/// Throws std::runtime_error on a non-finite loss.
UpdateMetrics ppo_update(Policy& policy, Adam& adam, Batch batch, const PpoConfig& config, CounterRng& rng);

}  // namespace qcrl
