#include "qcrl/ppo.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qcrl {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

void PpoConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("ppo: lr must be positive");
  if (!(clip_eps > 0.0)) throw ConfigError("ppo: clip_eps must be positive");
  if (ent_coef < 0.0 || vf_coef < 0.0) throw ConfigError("ppo: loss coefficients must be >= 0");
  if (gamma < 0.0 || gamma > 1.0 || gae_lambda < 0.0 || gae_lambda > 1.0) {
    throw ConfigError("ppo: gamma and gae_lambda must lie in [0, 1]");
  }
  if (num_envs < 1 || num_minibatches < 1 || update_epochs < 1) {
    throw ConfigError("ppo: num_envs, num_minibatches and update_epochs must be >= 1");
  }
  if (num_envs % num_minibatches != 0) throw ConfigError("ppo: num_envs must be divisible by num_minibatches");
  if (!(max_grad_norm > 0.0)) throw ConfigError("ppo: max_grad_norm must be positive");
  if (num_updates < 0) throw ConfigError("ppo: num_updates must be >= 0");
  if (hidden < 1) throw ConfigError("ppo: hidden must be >= 1");
  if (!(log_std_min < log_std_max)) throw ConfigError("ppo: log_std_min must be below log_std_max");
}

Policy::Policy(int obs_dim, int act_dim, int hidden, double init_log_std, double log_std_min,
               double log_std_max, std::uint64_t seed)
    : obs_dim_(obs_dim), act_dim_(act_dim), log_std_min_(log_std_min), log_std_max_(log_std_max) {
  if (obs_dim < 1 || act_dim < 1) throw ConfigError("policy dimensions must be positive");
  actor_ = Mlp({obs_dim, hidden, hidden, act_dim}, 0);
  critic_ = Mlp({obs_dim, hidden, hidden, 1}, actor_.num_params());
  log_std_offset_ = actor_.num_params() + critic_.num_params();
  params_.assign(log_std_offset_ + act_dim, 0.0);
  CounterRng rng(stream_key({seed, 0x1A17ULL}));
  actor_.init(params_, rng, std::sqrt(2.0), 0.01);
  critic_.init(params_, rng, std::sqrt(2.0), 1.0);
  std::fill(params_.begin() + log_std_offset_, params_.end(), std::clamp(init_log_std, log_std_min, log_std_max));
}

Eigen::VectorXd Policy::log_std() const {
  Eigen::VectorXd s(act_dim_);
  for (int j = 0; j < act_dim_; ++j) s(j) = std::clamp(params_[log_std_offset_ + j], log_std_min_, log_std_max_);
  return s;
}

Eigen::MatrixXd Policy::mean(const Eigen::MatrixXd& obs) const { return actor_.forward(params_, obs, nullptr); }

Eigen::VectorXd Policy::value(const Eigen::MatrixXd& obs) const {
  return critic_.forward(params_, obs, nullptr).row(0).transpose();
}

double Policy::entropy() const { return log_std().sum() + act_dim_ * (0.5 + kHalfLog2Pi); }

void Policy::project() {
  for (int j = 0; j < act_dim_; ++j) {
    double& v = params_[log_std_offset_ + j];
    v = std::clamp(v, log_std_min_, log_std_max_);
  }
}

double gaussian_log_prob(std::span<const double> x, std::span<const double> mean, std::span<const double> log_std) {
  double lp = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double z = (x[j] - mean[j]) * std::exp(-log_std[j]);
    lp += -0.5 * z * z - log_std[j] - kHalfLog2Pi;
  }
  return lp;
}

std::vector<ActionSample> sample_actions(const Policy& policy, const Eigen::MatrixXd& obs,
                                         std::span<CounterRng> rngs) {
  const Eigen::MatrixXd mu = policy.mean(obs);
  const Eigen::VectorXd v = policy.value(obs);
  const Eigen::VectorXd ls = policy.log_std();
  const int d = policy.act_dim();
  std::vector<ActionSample> out(obs.cols());
  for (Eigen::Index i = 0; i < obs.cols(); ++i) {
    ActionSample& s = out[i];
    s.raw.resize(d);
    s.clamped.resize(d);
    for (int j = 0; j < d; ++j) {
      s.raw[j] = mu(j, i) + std::exp(ls(j)) * rngs[i].normal();
      s.clamped[j] = std::clamp(s.raw[j], -1.0, 1.0);
    }
    s.log_prob = gaussian_log_prob(s.raw, std::span<const double>(mu.col(i).data(), d),
                                   std::span<const double>(ls.data(), d));
    s.value = v(i);
  }
  return out;
}

ActionSample sample_action(const Policy& policy, std::span<const double> obs, CounterRng& rng) {
  Eigen::MatrixXd o = Eigen::Map<const Eigen::VectorXd>(obs.data(), obs.size());
  return sample_actions(policy, o, std::span<CounterRng>(&rng, 1)).front();
}

void gae(std::span<const double> rewards, std::span<const double> values, double last_value, double gamma,
         double lambda, std::span<double> advantages, std::span<double> returns) {
  const std::size_t n = rewards.size();
  if (values.size() != n || advantages.size() != n || returns.size() != n) {
    throw StructuralError("gae: length mismatch");
  }
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double next_value = t + 1 < n ? values[t + 1] : last_value;
    const double delta = rewards[t] + gamma * next_value - values[t];
    running = delta + gamma * lambda * running;
    advantages[t] = running;
    returns[t] = running + values[t];
  }
}

Batch Batch::select(std::span<const int> idx) const {
  Batch b;
  const auto n = static_cast<Eigen::Index>(idx.size());
  b.obs.resize(obs.rows(), n);
  b.actions.resize(actions.rows(), n);
  b.log_probs.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const int i = idx[k];
    b.obs.col(k) = obs.col(i);
    b.actions.col(k) = actions.col(i);
    b.log_probs(k) = log_probs(i);
    b.advantages(k) = advantages(i);
    b.returns(k) = returns(i);
  }
  return b;
}

LossInfo ppo_loss(const Policy& policy, const Batch& mb, const PpoConfig& config, std::vector<double>* grad) {
  const int n = mb.size();
  const int d = policy.act_dim();
  const auto& params = policy.params();
  Mlp::Cache actor_cache, critic_cache;
  const Eigen::MatrixXd mu = policy.actor().forward(params, mb.obs, grad ? &actor_cache : nullptr);
  const Eigen::MatrixXd v = policy.critic().forward(params, mb.obs, grad ? &critic_cache : nullptr);
  const Eigen::VectorXd ls = policy.log_std();
  const Eigen::VectorXd inv_var = (-2.0 * ls).array().exp();

  LossInfo info;
  Eigen::VectorXd d_logp(n);
  Eigen::VectorXd d_ls = Eigen::VectorXd::Zero(d);
  const double eps = config.clip_eps;
  for (int i = 0; i < n; ++i) {
    double logp = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = mb.actions(j, i) - mu(j, i);
      logp += -0.5 * diff * diff * inv_var(j) - ls(j) - kHalfLog2Pi;
    }
    const double log_ratio = logp - mb.log_probs(i);
    const double ratio = std::exp(log_ratio);
    const double a = mb.advantages(i);
    const double s1 = ratio * a;
    const double s2 = std::clamp(ratio, 1.0 - eps, 1.0 + eps) * a;
    info.policy_loss -= std::min(s1, s2) / n;
    // Only the unclipped branch carries gradient; when the clipped branch is
    // strictly smaller the ratio lies outside the clip range.
    d_logp(i) = s1 <= s2 ? -a * ratio / n : 0.0;
    info.approx_kl += ((ratio - 1.0) - log_ratio) / n;
    info.clip_frac += (std::abs(ratio - 1.0) > eps ? 1.0 : 0.0) / n;
  }
  Eigen::VectorXd dv(n);
  for (int i = 0; i < n; ++i) {
    const double err = v(0, i) - mb.returns(i);
    info.value_loss += err * err / n;
    dv(i) = config.vf_coef * 2.0 * err / n;
  }
  info.entropy = policy.entropy();
  info.loss = info.policy_loss + config.vf_coef * info.value_loss - config.ent_coef * info.entropy;

  if (grad != nullptr) {
    grad->assign(policy.num_params(), 0.0);
    Eigen::MatrixXd d_mu(d, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) {
        const double diff = mb.actions(j, i) - mu(j, i);
        d_mu(j, i) = d_logp(i) * diff * inv_var(j);
        d_ls(j) += d_logp(i) * (diff * diff * inv_var(j) - 1.0);
      }
    }
    policy.actor().backward(params, actor_cache, d_mu, *grad);
    policy.critic().backward(params, critic_cache, dv.transpose(), *grad);
    const std::size_t off = policy.log_std_offset();
    for (int j = 0; j < d; ++j) {
      const double raw = params[off + j];
      // The clamp kills the gradient outside the bounds.
      if (raw >= policy.log_std_min() && raw <= policy.log_std_max()) {
        (*grad)[off + j] = d_ls(j) - config.ent_coef;
      }
    }
  }
  return info;
}

Adam::Adam(std::size_t n, double beta1, double beta2, double eps)
    : m_(n, 0.0), v_(n, 0.0), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(std::span<double> params, std::span<const double> grad, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * grad[k];
    v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * grad[k] * grad[k];
    const double mh = m_[k] / c1;
    const double vh = v_[k] / c2;
    params[k] -= lr * mh / (std::sqrt(vh) + eps_);
  }
}

UpdateMetrics ppo_update(Policy& policy, Adam& adam, Batch batch, const PpoConfig& config, CounterRng& rng) {
  const int n = batch.size();
  if (n == 0) return {};
  if (config.normalize_advantages && n > 1) {
    const double mean = batch.advantages.mean();
    const double var = (batch.advantages.array() - mean).square().sum() / (n - 1);
    batch.advantages = (batch.advantages.array() - mean) / (std::sqrt(var) + 1e-8);
  }
  const int mb_size = std::max(1, n / config.num_minibatches);
  std::vector<int> order(n);
  std::vector<double> grad;
  UpdateMetrics m;
  int count = 0;
  for (int epoch = 0; epoch < config.update_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
      std::swap(order[i], order[j]);
    }
    for (int start = 0; start + mb_size <= n; start += mb_size) {
      const Batch mb = batch.select(std::span<const int>(order.data() + start, mb_size));
      const LossInfo info = ppo_loss(policy, mb, config, &grad);
      if (!std::isfinite(info.loss)) {
        throw std::runtime_error("ppo_update: non-finite loss (policy " + std::to_string(info.policy_loss) +
                                 ", value " + std::to_string(info.value_loss) + ")");
      }
      double norm = 0.0;
      for (double g : grad) norm += g * g;
      norm = std::sqrt(norm);
      if (norm > config.max_grad_norm) {
        const double scale = config.max_grad_norm / (norm + 1e-6);
        for (double& g : grad) g *= scale;
      }
      adam.step(policy.params(), grad, config.lr);
      policy.project();
      m.policy_loss += info.policy_loss;
      m.value_loss += info.value_loss;
      m.entropy += info.entropy;
      m.approx_kl += info.approx_kl;
      m.clip_frac += info.clip_frac;
      m.grad_norm += norm;
      ++count;
    }
  }
  if (count > 0) {
    m.policy_loss /= count;
    m.value_loss /= count;
    m.entropy /= count;
    m.approx_kl /= count;
    m.clip_frac /= count;
    m.grad_norm /= count;
  }
  return m;
}

}  // namespace qcrl
