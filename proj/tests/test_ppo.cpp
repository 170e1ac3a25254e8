#include "qcrl/config.hpp"
#include "qcrl/errors.hpp"
#include "qcrl/mlp.hpp"
#include "qcrl/ppo.hpp"
#include "qcrl/trainer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace qcrl;

namespace {

std::vector<double> current_log_probs(const Policy& p, const Eigen::MatrixXd& obs, const Eigen::MatrixXd& act) {
  const Eigen::MatrixXd mean = p.mean(obs);
  const Eigen::VectorXd ls = p.log_std();
  std::vector<double> out;
  for (int j = 0; j < obs.cols(); ++j) {
    const Eigen::VectorXd a = act.col(j);
    const Eigen::VectorXd m = mean.col(j);
    out.push_back(gaussian_log_prob({a.data(), static_cast<std::size_t>(a.size())},
                                    {m.data(), static_cast<std::size_t>(m.size())},
                                    {ls.data(), static_cast<std::size_t>(ls.size())}));
  }
  return out;
}

Batch toy_batch(const Policy& p, int n, CounterRng& rng, double logp_jitter) {
  Batch b;
  b.obs = Eigen::MatrixXd(p.obs_dim(), n);
  b.actions = Eigen::MatrixXd(p.act_dim(), n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < p.obs_dim(); ++i) b.obs(i, j) = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < p.act_dim(); ++i) b.actions(i, j) = rng.normal();
  }
  const auto lp = current_log_probs(p, b.obs, b.actions);
  b.log_probs = Eigen::VectorXd(n);
  b.advantages = Eigen::VectorXd(n);
  b.returns = Eigen::VectorXd(n);
  for (int j = 0; j < n; ++j) {
    b.log_probs(j) = lp[j] + rng.uniform(-logp_jitter, logp_jitter);
    b.advantages(j) = rng.normal();
    b.returns(j) = rng.normal();
  }
  return b;
}

}  // namespace

TEST(Mlp, ForwardShapesAndRelu6) {
  EXPECT_EQ(relu6(-1.0), 0.0);
  EXPECT_EQ(relu6(3.0), 3.0);
  EXPECT_EQ(relu6(7.0), 6.0);
  const Mlp net({3, 5, 5, 2}, 0);
  EXPECT_EQ(net.num_params(), 3u * 5 + 5 + 5 * 5 + 5 + 5 * 2 + 2);
  std::vector<double> params(net.num_params());
  CounterRng rng(1);
  net.init(params, rng, std::sqrt(2.0), 1.0);
  const Eigen::MatrixXd y = net.forward(params, Eigen::MatrixXd::Ones(3, 4), nullptr);
  EXPECT_EQ(y.rows(), 2);
  EXPECT_EQ(y.cols(), 4);
}

TEST(Mlp, OrthogonalInit) {
  CounterRng rng(2);
  const Eigen::MatrixXd w = orthogonal_matrix(6, 4, 2.0, rng);
  EXPECT_LT((w.transpose() * w - 4.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd v = orthogonal_matrix(3, 7, 1.0, rng);
  EXPECT_LT((v * v.transpose() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Policy, LayoutAndInitialLogStd) {
  const Policy p(2, 3, 8, -0.5, -5.0, 2.0, 7);
  EXPECT_EQ(p.actor().offset(), 0u);
  EXPECT_EQ(p.critic().offset(), p.actor().num_params());
  EXPECT_EQ(p.log_std_offset(), p.actor().num_params() + p.critic().num_params());
  EXPECT_EQ(p.num_params(), p.log_std_offset() + 3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(p.log_std()(i), -0.5);
  EXPECT_NEAR(p.entropy(), 3 * (0.5 * std::log(2 * std::numbers::pi * std::numbers::e) - 0.5), 1e-12);
}

TEST(Policy, NearDeterministicSampling) {
  const Policy p(1, 4, 8, -5.0, -5.0, 2.0, 3);
  CounterRng rng(5);
  const std::vector<double> obs{0.0};
  const auto s = sample_action(p, obs, rng);
  const Eigen::MatrixXd mean = p.mean(Eigen::MatrixXd::Zero(1, 1));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.clamped[i], std::clamp(mean(i, 0), -1.0, 1.0), 3e-2);
}

TEST(Policy, LogProbMatchesDensityAndIsDeterministic) {
  const Policy p(1, 3, 8, 0.3, -5.0, 2.0, 3);
  CounterRng r1(9), r2(9);
  const std::vector<double> obs{0.0};
  const auto a = sample_action(p, obs, r1);
  const auto b = sample_action(p, obs, r2);
  EXPECT_EQ(a.raw, b.raw);
  const Eigen::MatrixXd mean = p.mean(Eigen::MatrixXd::Zero(1, 1));
  double lp = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sd = std::exp(0.3);
    const double z = (a.raw[i] - mean(i, 0)) / sd;
    lp += std::log(std::exp(-0.5 * z * z) / (sd * std::sqrt(2 * std::numbers::pi)));
  }
  EXPECT_NEAR(a.log_prob, lp, 1e-10);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(a.clamped[i]), 1.0);
    EXPECT_EQ(a.clamped[i], std::clamp(a.raw[i], -1.0, 1.0));
  }
}

TEST(Gae, BanditReduction) {
  double adv = 0, ret = 0;
  const std::vector<double> r{2.0}, v{0.5};
  gae(r, v, 0.0, 0.99, 0.95, {&adv, 1}, {&ret, 1});
  EXPECT_EQ(adv, 1.5);
  EXPECT_EQ(ret, 2.0);
}

TEST(Gae, MyopicCase) {
  const std::vector<double> r{1.0, -2.0, 0.5, 3.0}, v{0.1, 0.2, -0.3, 0.4};
  std::vector<double> adv(4), ret(4);
  gae(r, v, 7.0, 0.0, 0.95, adv, ret);
  for (int t = 0; t < 4; ++t) EXPECT_EQ(adv[t], r[t] - v[t]);
}

TEST(Gae, MatchesDirectSum) {
  CounterRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> r(4), v(4), adv(4), ret(4);
    for (int t = 0; t < 4; ++t) {
      r[t] = rng.normal();
      v[t] = rng.normal();
    }
    const double last = rng.normal(), g = rng.uniform(0.5, 1.0), l = rng.uniform(0.5, 1.0);
    gae(r, v, last, g, l, adv, ret);
    for (int t = 0; t < 4; ++t) {
      double want = 0.0;
      for (int k = t; k < 4; ++k) {
        const double next = k + 1 < 4 ? v[k + 1] : last;
        want += std::pow(g * l, k - t) * (r[k] + g * next - v[k]);
      }
      EXPECT_NEAR(adv[t], want, 1e-12);
      EXPECT_NEAR(ret[t], want + v[t], 1e-12);
    }
  }
}

TEST(PpoLoss, OnPolicyFirstEpoch) {
  const Policy p(1, 2, 8, -0.5, -5.0, 2.0, 1);
  CounterRng rng(2);
  Batch b = toy_batch(p, 16, rng, 0.0);
  b.advantages.setOnes();
  PpoConfig cfg;
  cfg.vf_coef = 0.0;
  const auto info = ppo_loss(p, b, cfg, nullptr);
  EXPECT_NEAR(info.policy_loss, -1.0, 1e-12);
  EXPECT_EQ(info.clip_frac, 0.0);
  EXPECT_NEAR(info.approx_kl, 0.0, 1e-15);
}

TEST(PpoLoss, ClipArithmetic) {
  const Policy p(1, 2, 8, -0.5, -5.0, 2.0, 1);
  CounterRng rng(3);
  Batch b = toy_batch(p, 1, rng, 0.0);
  PpoConfig cfg;
  cfg.vf_coef = 0.0;
  const double eps = cfg.clip_eps;
  // ratio = 1 + 2 eps with A > 0: the clipped term (1 + eps) A is selected.
  b.log_probs(0) -= std::log(1.0 + 2.0 * eps);
  b.advantages(0) = 2.0;
  std::vector<double> grad;
  auto info = ppo_loss(p, b, cfg, &grad);
  EXPECT_NEAR(info.policy_loss, -(1.0 + eps) * 2.0, 1e-12);
  EXPECT_EQ(info.clip_frac, 1.0);
  double actor_grad = 0.0;
  for (std::size_t i = 0; i < p.actor().num_params(); ++i) actor_grad += std::abs(grad[i]);
  EXPECT_EQ(actor_grad, 0.0);
  // Same ratio with A < 0: the unclipped term is smaller and keeps its gradient.
  b.advantages(0) = -2.0;
  info = ppo_loss(p, b, cfg, &grad);
  EXPECT_NEAR(info.policy_loss, (1.0 + 2.0 * eps) * 2.0, 1e-12);
  const double r = 1.0 + 2.0 * eps;
  EXPECT_NEAR(info.approx_kl, (r - 1.0) - std::log(r), 1e-12);
}

TEST(PpoLoss, GradientMatchesFiniteDifferences) {
  Policy p(3, 2, 4, -0.3, -5.0, 2.0, 21);
  // Random biases so that relu6 units sit away from their kinks in general.
  CounterRng rng(22);
  for (double& v : p.params()) v += 0.1 * rng.normal();
  const Batch b = toy_batch(p, 12, rng, 0.1);
  PpoConfig cfg;
  cfg.ent_coef = 0.01;
  std::vector<double> grad;
  ppo_loss(p, b, cfg, &grad);
  double worst = 0.0;
  const double h = 1e-6;
  for (std::size_t i = 0; i < p.num_params(); ++i) {
    Policy q = p;
    q.params()[i] += h;
    const double up = ppo_loss(q, b, cfg, nullptr).loss;
    q.params()[i] -= 2 * h;
    const double down = ppo_loss(q, b, cfg, nullptr).loss;
    const double fd = (up - down) / (2 * h);
    const double rel = std::abs(fd - grad[i]) / std::max(1e-6, std::abs(fd) + std::abs(grad[i]));
    worst = std::max(worst, rel);
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Adam adam(2, 0.9, 0.999, 1e-8);
  std::vector<double> x{1.0, -1.0};
  const std::vector<double> g{0.3, -5.0};
  adam.step(x, g, 0.01);
  EXPECT_NEAR(x[0], 0.99, 1e-6);
  EXPECT_NEAR(x[1], -0.99, 1e-6);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(PpoUpdate, DeterministicAndFinite) {
  CounterRng rng(31);
  Policy p(1, 3, 8, -0.5, -5.0, 2.0, 4);
  const Batch b = toy_batch(p, 16, rng, 0.05);
  PpoConfig cfg;
  cfg.num_envs = 16;
  cfg.num_minibatches = 4;
  Policy q = p;
  Adam a1(p.num_params(), 0.9, 0.999, 1e-8), a2 = a1;
  CounterRng s1(5), s2(5);
  const auto m1 = ppo_update(p, a1, b, cfg, s1);
  const auto m2 = ppo_update(q, a2, b, cfg, s2);
  EXPECT_EQ(p.params(), q.params());
  EXPECT_EQ(m1.policy_loss, m2.policy_loss);
  EXPECT_TRUE(std::isfinite(m1.approx_kl));
}

TEST(Trainer, ZeroUpdatesAndDeterminism) {
  RunConfig cfg = default_config(EnvVariant::transmon);
  cfg.ppo.num_envs = 8;
  cfg.ppo.num_minibatches = 2;
  cfg.ppo.hidden = 16;
  cfg.ppo.num_updates = 0;
  const auto env = make_environment(cfg);
  const auto task = make_task(*env, cfg);
  TrainOptions o;
  o.ppo = cfg.ppo;
  o.reward = cfg.reward;
  o.solver = cfg.solver;
  o.seed = 3;
  const auto empty = train(task, o);
  EXPECT_TRUE(empty.history.empty());
  EXPECT_EQ(static_cast<int>(empty.best_action.size()), env->action_dim());

  o.ppo.num_updates = 3;
  o.threads = 1;
  const auto a = train(task, o);
  o.threads = 3;
  const auto b = train(task, o);
  ASSERT_EQ(a.history.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.history[i].mean_fidelity, b.history[i].mean_fidelity);
    EXPECT_EQ(a.history[i].ppo.policy_loss, b.history[i].ppo.policy_loss);
  }
  EXPECT_EQ(a.policy.params(), b.policy.params());
}

TEST(Multistep, ObservationsAndAssembly) {
  RunConfig cfg = default_config(EnvVariant::lambda);
  cfg.multistep.sections = 5;
  cfg.multistep.bias.mu_sigma = 2.0;
  const auto env = make_environment(cfg);
  const auto task = make_task(*env, cfg);
  EXPECT_EQ(task.obs_dim(), 2);
  EXPECT_EQ(task.section_action_dim(), env->action_dim() / 5);
  const auto setup = task.reset(1, 2, 3);
  ASSERT_EQ(setup.observations.size(), 5u);
  EXPECT_EQ(setup.observations[0], (std::vector<double>{0.0, 0.0}));
  for (int k = 1; k < 5; ++k) {
    EXPECT_EQ(setup.observations[k][1], k / 5.0);
    EXPECT_EQ(setup.observations[k][0], setup.observations[1][0]);
  }
  EXPECT_LE(std::abs(setup.noise.mu_omega), 2.0);
  std::vector<std::vector<double>> sections(5);
  for (int k = 0; k < 5; ++k) sections[k].assign(task.section_action_dim(), static_cast<double>(k));
  const auto raw = task.assemble(sections);
  // Channel-major layout: each channel's samples are split across sections.
  EXPECT_EQ(raw[0], 0.0);
  EXPECT_EQ(raw[10], 1.0);
  EXPECT_EQ(raw[49], 4.0);
  EXPECT_EQ(raw[50], 0.0);

  cfg.multistep.sections = 7;
  EXPECT_THROW(make_task(*env, cfg), ConfigError);
}
