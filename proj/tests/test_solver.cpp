#include "qcrl/errors.hpp"
#include "qcrl/lindblad_generator.hpp"
#include "qcrl/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qcrl;

namespace {

RhsFunction decay_rhs(double gamma) {
  auto gen = std::make_shared<LindbladGenerator>(CMatrix::Zero(2, 2), std::vector<OperatorMatrix>{},
                                                 std::vector<CollapseChannel>{{transition(2, 0, 1), gamma}});
  return [gen](double, const CMatrix& rho, CMatrix& out) { gen->apply({}, rho, out); };
}

// Driven, damped qubit with a time-dependent drive.
RhsFunction driven_rhs() {
  CMatrix sx = transition(2, 0, 1) + transition(2, 1, 0);
  CMatrix sz = transition(2, 0, 0) - transition(2, 1, 1);
  auto gen = std::make_shared<LindbladGenerator>(0.5 * sz, std::vector<OperatorMatrix>{sx},
                                                 std::vector<CollapseChannel>{{transition(2, 0, 1), 0.3}});
  return [gen](double t, const CMatrix& rho, CMatrix& out) {
    const double c = 3.0 * std::sin(2.0 * t);
    gen->apply({&c, 1}, rho, out);
  };
}

}  // namespace

TEST(Solver, AmplitudeDecayAnalytic) {
  SolverConfig cfg;
  cfg.t1 = 2.0;
  cfg.output_times = {0.5, 1.0, 1.5, 2.0};
  const auto r = integrate(decay_rhs(1.7), DensityMatrix::basis(2, 1), cfg);
  ASSERT_EQ(r.status, SolveStatus::ok);
  ASSERT_EQ(r.states_at_outputs.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(population(r.states_at_outputs[i], 1), std::exp(-1.7 * cfg.output_times[i]), 1e-6);
  }
  EXPECT_NEAR(population(r.final_state, 1), std::exp(-1.7 * 2.0), 1e-6);
}

TEST(Solver, AgreesWithRk4Oracle) {
  SolverConfig cfg;
  cfg.t1 = 3.0;
  const auto rho0 = DensityMatrix::basis(2, 0);
  const auto r = integrate(driven_rhs(), rho0, cfg);
  ASSERT_EQ(r.status, SolveStatus::ok);
  const auto ref = integrate_fixed(driven_rhs(), rho0, 0.0, 3.0, 20000);
  EXPECT_LT((r.final_state.matrix() - ref.matrix()).cwiseAbs().maxCoeff(), 10 * cfg.rtol);
  EXPECT_LT(r.final_state.trace_error(), 1e-7);
}

TEST(Solver, BudgetExceededAtExactlyMaxSteps) {
  SolverConfig cfg;
  cfg.t1 = 3.0;
  cfg.max_steps = 5;
  const auto r = integrate(driven_rhs(), DensityMatrix::basis(2, 0), cfg);
  EXPECT_EQ(r.status, SolveStatus::budget_exceeded);
  EXPECT_EQ(r.steps_taken, 5);
  EXPECT_EQ(r.accepted_steps + r.rejected_steps, r.steps_taken);
  EXPECT_LT(r.t_reached, cfg.t1);
}

TEST(Solver, StepsTakenCountsAttempts) {
  SolverConfig cfg;
  cfg.t1 = 3.0;
  const auto r = integrate(driven_rhs(), DensityMatrix::basis(2, 0), cfg);
  EXPECT_EQ(r.accepted_steps + r.rejected_steps, r.steps_taken);
  EXPECT_GT(r.accepted_steps, 0);
}

TEST(Solver, TighterToleranceUsesMoreSteps) {
  SolverConfig loose;
  loose.t1 = 3.0;
  loose.rtol = 1e-4;
  loose.atol = 1e-6;
  SolverConfig tight = loose;
  tight.rtol = 1e-9;
  tight.atol = 1e-11;
  const auto a = integrate(driven_rhs(), DensityMatrix::basis(2, 0), loose);
  const auto b = integrate(driven_rhs(), DensityMatrix::basis(2, 0), tight);
  EXPECT_LT(a.steps_taken, b.steps_taken);
}

TEST(Solver, OutputTimesAreHitExactly) {
  SolverConfig cfg;
  cfg.t1 = 1.0;
  cfg.output_times = {0.0, 0.123456789, 0.5, 1.0};
  const auto r = integrate(decay_rhs(1.0), DensityMatrix::basis(2, 1), cfg);
  ASSERT_EQ(r.states_at_outputs.size(), 4u);
  EXPECT_DOUBLE_EQ(population(r.states_at_outputs[0], 1), 1.0);
  EXPECT_NEAR(population(r.states_at_outputs[1], 1), std::exp(-0.123456789), 1e-7);
}

TEST(Solver, ConfigValidation) {
  SolverConfig cfg;
  cfg.t1 = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.t1 = 1.0;
  cfg.max_steps = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.max_steps = 10;
  cfg.rtol = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Solver, NonFiniteStateThrows) {
  RhsFunction bad = [](double, const CMatrix& rho, CMatrix& out) {
    out = rho * std::numeric_limits<double>::quiet_NaN();
  };
  SolverConfig cfg;
  EXPECT_THROW(integrate(bad, DensityMatrix::basis(2, 0), cfg), IntegrationError);
}
