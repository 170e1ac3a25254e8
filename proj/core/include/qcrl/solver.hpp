#pragma once

#include "qcrl/quantum.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace qcrl {

/// Time derivative of the state: out = d(rho)/dt at time t.
using RhsFunction = std::function<void(double t, const CMatrix& rho, CMatrix& out)>;

struct SolverConfig {
  double rtol = 1e-6;
  double atol = 1e-8;
  int max_steps = 3000;  // hard budget on attempted steps (accepted + rejected)
  double t0 = 0.0;       // us
  double t1 = 1.0;       // us
  std::vector<double> output_times;  // sorted, inside [t0, t1]
  double min_step = 1e-9;            // us

  void validate() const;  // throws ConfigError
};

enum class SolveStatus { ok, budget_exceeded, step_underflow };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::ok;
  DensityMatrix final_state;
  std::vector<DensityMatrix> states_at_outputs;  // complete only when status == ok
  int steps_taken = 0;                           // accepted + rejected attempts
  int accepted_steps = 0;
  int rejected_steps = 0;
  double t_reached = 0.0;
};

/// Adaptive Dormand-Prince 5(4) integration. The step lands exactly on every
/// output time. After each accepted step the state is made Hermitian and
/// renormalised to unit trace. Returns budget_exceeded as soon as the attempt
/// count reaches config.max_steps. Throws IntegrationError on non-finite state.
SolveResult integrate(const RhsFunction& rhs, const DensityMatrix& rho0, const SolverConfig& config);

/// Classical RK4 with n_steps uniform steps (test oracle).
DensityMatrix integrate_fixed(const RhsFunction& rhs, const DensityMatrix& rho0, double t0, double t1,
                              int n_steps);

}  // namespace qcrl
