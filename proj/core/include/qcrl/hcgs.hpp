#pragma once

#include "qcrl/environment.hpp"

#include <functional>
#include <vector>

namespace qcrl {

/// Heaviside-corrected Gaussian square: amplitude omega0 on [0, t0], detuning
/// -delta0 before t1 and +delta0 after. Both pass through the environment's
/// smoothing and pinning. MHz and us.
struct HcgsParams {
  double omega0 = 0.0;
  double t0 = 0.0;
  double delta0 = 0.0;
  double t1 = 0.0;
};

/// Physical samples before smoothing; edge samples carry the fractional
/// overlap of their cell with the step, so the samples vary continuously.
std::vector<double> hcgs_amplitude_samples(double omega0, double t0, int n, double duration);
std::vector<double> hcgs_detuning_samples(double delta0, double t1, int n, double duration);

/// Waveforms for an environment whose first channel is an amplitude and
/// second a detuning (the transmon layout).
std::vector<Waveform> hcgs_waveforms(const Environment& env, const HcgsParams& p);
double hcgs_fidelity(const Environment& env, const HcgsParams& p, const SolverConfig& solver);

/// Minimises f over a box with cyclic coordinate descent; each coordinate
/// step is a golden-section search over a window that shrinks every sweep.
struct BoxSearchResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};
BoxSearchResult coordinate_descent(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> x0, const std::vector<double>& lo,
                                   const std::vector<double>& hi, int sweeps = 6, int golden_iters = 25);

struct HcgsSearchResult {
  HcgsParams params;
  double fidelity = 0.0;
  int evaluations = 0;
};

/// Maximises the environment fidelity over the four HCGS parameters. With
/// amplitude_only the detuning is held at zero and only (omega0, t0) vary,
/// which gives the calibrated smoothed square pulse.
HcgsSearchResult hcgs_search(const Environment& env, const SolverConfig& solver, bool amplitude_only);

struct HcgsFitResult {
  HcgsParams params;
  double amplitude_rmse = 0.0;  // MHz
  double detuning_rmse = 0.0;   // MHz
  bool detuning_degenerate = false;  // |delta0| negligible, t1 unconstrained
  double source_fidelity = 0.0;
  double fitted_fidelity = 0.0;
};

/// Least-squares fit of conditioned HCGS samples to the given waveforms
/// (amplitude first, detuning second). Throws FitError on an all-zero
/// amplitude.
HcgsFitResult fit_hcgs(const Environment& env, const std::vector<Waveform>& waveforms, const SolverConfig& solver);

}  // namespace qcrl
