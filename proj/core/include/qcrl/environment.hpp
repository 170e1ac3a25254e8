#pragma once

#include "qcrl/lindblad_generator.hpp"
#include "qcrl/noise.hpp"
#include "qcrl/quantum.hpp"
#include "qcrl/signals.hpp"
#include "qcrl/solver.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qcrl {

/// A learnable constant appended after the waveform samples in the action
/// vector: physical = center + raw * half_range.
struct ScalarSpec {
  std::string name;
  double center = 0.0;
  double half_range = 0.0;
};

/// Time-independent parts of the master equation for one episode.
struct SystemModel {
  OperatorMatrix drift;
  std::vector<OperatorMatrix> controls;
  std::vector<CollapseChannel> collapse;
};

struct EpisodeResult {
  SolveStatus status = SolveStatus::ok;
  int steps_taken = 0;
  double fidelity = 0.0;          // 0 when the solve did not complete
  double mean_excited = 0.0;      // time average over the sample grid
  std::vector<double> smoothness;  // per channel, conditioned samples
  std::vector<double> areas;       // per channel, trapezoid of samples
  std::vector<double> scalars;     // physical scalar values
};

/// Common settings of the signal pipeline.
struct SignalSettings {
  double smooth_sigma = 2.0;  // sample units; overrides every channel
  SmoothnessFunctional smoothness;
};

/// One physical control problem: channel layout, master equation and target.
/// Instances are immutable after construction and safe to share across
/// threads; evaluate() builds its own generator.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual int default_max_steps() const = 0;

  double duration() const { return duration_; }
  const std::vector<ChannelSpec>& channels() const { return channels_; }
  const std::vector<ScalarSpec>& scalars() const { return scalars_; }
  const SmoothnessFunctional& smoothness() const { return smoothness_; }
  int action_dim() const;
  /// Number of points of the output grid used for mean excited populations.
  int output_points() const;

  /// Decodes the raw action into waveforms (rescale, smooth, pin, interpolate).
  std::vector<Waveform> decode(std::span<const double> raw) const;
  std::vector<double> decode_scalars(std::span<const double> raw) const;

  virtual SystemModel model(std::span<const double> scalars) const = 0;
  /// Control coefficients c_j(t) from the channel values at time t.
  virtual void coefficients(std::span<const double> channel_values, std::span<const double> scalars,
                            std::span<double> out) const = 0;
  virtual DensityMatrix initial_state() const = 0;
  virtual double fidelity(const DensityMatrix& rho) const = 0;
  virtual double excited_population(const DensityMatrix&) const { return 0.0; }
  /// Penalty-free amplitude scale for the area baseline (MHz).
  virtual double area_reference() const;

  /// Dense H(t) for given channel values.
  OperatorMatrix hamiltonian(std::span<const double> channel_values, std::span<const double> scalars) const;

  /// Right-hand side closure owning its own generator.
  RhsFunction make_rhs(std::vector<Waveform> waveforms, std::vector<double> scalars) const;

  /// Solver settings for this environment: span [0, T] and the sample grid
  /// as output times. Tolerances and budget are taken from `base`.
  SolverConfig solver_config(const SolverConfig& base) const;

  EpisodeResult evaluate(std::span<const double> raw, const EpisodeNoise* noise,
                         const SolverConfig& solver) const;
  EpisodeResult evaluate_waveforms(std::vector<Waveform> waveforms, std::vector<double> scalars,
                                   const SolverConfig& solver) const;

  /// Smoothness of the Blackman window scaled to the channel maximum.
  double smoothness_baseline(const ChannelSpec& spec) const;

 protected:
  Environment(double duration, std::vector<ChannelSpec> channels, std::vector<ScalarSpec> scalars,
              SmoothnessFunctional smoothness);

 private:
  double duration_;
  std::vector<ChannelSpec> channels_;
  std::vector<ScalarSpec> scalars_;
  SmoothnessFunctional smoothness_;
};

/// Waveforms with the episode noise added (channels without a path unchanged).
std::vector<Waveform> with_noise(const std::vector<Waveform>& waveforms, const EpisodeNoise& noise);

}  // namespace qcrl
