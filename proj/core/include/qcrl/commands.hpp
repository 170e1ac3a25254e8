#pragma once
// The work behind each CLI subcommand. Every command writes its artifacts
// into out_dir (created if needed) and returns a summary for callers/tests.

#include "qcrl/config.hpp"
#include "qcrl/hcgs.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qcrl {

struct SeedSummary {
  std::uint64_t seed = 0;
  int updates = 0;
  double best_fidelity = 0.0;      // best mean-batch fidelity
  double best_max_fidelity = 0.0;  // best single episode
  double waveform_fidelity = 0.0;  // noise-free replay of the saved waveform
  double mean_steps = 0.0;
  double wall_ms = 0.0;
  std::vector<double> best_action;
};

struct TrainSummary {
  std::vector<SeedSummary> seeds;
  double mean_best_fidelity = 0.0;
  double sd_best_fidelity = 0.0;  // sample standard deviation, 0 for one seed
  std::size_t best_seed_index = 0;
};

/// Trains once per seed. Writes metrics.jsonl (one line per update, tagged
/// with the seed), best_waveform.csv (best seed), report.json and config.json.
TrainSummary cmd_train(const RunConfig& config, const std::string& out_dir, std::ostream* log = nullptr);

enum class SweepAxis { max_steps, area_weight, smoothing, noise_sigma };
std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

/// The config with one axis value applied. noise_sigma sets the OU sigma
/// (MHz) of every channel.
RunConfig apply_axis(const RunConfig& config, SweepAxis axis, double value);

struct SweepRow {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double best_fidelity = 0.0;
  double min_infidelity = 0.0;  // 1 - best single-episode fidelity
  double mean_steps = 0.0;
  double wall_ms = 0.0;
};

inline constexpr const char* kSweepHeader = "axis_value,seed,best_fidelity,min_infidelity,mean_steps,wall_ms";

/// One training per (value, seed); writes sweep.csv. Throws ConfigError for
/// an empty value list.
std::vector<SweepRow> cmd_sweep(const RunConfig& config, SweepAxis axis, const std::vector<double>& values,
                                const std::string& out_dir, std::ostream* log = nullptr);

struct EvalSummary {
  double noiseless_fidelity = 0.0;
  double mean_fidelity = 0.0;
  double sd_fidelity = 0.0;
  std::vector<double> fidelities;
  int failed_trials = 0;  // solver did not finish
};

/// Replays a saved waveform under n_trials noise draws from the config's
/// noise and bias settings (seeded by the first config seed); writes eval.json.
EvalSummary cmd_eval(const RunConfig& config, const std::string& waveform_path, int n_trials,
                     const std::string& out_dir);

/// Fits HCGS parameters to a saved waveform; writes hcgs_fit.json and
/// hcgs_waveform.csv.
HcgsFitResult cmd_fit_hcgs(const RunConfig& config, const std::string& waveform_path, const std::string& out_dir);

struct ChannelAnalysis {
  std::string name;
  std::string kind;
  double smoothness_lowpass = 0.0;
  double smoothness_sder = 0.0;
  double area = 0.0;
};

struct InstantaneousAnalysis {
  std::string amplitude;
  std::string detuning;  // empty when the file has no detuning channel
  InstantaneousStats stats;
};

struct AnalysisSummary {
  std::vector<ChannelAnalysis> channels;
  std::vector<InstantaneousAnalysis> instantaneous;  // one per amplitude channel
};

/// Signal metrics of a saved waveform (no simulation); writes analysis.json.
AnalysisSummary analyze_waveforms(const std::vector<Waveform>& waveforms, const LowpassParams& lowpass = {});
AnalysisSummary cmd_analyze(const std::string& waveform_path, const std::string& out_dir,
                            const LowpassParams& lowpass = {});

}  // namespace qcrl
