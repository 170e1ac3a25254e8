#pragma once
// waveform.csv: '#' metadata lines carry the channel layout and the exact
// conditioned samples; the table holds the dense interpolated grid.

#include "qcrl/environment.hpp"
#include "qcrl/signals.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qcrl {

struct WaveformFile {
  double duration = 0.0;
  std::vector<Waveform> waveforms;  // conditioned samples, noise-free
  std::vector<std::string> scalar_names;
  std::vector<double> scalars;       // physical values
};

void write_waveform_csv(std::ostream& out, const std::vector<Waveform>& waveforms,
                        const std::vector<ScalarSpec>& scalar_specs, const std::vector<double>& scalars,
                        double grid_rate = 1000.0);
void save_waveform_csv(const std::string& path, const std::vector<Waveform>& waveforms,
                       const std::vector<ScalarSpec>& scalar_specs, const std::vector<double>& scalars,
                       double grid_rate = 1000.0);

/// Throws ConfigError on malformed input.
WaveformFile read_waveform_csv(std::istream& in);
WaveformFile load_waveform_csv(const std::string& path);

/// Rebuilds the file's waveforms with the environment's channel specs.
/// Throws StructuralError when names, sample counts or duration differ.
std::vector<Waveform> waveforms_for(const Environment& env, const WaveformFile& file);

}  // namespace qcrl
