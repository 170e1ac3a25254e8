#include "qcrl/waveform_io.hpp"

#include "qcrl/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qcrl {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("waveform csv: bad number '" + s + "' in " + what);
  }
}

}  // namespace

void write_waveform_csv(std::ostream& out, const std::vector<Waveform>& waveforms,
                        const std::vector<ScalarSpec>& scalar_specs, const std::vector<double>& scalars,
                        double grid_rate) {
  if (waveforms.empty()) throw StructuralError("write_waveform_csv: no waveforms");
  if (scalar_specs.size() != scalars.size()) throw StructuralError("write_waveform_csv: scalar count mismatch");
  const double duration = waveforms.front().duration();
  out << std::setprecision(17);
  out << "# duration_us," << duration << "\n";
  for (const auto& w : waveforms) {
    const ChannelSpec& s = w.spec();
    out << "# channel," << s.name << "," << to_string(s.kind) << "," << s.max_value << "," << s.n_samples << ","
        << to_string(s.interpolation) << "\n";
  }
  for (const auto& w : waveforms) {
    out << "# samples," << w.spec().name;
    for (double v : w.samples()) out << "," << v;
    out << "\n";
  }
  for (std::size_t i = 0; i < scalars.size(); ++i) out << "# scalar," << scalar_specs[i].name << "," << scalars[i] << "\n";

  out << "t_us";
  for (const auto& w : waveforms) out << "," << w.spec().name;
  out << "\n" << std::setprecision(9);
  const int n = dense_grid_size(duration, grid_rate);
  for (int k = 0; k < n; ++k) {
    const double t = k == n - 1 ? duration : duration * k / (n - 1);
    out << t;
    for (const auto& w : waveforms) out << "," << w(t);
    out << "\n";
  }
}

void save_waveform_csv(const std::string& path, const std::vector<Waveform>& waveforms,
                       const std::vector<ScalarSpec>& scalar_specs, const std::vector<double>& scalars,
                       double grid_rate) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_waveform_csv(out, waveforms, scalar_specs, scalars, grid_rate);
}

WaveformFile read_waveform_csv(std::istream& in) {
  WaveformFile file;
  std::vector<ChannelSpec> specs;
  std::vector<std::vector<double>> samples;
  std::vector<bool> have_samples;
  bool have_duration = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# ", 0) != 0) continue;
    const auto f = split(line.substr(2), ',');
    if (f.empty()) continue;
    if (f[0] == "duration_us" && f.size() == 2) {
      file.duration = to_double(f[1], "duration");
      have_duration = true;
    } else if (f[0] == "channel" && f.size() == 6) {
      ChannelSpec s;
      s.name = f[1];
      s.kind = channel_kind_from_string(f[2]);
      s.max_value = to_double(f[3], "channel " + s.name);
      s.n_samples = static_cast<int>(to_double(f[4], "channel " + s.name));
      s.interpolation = interp_kind_from_string(f[5]);
      s.pin_endpoints_zero = s.kind == ChannelKind::amplitude;
      s.smooth_sigma = 0.0;
      specs.push_back(s);
      samples.emplace_back();
      have_samples.push_back(false);
    } else if (f[0] == "samples" && f.size() >= 2) {
      std::size_t c = 0;
      while (c < specs.size() && specs[c].name != f[1]) ++c;
      if (c == specs.size()) throw ConfigError("waveform csv: samples for undeclared channel '" + f[1] + "'");
      for (std::size_t i = 2; i < f.size(); ++i) samples[c].push_back(to_double(f[i], "samples of " + f[1]));
      have_samples[c] = true;
    } else if (f[0] == "scalar" && f.size() == 3) {
      file.scalar_names.push_back(f[1]);
      file.scalars.push_back(to_double(f[2], "scalar " + f[1]));
    }
  }
  if (!have_duration || !(file.duration > 0.0)) throw ConfigError("waveform csv: missing or invalid duration");
  if (specs.empty()) throw ConfigError("waveform csv: no channels");
  for (std::size_t c = 0; c < specs.size(); ++c) {
    if (!have_samples[c]) throw ConfigError("waveform csv: channel '" + specs[c].name + "' has no samples");
    if (static_cast<int>(samples[c].size()) != specs[c].n_samples) {
      throw ConfigError("waveform csv: channel '" + specs[c].name + "' sample count mismatch");
    }
    specs[c].validate();
    file.waveforms.emplace_back(specs[c], std::move(samples[c]), file.duration);
  }
  return file;
}

WaveformFile load_waveform_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open waveform file '" + path + "'");
  return read_waveform_csv(in);
}

std::vector<Waveform> waveforms_for(const Environment& env, const WaveformFile& file) {
  if (std::abs(file.duration - env.duration()) > 1e-12 * env.duration()) {
    throw StructuralError("waveform duration does not match the environment");
  }
  const auto& channels = env.channels();
  if (file.waveforms.size() != channels.size()) {
    throw StructuralError("waveform file has " + std::to_string(file.waveforms.size()) + " channels, environment " +
                          env.name() + " expects " + std::to_string(channels.size()));
  }
  std::vector<Waveform> out;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const Waveform& w = file.waveforms[c];
    if (w.spec().name != channels[c].name || w.spec().n_samples != channels[c].n_samples) {
      throw StructuralError("waveform channel '" + w.spec().name + "' does not match environment channel '" +
                            channels[c].name + "'");
    }
    out.emplace_back(channels[c], w.samples(), env.duration());
  }
  return out;
}

}  // namespace qcrl
