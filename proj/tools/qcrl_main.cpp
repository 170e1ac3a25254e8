#include "qcrl/commands.hpp"
#include "qcrl/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw qcrl::ConfigError("bad seed '" + item + "'");
    }
  }
  if (out.empty()) throw qcrl::ConfigError("--seeds needs at least one value");
  return out;
}

std::vector<double> parse_values(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw qcrl::ConfigError("bad value '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcrl: reinforcement learning of quantum control pulses"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string seeds;
  std::string axis;
  std::string values;
  std::string waveform;
  int trials = 10;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "run config (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory (overrides the config)");
    cmd->add_option("--seeds", seeds, "comma-separated seeds (overrides the config)");
  };

  auto* train = app.add_subcommand("train", "train a policy once per seed");
  add_common(train, true);

  auto* sweep = app.add_subcommand("sweep", "train over a list of values of one setting");
  add_common(sweep, true);
  sweep->add_option("--axis", axis, "max_steps | area_weight | smoothing | noise_sigma")->required();
  sweep->add_option("--values", values, "comma-separated axis values")->required();

  auto* eval = app.add_subcommand("eval", "replay a saved waveform under sampled noise");
  add_common(eval, true);
  eval->add_option("--waveform", waveform, "waveform.csv")->required();
  eval->add_option("--trials", trials, "number of noise draws");

  auto* fit = app.add_subcommand("fit-hcgs", "fit a Heaviside-corrected Gaussian square to a waveform");
  add_common(fit, true);
  fit->add_option("--waveform", waveform, "waveform.csv")->required();

  auto* analyze = app.add_subcommand("analyze", "signal metrics of a saved waveform");
  add_common(analyze, false);
  analyze->add_option("--waveform", waveform, "waveform.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    qcrl::RunConfig config;
    if (!config_path.empty()) config = qcrl::load_config(config_path);
    if (!seeds.empty()) config.seeds = parse_seeds(seeds);
    if (!out_dir.empty()) config.output_dir = out_dir;
    const std::string out = config.output_dir;

    if (train->parsed()) {
      const auto s = qcrl::cmd_train(config, out, &std::cerr);
      std::cout << "best fidelity mean " << s.mean_best_fidelity << " sd " << s.sd_best_fidelity << " over "
                << s.seeds.size() << " seed(s); artifacts in " << out << "\n";
    } else if (sweep->parsed()) {
      const auto rows =
          qcrl::cmd_sweep(config, qcrl::sweep_axis_from_string(axis), parse_values(values), out, &std::cerr);
      std::cout << rows.size() << " sweep cells written to " << out << "/sweep.csv\n";
    } else if (eval->parsed()) {
      const auto s = qcrl::cmd_eval(config, waveform, trials, out);
      std::cout << "noiseless F " << s.noiseless_fidelity << ", mean F " << s.mean_fidelity << " sd "
                << s.sd_fidelity << " over " << trials << " trial(s)\n";
    } else if (fit->parsed()) {
      const auto f = qcrl::cmd_fit_hcgs(config, waveform, out);
      std::cout << "omega0 " << f.params.omega0 << " t0 " << f.params.t0 << " delta0 " << f.params.delta0 << " t1 "
                << f.params.t1 << "; source F " << f.source_fidelity << ", fitted F " << f.fitted_fidelity << "\n";
    } else if (analyze->parsed()) {
      const auto a = qcrl::cmd_analyze(waveform, out, config.signal.smoothness.lowpass);
      std::cout << a.channels.size() << " channel(s) analysed; " << out << "/analysis.json\n";
    }
  } catch (const qcrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const qcrl::StructuralError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}
