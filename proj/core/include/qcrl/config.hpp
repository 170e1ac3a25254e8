#pragma once

#include "qcrl/environment.hpp"
#include "qcrl/lambda_system.hpp"
#include "qcrl/multistep.hpp"
#include "qcrl/noise.hpp"
#include "qcrl/ppo.hpp"
#include "qcrl/reward.hpp"
#include "qcrl/rydberg.hpp"
#include "qcrl/solver.hpp"
#include "qcrl/transmon.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qcrl {

enum class EnvVariant { lambda, rydberg_one_photon, rydberg_two_photon, transmon };

std::string to_string(EnvVariant v);
EnvVariant env_variant_from_string(const std::string& s);

struct EnvConfig {
  EnvVariant variant = EnvVariant::lambda;
  LambdaSpec lambda;
  RydbergSpec rydberg;
  TransmonSpec transmon;
};

struct MultistepConfig {
  int sections = 1;
  BiasNoise bias;
};

/// Complete description of an experiment. All physical values in MHz and us.
struct RunConfig {
  EnvConfig env;
  SignalSettings signal;
  RewardWeights reward;
  SolverConfig solver;
  PpoConfig ppo;
  NoiseConfig noise;
  MultistepConfig multistep;
  std::string output_dir = "qcrl_out";
  std::vector<std::uint64_t> seeds{0};
  double stop_fidelity = 0.0;

  /// Throws ConfigError on any invalid value.
  void validate() const;
};

/// Environment-specific defaults (reward weights, step budget, smoothing).
RunConfig default_config(EnvVariant variant);

/// Parses JSON text. Missing keys take the variant defaults; unknown keys
/// are rejected with ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

std::unique_ptr<Environment> make_environment(const RunConfig& config);
EpisodeTask make_task(const Environment& env, const RunConfig& config);

}  // namespace qcrl
