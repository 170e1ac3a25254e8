#include "qcrl/config.hpp"

#include "qcrl/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace qcrl {

using nlohmann::json;

std::string to_string(EnvVariant v) {
  switch (v) {
    case EnvVariant::lambda:
      return "lambda";
    case EnvVariant::rydberg_one_photon:
      return "rydberg_one_photon";
    case EnvVariant::rydberg_two_photon:
      return "rydberg_two_photon";
    case EnvVariant::transmon:
      return "transmon";
  }
  return "unknown";
}

EnvVariant env_variant_from_string(const std::string& s) {
  for (EnvVariant v : {EnvVariant::lambda, EnvVariant::rydberg_one_photon, EnvVariant::rydberg_two_photon,
                       EnvVariant::transmon}) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError("unknown environment variant '" + s + "'");
}

RunConfig default_config(EnvVariant variant) {
  RunConfig c;
  c.env.variant = variant;
  switch (variant) {
    case EnvVariant::lambda:
      c.signal.smooth_sigma = 2.0;
      c.reward.w_excited = 0.5;
      c.solver.max_steps = 3000;
      break;
    case EnvVariant::rydberg_one_photon:
      c.env.rydberg.variant = RydbergVariant::one_photon;
      c.signal.smooth_sigma = 1.0;
      c.reward.w_excited = 0.1;
      c.solver.max_steps = 3000;
      break;
    case EnvVariant::rydberg_two_photon:
      c.env.rydberg.variant = RydbergVariant::two_photon;
      c.signal.smooth_sigma = 1.0;
      c.reward.w_excited = 0.1;
      // The 2.5 GHz pump detuning needs ~1.4e4 attempted steps at the default
      // tolerances.
      c.solver.max_steps = 16384;
      break;
    case EnvVariant::transmon:
      c.reward.w_omega = 0.01;
      c.reward.w_delta = 0.01;
      c.solver.max_steps = 900;
      break;
  }
  return c;
}

namespace {

// Reads known keys from one JSON object and rejects everything else.
class Block {
 public:
  Block(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError("'" + where_ + "' must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("'" + where_ + "." + key + "': " + e.what());
    }
  }

  template <class E, class F>
  void get_enum(const char* key, E& out, F from_string) {
    std::string s;
    bool present = j_.contains(key);
    get(key, s);
    if (present) out = from_string(s);
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + where_ + "." + item.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_env(const json& j, EnvConfig& e) {
  Block b(j, "env");
  std::string variant;
  b.get("variant", variant);
  switch (e.variant) {
    case EnvVariant::lambda: {
      LambdaSpec& s = e.lambda;
      b.get("gamma", s.gamma);
      b.get("omega_max", s.omega_max);
      b.get("delta_x", s.delta_x);
      b.get("delta_max", s.delta_max);
      b.get("duration", s.duration);
      b.get("n_samples", s.n_samples);
      b.get("target_angle", s.target_angle);
      break;
    }
    case EnvVariant::rydberg_one_photon:
    case EnvVariant::rydberg_two_photon: {
      RydbergSpec& s = e.rydberg;
      b.get("blockade", s.blockade);
      b.get("gamma_r", s.gamma_r);
      b.get("gamma_e", s.gamma_e);
      b.get("duration", s.duration);
      b.get("n_samples", s.n_samples);
      b.get("omega_max", s.omega_max);
      b.get("delta_max", s.delta_max);
      b.get("omega_s_max", s.omega_s_max);
      b.get("omega_eff_max", s.omega_eff_max);
      b.get("delta_s_max", s.delta_s_max);
      b.get("delta_p", s.delta_p);
      b.get("delta_p_range", s.delta_p_range);
      break;
    }
    case EnvVariant::transmon: {
      TransmonSpec& s = e.transmon;
      b.get("chi", s.chi);
      b.get("g", s.g);
      b.get("alpha", s.alpha);
      b.get("delta", s.delta);
      b.get("k", s.k);
      b.get("kappa", s.kappa);
      b.get("t1", s.t1);
      b.get("omega_max", s.omega_max);
      b.get("delta_max", s.delta_max);
      b.get("duration", s.duration);
      b.get("n_samples", s.n_samples);
      b.get("smoothing_ns", s.smoothing_ns);
      break;
    }
  }
  b.finish();
}

json write_env(const EnvConfig& e) {
  json j;
  j["variant"] = to_string(e.variant);
  switch (e.variant) {
    case EnvVariant::lambda: {
      const LambdaSpec& s = e.lambda;
      j["gamma"] = s.gamma;
      j["omega_max"] = s.omega_max;
      j["delta_x"] = s.delta_x;
      j["delta_max"] = s.delta_max;
      j["duration"] = s.duration;
      j["n_samples"] = s.n_samples;
      j["target_angle"] = s.target_angle;
      break;
    }
    case EnvVariant::rydberg_one_photon:
    case EnvVariant::rydberg_two_photon: {
      const RydbergSpec& s = e.rydberg;
      j["blockade"] = s.blockade;
      j["gamma_r"] = s.gamma_r;
      j["gamma_e"] = s.gamma_e;
      j["duration"] = s.duration;
      j["n_samples"] = s.n_samples;
      j["omega_max"] = s.omega_max;
      j["delta_max"] = s.delta_max;
      j["omega_s_max"] = s.omega_s_max;
      j["omega_eff_max"] = s.omega_eff_max;
      j["delta_s_max"] = s.delta_s_max;
      j["delta_p"] = s.delta_p;
      j["delta_p_range"] = s.delta_p_range;
      break;
    }
    case EnvVariant::transmon: {
      const TransmonSpec& s = e.transmon;
      j["chi"] = s.chi;
      j["g"] = s.g;
      j["alpha"] = s.alpha;
      j["delta"] = s.delta;
      j["k"] = s.k;
      j["kappa"] = s.kappa;
      j["t1"] = s.t1;
      j["omega_max"] = s.omega_max;
      j["delta_max"] = s.delta_max;
      j["duration"] = s.duration;
      j["n_samples"] = s.n_samples;
      j["smoothing_ns"] = s.smoothing_ns;
      break;
    }
  }
  return j;
}

void read_signal(const json& j, SignalSettings& s) {
  Block b(j, "signal");
  b.get("smooth_sigma", s.smooth_sigma);
  b.get_enum("smoothness", s.smoothness.kind, smoothness_kind_from_string);
  b.get("lowpass_order", s.smoothness.lowpass.order);
  b.get("lowpass_cutoff", s.smoothness.lowpass.cutoff);
  b.get("lowpass_zero_phase", s.smoothness.lowpass.zero_phase);
  b.get("lowpass_skip", s.smoothness.lowpass.skip);
  b.finish();
}

json write_signal(const SignalSettings& s) {
  return {{"smooth_sigma", s.smooth_sigma},
          {"smoothness", to_string(s.smoothness.kind)},
          {"lowpass_order", s.smoothness.lowpass.order},
          {"lowpass_cutoff", s.smoothness.lowpass.cutoff},
          {"lowpass_zero_phase", s.smoothness.lowpass.zero_phase},
          {"lowpass_skip", s.smoothness.lowpass.skip}};
}

void read_reward(const json& j, RewardWeights& w) {
  Block b(j, "reward");
  b.get("w_fidelity", w.w_fidelity);
  b.get("w_omega", w.w_omega);
  b.get("w_delta", w.w_delta);
  b.get("w_area", w.w_area);
  b.get("w_excited", w.w_excited);
  const bool has_penalty = b.has("r_penalty");
  b.get("r_penalty", w.r_penalty);
  if (!has_penalty) w.r_penalty = -20.0 * w.w_fidelity;
  b.get("fidelity_floor", w.fidelity_floor);
  b.finish();
}

json write_reward(const RewardWeights& w) {
  return {{"w_fidelity", w.w_fidelity}, {"w_omega", w.w_omega},     {"w_delta", w.w_delta},
          {"w_area", w.w_area},         {"w_excited", w.w_excited}, {"r_penalty", w.r_penalty},
          {"fidelity_floor", w.fidelity_floor}};
}

void read_solver(const json& j, SolverConfig& s) {
  Block b(j, "solver");
  b.get("rtol", s.rtol);
  b.get("atol", s.atol);
  b.get("max_steps", s.max_steps);
  b.get("min_step", s.min_step);
  b.finish();
}

json write_solver(const SolverConfig& s) {
  return {{"rtol", s.rtol}, {"atol", s.atol}, {"max_steps", s.max_steps}, {"min_step", s.min_step}};
}

void read_ppo(const json& j, PpoConfig& p) {
  Block b(j, "ppo");
  b.get("lr", p.lr);
  b.get("clip_eps", p.clip_eps);
  b.get("ent_coef", p.ent_coef);
  b.get("vf_coef", p.vf_coef);
  b.get("gamma", p.gamma);
  b.get("gae_lambda", p.gae_lambda);
  b.get("num_envs", p.num_envs);
  b.get("num_minibatches", p.num_minibatches);
  b.get("update_epochs", p.update_epochs);
  b.get("max_grad_norm", p.max_grad_norm);
  b.get("num_updates", p.num_updates);
  b.get("hidden", p.hidden);
  b.get("init_log_std", p.init_log_std);
  b.get("log_std_min", p.log_std_min);
  b.get("log_std_max", p.log_std_max);
  b.get("normalize_advantages", p.normalize_advantages);
  b.finish();
}

json write_ppo(const PpoConfig& p) {
  return {{"lr", p.lr},
          {"clip_eps", p.clip_eps},
          {"ent_coef", p.ent_coef},
          {"vf_coef", p.vf_coef},
          {"gamma", p.gamma},
          {"gae_lambda", p.gae_lambda},
          {"num_envs", p.num_envs},
          {"num_minibatches", p.num_minibatches},
          {"update_epochs", p.update_epochs},
          {"max_grad_norm", p.max_grad_norm},
          {"num_updates", p.num_updates},
          {"hidden", p.hidden},
          {"init_log_std", p.init_log_std},
          {"log_std_min", p.log_std_min},
          {"log_std_max", p.log_std_max},
          {"normalize_advantages", p.normalize_advantages}};
}

void read_noise(const json& j, NoiseConfig& n) {
  Block b(j, "noise");
  b.get("clamp_amplitude", n.clamp_amplitude);
  b.get("grid_rate", n.grid_rate);
  if (const json* ch = b.child("channels")) {
    if (!ch->is_object()) throw ConfigError("'noise.channels' must be an object");
    n.channels.clear();
    for (const auto& item : ch->items()) {
      ChannelNoise c;
      c.channel = item.key();
      Block cb(item.value(), "noise.channels." + item.key());
      cb.get("sigma", c.params.sigma);
      cb.get("mu", c.params.mu);
      cb.get("alpha", c.params.alpha);
      cb.finish();
      n.channels.push_back(c);
    }
  }
  b.finish();
}

json write_noise(const NoiseConfig& n) {
  json ch = json::object();
  for (const auto& c : n.channels) {
    ch[c.channel] = {{"sigma", c.params.sigma}, {"mu", c.params.mu}, {"alpha", c.params.alpha}};
  }
  return {{"clamp_amplitude", n.clamp_amplitude}, {"grid_rate", n.grid_rate}, {"channels", ch}};
}

void read_multistep(const json& j, MultistepConfig& m) {
  Block b(j, "multistep");
  b.get("sections", m.sections);
  b.get("mu_sigma", m.bias.mu_sigma);
  b.get("sigma", m.bias.sigma);
  b.get("alpha", m.bias.alpha);
  b.finish();
}

json write_multistep(const MultistepConfig& m) {
  return {{"sections", m.sections}, {"mu_sigma", m.bias.mu_sigma}, {"sigma", m.bias.sigma}, {"alpha", m.bias.alpha}};
}

}  // namespace

void RunConfig::validate() const {
  switch (env.variant) {
    case EnvVariant::lambda:
      env.lambda.validate();
      break;
    case EnvVariant::rydberg_one_photon:
    case EnvVariant::rydberg_two_photon:
      env.rydberg.validate();
      break;
    case EnvVariant::transmon:
      env.transmon.validate();
      break;
  }
  if (!(signal.smooth_sigma >= 0.0)) throw ConfigError("signal.smooth_sigma must be >= 0");
  if (signal.smoothness.lowpass.order < 1) throw ConfigError("signal.lowpass_order must be >= 1");
  if (!(signal.smoothness.lowpass.cutoff > 0.0) || !(signal.smoothness.lowpass.cutoff < 1.0)) {
    throw ConfigError("signal.lowpass_cutoff must lie strictly between 0 and 1 (fraction of Nyquist)");
  }
  if (signal.smoothness.lowpass.skip < 0) throw ConfigError("signal.lowpass_skip must be >= 0");
  reward.validate();
  SolverConfig s = solver;
  s.output_times.clear();
  s.validate();
  ppo.validate();
  noise.validate();
  multistep.bias.validate();
  if (multistep.sections < 1) throw ConfigError("multistep.sections must be >= 1");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (!(stop_fidelity >= 0.0) || stop_fidelity > 1.0) throw ConfigError("stop_fidelity must lie in [0, 1]");
  // Builds the environment and task once to check channel names and layout.
  const auto e = make_environment(*this);
  make_task(*e, *this);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  EnvVariant variant = EnvVariant::lambda;
  if (j.contains("env") && j["env"].is_object() && j["env"].contains("variant")) {
    if (!j["env"]["variant"].is_string()) throw ConfigError("env.variant must be a string");
    variant = env_variant_from_string(j["env"]["variant"].get<std::string>());
  }
  RunConfig c = default_config(variant);

  Block top(j, "config");
  if (const json* e = top.child("env")) read_env(*e, c.env);
  if (const json* s = top.child("signal")) read_signal(*s, c.signal);
  if (const json* r = top.child("reward")) read_reward(*r, c.reward);
  if (const json* s = top.child("solver")) read_solver(*s, c.solver);
  const json* ppo = top.child("ppo");
  if (const json* m = top.child("multistep")) read_multistep(*m, c.multistep);
  // The multi-step setting is myopic unless a discount is given explicitly.
  if (c.multistep.sections > 1) c.ppo.gamma = 0.0;
  if (ppo != nullptr) read_ppo(*ppo, c.ppo);
  if (const json* n = top.child("noise")) read_noise(*n, c.noise);
  top.get("output_dir", c.output_dir);
  top.get("seeds", c.seeds);
  top.get("stop_fidelity", c.stop_fidelity);
  top.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["env"] = write_env(c.env);
  j["signal"] = write_signal(c.signal);
  j["reward"] = write_reward(c.reward);
  j["solver"] = write_solver(c.solver);
  j["ppo"] = write_ppo(c.ppo);
  j["noise"] = write_noise(c.noise);
  j["multistep"] = write_multistep(c.multistep);
  j["output_dir"] = c.output_dir;
  j["seeds"] = c.seeds;
  j["stop_fidelity"] = c.stop_fidelity;
  return j.dump(2) + "\n";
}

std::unique_ptr<Environment> make_environment(const RunConfig& c) {
  switch (c.env.variant) {
    case EnvVariant::lambda:
      return std::make_unique<LambdaEnvironment>(c.env.lambda, c.signal);
    case EnvVariant::rydberg_one_photon: {
      RydbergSpec s = c.env.rydberg;
      s.variant = RydbergVariant::one_photon;
      return std::make_unique<RydbergEnvironment>(s, c.signal);
    }
    case EnvVariant::rydberg_two_photon: {
      RydbergSpec s = c.env.rydberg;
      s.variant = RydbergVariant::two_photon;
      return std::make_unique<RydbergEnvironment>(s, c.signal);
    }
    case EnvVariant::transmon:
      return std::make_unique<TransmonEnvironment>(c.env.transmon, c.signal);
  }
  throw ConfigError("unknown environment variant");
}

EpisodeTask make_task(const Environment& env, const RunConfig& c) {
  return EpisodeTask(env, c.multistep.sections, c.noise, c.multistep.bias);
}

}  // namespace qcrl
