#include "qcrl/hcgs.hpp"

#include "qcrl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qcrl {

namespace {

void check_layout(const Environment& env) {
  const auto& ch = env.channels();
  if (ch.size() < 2 || ch[0].kind != ChannelKind::amplitude || ch[1].kind != ChannelKind::detuning ||
      !env.scalars().empty()) {
    throw ConfigError("HCGS needs an environment with one amplitude and one detuning channel");
  }
}

// Fraction of the cell [t - dt/2, t + dt/2] lying after `edge`.
double after_fraction(double t, double dt, double edge) { return std::clamp((t + 0.5 * dt - edge) / dt, 0.0, 1.0); }

constexpr double kInvPhi = 0.6180339887498949;

}  // namespace

std::vector<double> hcgs_amplitude_samples(double omega0, double t0, int n, double duration) {
  std::vector<double> s(n);
  const double dt = duration / (n - 1);
  for (int i = 0; i < n; ++i) s[i] = omega0 * (1.0 - after_fraction(i * dt, dt, t0));
  return s;
}

std::vector<double> hcgs_detuning_samples(double delta0, double t1, int n, double duration) {
  std::vector<double> s(n);
  const double dt = duration / (n - 1);
  for (int i = 0; i < n; ++i) s[i] = delta0 * (2.0 * after_fraction(i * dt, dt, t1) - 1.0);
  return s;
}

std::vector<Waveform> hcgs_waveforms(const Environment& env, const HcgsParams& p) {
  check_layout(env);
  const auto& ch = env.channels();
  const double T = env.duration();
  std::vector<Waveform> w;
  w.push_back(interpolate(condition_samples(hcgs_amplitude_samples(p.omega0, p.t0, ch[0].n_samples, T), ch[0]),
                          ch[0], T));
  w.push_back(interpolate(condition_samples(hcgs_detuning_samples(p.delta0, p.t1, ch[1].n_samples, T), ch[1]),
                          ch[1], T));
  for (std::size_t c = 2; c < ch.size(); ++c) {
    w.push_back(interpolate(std::vector<double>(ch[c].n_samples, 0.0), ch[c], T));
  }
  return w;
}

double hcgs_fidelity(const Environment& env, const HcgsParams& p, const SolverConfig& solver) {
  const EpisodeResult r = env.evaluate_waveforms(hcgs_waveforms(env, p), {}, solver);
  return r.status == SolveStatus::ok ? r.fidelity : 0.0;
}

BoxSearchResult coordinate_descent(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> x0, const std::vector<double>& lo,
                                   const std::vector<double>& hi, int sweeps, int golden_iters) {
  BoxSearchResult res;
  res.x = std::move(x0);
  for (std::size_t d = 0; d < res.x.size(); ++d) res.x[d] = std::clamp(res.x[d], lo[d], hi[d]);
  res.value = f(res.x);
  ++res.evaluations;
  double window = 0.5;  // fraction of the box width searched around the current point
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t d = 0; d < res.x.size(); ++d) {
      const double width = (hi[d] - lo[d]) * window;
      if (width <= 0.0) continue;
      double a = std::max(lo[d], res.x[d] - width);
      double b = std::min(hi[d], res.x[d] + width);
      std::vector<double> x = res.x;
      auto eval = [&](double v) {
        x[d] = v;
        ++res.evaluations;
        return f(x);
      };
      double c = b - kInvPhi * (b - a);
      double e = a + kInvPhi * (b - a);
      double fc = eval(c), fe = eval(e);
      for (int it = 0; it < golden_iters; ++it) {
        if (fc < fe) {
          b = e;
          e = c;
          fe = fc;
          c = b - kInvPhi * (b - a);
          fc = eval(c);
        } else {
          a = c;
          c = e;
          fc = fe;
          e = a + kInvPhi * (b - a);
          fe = eval(e);
        }
      }
      const double best = fc < fe ? c : e;
      const double fbest = std::min(fc, fe);
      if (fbest < res.value) {
        res.value = fbest;
        res.x[d] = best;
      }
    }
    window *= 0.5;
  }
  return res;
}

HcgsSearchResult hcgs_search(const Environment& env, const SolverConfig& solver, bool amplitude_only) {
  check_layout(env);
  const auto& ch = env.channels();
  const double T = env.duration();
  const double omega_max = ch[0].max_value;
  const double delta_max = ch[1].max_value;
  HcgsSearchResult out;

  auto objective = [&](const HcgsParams& p) {
    return std::log(std::max(1.0 - hcgs_fidelity(env, p, solver), 1e-12));
  };

  // Coarse start over the pulse length, then local refinement.
  double best_value = 1e300;
  HcgsParams start{omega_max, 0.5 * T, 0.0, 0.5 * T};
  for (int k = 1; k <= 9; ++k) {
    HcgsParams p{omega_max, T * k / 10.0, 0.0, T * k / 10.0};
    const double v = objective(p);
    ++out.evaluations;
    if (v < best_value) {
      best_value = v;
      start = p;
    }
  }

  if (amplitude_only) {
    auto f = [&](const std::vector<double>& x) { return objective({x[0], x[1], 0.0, 0.0}); };
    const BoxSearchResult r = coordinate_descent(f, {start.omega0, start.t0}, {0.05 * omega_max, 0.02 * T},
                                                 {omega_max, T});
    out.params = {r.x[0], r.x[1], 0.0, 0.0};
    out.evaluations += r.evaluations;
  } else {
    auto f = [&](const std::vector<double>& x) { return objective({x[0], x[1], x[2], x[3]}); };
    // Amplitude first, then detuning step magnitude and position.
    const BoxSearchResult a = coordinate_descent(
        [&](const std::vector<double>& x) { return objective({x[0], x[1], 0.0, 0.0}); }, {start.omega0, start.t0},
        {0.05 * omega_max, 0.02 * T}, {omega_max, T});
    std::vector<double> x0{a.x[0], a.x[1], 0.0, a.x[1]};
    double best = a.value;
    // Scan the step position and sign of the correction to seed the 4-d search.
    for (double frac : {0.7, 0.85, 1.0}) {
      for (double sgn : {-1.0, 1.0}) {
        std::vector<double> x{a.x[0], a.x[1], sgn * 0.5 * delta_max, frac * a.x[1]};
        const double v = f(x);
        ++out.evaluations;
        if (v < best) {
          best = v;
          x0 = x;
        }
      }
    }
    const BoxSearchResult r = coordinate_descent(f, x0, {0.05 * omega_max, 0.02 * T, -delta_max, 0.0},
                                                 {omega_max, T, delta_max, T}, 8);
    out.params = {r.x[0], r.x[1], r.x[2], r.x[3]};
    out.evaluations += a.evaluations + r.evaluations;
  }
  out.fidelity = hcgs_fidelity(env, out.params, solver);
  return out;
}

HcgsFitResult fit_hcgs(const Environment& env, const std::vector<Waveform>& waveforms, const SolverConfig& solver) {
  check_layout(env);
  if (waveforms.size() < 2) throw StructuralError("HCGS fit needs amplitude and detuning waveforms");
  const auto& ch = env.channels();
  const double T = env.duration();
  const std::vector<double>& amp = waveforms[0].samples();
  const std::vector<double>& det = waveforms[1].samples();
  const double amp_peak = *std::max_element(amp.begin(), amp.end());
  if (!(amp_peak > 0.0)) throw FitError("amplitude waveform is identically zero");

  HcgsFitResult res;
  auto amp_model = [&](double o, double t) {
    return condition_samples(hcgs_amplitude_samples(o, t, ch[0].n_samples, T), ch[0]);
  };
  auto det_model = [&](double d, double t) {
    return condition_samples(hcgs_detuning_samples(d, t, ch[1].n_samples, T), ch[1]);
  };

  // Both models are linear in their magnitude, so for a given step time the
  // best magnitude is a projection. Scan the step time finely, then refine.
  auto profile = [](const std::vector<double>& unit, const std::vector<double>& target, double& scale) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < unit.size(); ++i) {
      num += unit[i] * target[i];
      den += unit[i] * unit[i];
    }
    scale = den > 0.0 ? num / den : 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < unit.size(); ++i) s += (scale * unit[i] - target[i]) * (scale * unit[i] - target[i]);
    return s;
  };
  auto fit_step = [&](const std::function<std::vector<double>(double)>& unit_model, const std::vector<double>& target,
                      double& best_t, double& best_scale) {
    const int grid = 8 * static_cast<int>(target.size());
    double best = 1e300;
    for (int k = 0; k <= grid; ++k) {
      const double t = T * k / grid;
      double scale = 0.0;
      const double v = profile(unit_model(t), target, scale);
      if (v < best) {
        best = v;
        best_t = t;
        best_scale = scale;
      }
    }
    const BoxSearchResult r = coordinate_descent(
        [&](const std::vector<double>& x) {
          double scale = 0.0;
          return profile(unit_model(x[0]), target, scale);
        },
        {best_t}, {std::max(0.0, best_t - T / grid)}, {std::min(T, best_t + T / grid)}, 1, 40);
    best_t = r.x[0];
    return profile(unit_model(best_t), target, best_scale);
  };

  double amp_sse = fit_step([&](double t) { return amp_model(1.0, t); }, amp, res.params.t0, res.params.omega0);
  res.amplitude_rmse = std::sqrt(amp_sse / amp.size());
  double det_sse = fit_step([&](double t) { return det_model(1.0, t); }, det, res.params.t1, res.params.delta0);
  res.detuning_rmse = std::sqrt(det_sse / det.size());
  res.detuning_degenerate = std::abs(res.params.delta0) < 0.01 * ch[1].max_value;

  const EpisodeResult src = env.evaluate_waveforms(waveforms, {}, solver);
  res.source_fidelity = src.status == SolveStatus::ok ? src.fidelity : 0.0;
  res.fitted_fidelity = hcgs_fidelity(env, res.params, solver);
  return res;
}

}  // namespace qcrl
