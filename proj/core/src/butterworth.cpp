#include "qcrl/butterworth.hpp"

#include "qcrl/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace qcrl {

namespace {

std::vector<double> convolve(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

}  // namespace

ButterworthLowpass::ButterworthLowpass(int order, double cutoff) : order_(order), cutoff_(cutoff) {
  if (order < 1) throw ConfigError("Butterworth order must be >= 1");
  if (!(cutoff > 0.0) || !(cutoff < 1.0)) {
    throw ConfigError("Butterworth cutoff must lie strictly between 0 and the Nyquist frequency");
  }
  using std::numbers::pi;
  // Pre-warped analog cutoff for a sample period of 1 and s = 2 (z-1)/(z+1).
  const double wc = 2.0 * std::tan(pi * cutoff / 2.0);

  // Analog poles in the left half plane; take one of each conjugate pair.
  for (int k = 0; k < order / 2; ++k) {
    const double theta = pi * (2.0 * k + 1.0 + order) / (2.0 * order);
    const std::complex<double> p = wc * std::polar(1.0, theta);
    // H(s) = |p|^2 / (s^2 - 2 Re(p) s + |p|^2), bilinear with s = 2 (z-1)/(z+1).
    const double w2 = std::norm(p);
    const double re = p.real();
    const double a0 = 4.0 - 4.0 * re + w2;
    Biquad bq;
    bq.b0 = w2 / a0;
    bq.b1 = 2.0 * w2 / a0;
    bq.b2 = w2 / a0;
    bq.a1 = (2.0 * w2 - 8.0) / a0;
    bq.a2 = (4.0 + 4.0 * re + w2) / a0;
    sections_.push_back(bq);
  }
  if (order % 2 == 1) {
    // Real pole at -wc: H(s) = wc / (s + wc).
    const double a0 = 2.0 + wc;
    Biquad bq;
    bq.b0 = wc / a0;
    bq.b1 = wc / a0;
    bq.b2 = 0.0;
    bq.a1 = (wc - 2.0) / a0;
    bq.a2 = 0.0;
    sections_.push_back(bq);
  }
}

std::vector<double> ButterworthLowpass::filter(std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  for (const auto& s : sections_) {
    const double x0 = y.front();
    // Steady state for a constant input x0 (unity DC gain).
    double z2 = (s.b2 - s.a2) * x0;
    double z1 = (s.b1 - s.a1) * x0 + z2;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> ButterworthLowpass::filter_zero_phase(std::span<const double> x) const {
  std::vector<double> forward = filter(x);
  std::vector<double> reversed(forward.rbegin(), forward.rend());
  std::vector<double> back = filter(reversed);
  return {back.rbegin(), back.rend()};
}

void ButterworthLowpass::transfer_function(std::vector<double>& b, std::vector<double>& a) const {
  b = {1.0};
  a = {1.0};
  for (const auto& s : sections_) {
    b = convolve(b, {s.b0, s.b1, s.b2});
    a = convolve(a, {1.0, s.a1, s.a2});
  }
  // Odd orders carry a trailing zero coefficient from the first-order section.
  const auto len = static_cast<std::size_t>(order_) + 1;
  b.resize(len);
  a.resize(len);
}

}  // namespace qcrl
