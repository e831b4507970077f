#include <algorithm>
#include <cmath>
#include <map>

#include "suploc/simulate.hpp"

namespace suploc {

double uniformity_band(const EmpiricalLaw &e, double eps) {
  if (!(eps > 0 && eps < 0.5)) throw ArgumentError("band fraction must lie in (0, 1/2)");
  const double lo = eps * e.T, hi = (1 - eps) * e.T;
  const double slack = 1e-12 * e.T;
  double stat = -1;
  for (std::size_t i = 0; i < e.n_bins(); ++i) {
    if (e.bin_edges[i] < lo - slack || e.bin_edges[i + 1] > hi + slack) continue;
    stat = std::max(stat, std::abs(e.T * e.density(i) - 1));
  }
  if (stat < 0) throw ArgumentError("no bin lies inside the band");
  return stat;
}

Rational uniformity_band(const SupLocationLaw &law, const Rational &eps) {
  if (!(eps > 0 && eps < Rational(1, 2))) throw ArgumentError("band fraction must lie in (0, 1/2)");
  const Rational lo = eps * law.T, hi = (1 - eps) * law.T;
  const StepDensity &f = law.interior;
  bool any = false;
  Rational stat;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.right(i) <= lo || f.left(i) >= hi) continue;
    Rational v = abs(Rational(law.T * f.value(i) - 1));
    if (!any || v > stat) stat = v;
    any = true;
  }
  if (!any) throw ArgumentError("band is empty");
  return stat;
}

ConditionalEstimate conditional_uniformity(const EmpiricalLaw &e, double a, double a2, double b2,
                                           double b) {
  if (!(0 <= a && a <= a2 && a2 < b2 && b2 <= b && b <= e.T))
    throw ArgumentError("need 0 <= a <= a' < b' <= b <= T");
  ConditionalEstimate c;
  c.target = (b2 - a2) / (b - a);
  std::size_t in = 0, hit = 0;
  for (double t : e.taus) {
    if (t > a && t < b) {
      ++in;
      if (t > a2 && t < b2) ++hit;
    }
  }
  c.n_condition = in;
  if (in == 0) return c;
  c.defined = true;
  const double n = static_cast<double>(in);
  const double p = static_cast<double>(hit) / n;
  const double z = 1.959963984540054;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  c.estimate = p;
  c.ci_low = std::max(0.0, centre - half);
  c.ci_high = std::min(1.0, centre + half);
  if (hit == in) c.ci_high = 1.0;
  if (hit == 0) c.ci_low = 0.0;
  return c;
}

Rational conditional_uniformity(const SupLocationLaw &law, const Rational &a, const Rational &a2,
                                const Rational &b2, const Rational &b) {
  if (!(0 <= a && a <= a2 && a2 < b2 && b2 <= b && b <= law.T))
    throw ArgumentError("need 0 <= a <= a' < b' <= b <= T");
  const Rational whole = law.interior.integral(a, b);
  if (whole == 0) throw ArgumentError("conditioning interval has zero mass");
  return law.interior.integral(a2, b2) / whole;
}

double atom_proxy(const std::vector<double> &sup_values) {
  if (sup_values.empty()) return 0;
  std::map<double, std::size_t> freq;
  std::size_t best = 0;
  for (double v : sup_values) best = std::max(best, ++freq[v]);
  return static_cast<double>(best) / static_cast<double>(sup_values.size());
}

double atom_proxy(const EmpiricalLaw &e) { return atom_proxy(e.sup_values); }

double ks_uniform(std::vector<double> samples) {
  if (samples.empty()) throw ArgumentError("no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = std::clamp(samples[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - x, x - static_cast<double>(i) / n});
  }
  return d;
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0, sign = 1;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

TwoSampleKS ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw ArgumentError("no samples");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double ne = nx * ny / (nx + ny);
  const double rt = std::sqrt(ne);
  return {d, kolmogorov_q((rt + 0.12 + 0.11 / rt) * d)};
}

}  // namespace suploc
