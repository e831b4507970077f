#include "suploc/density.hpp"

#include <algorithm>

#include "suploc/law.hpp"

namespace suploc {

StepDensity::StepDensity(std::vector<Rational> breakpoints,
                         std::vector<Rational> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1)
    throw StructuralError("step density needs k >= 1 values and k+1 breakpoints");
  if (breakpoints_.front() != 0)
    throw StructuralError("first breakpoint must be 0");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] < breakpoints_[i + 1]))
      throw StructuralError("breakpoints must be strictly increasing");
  for (const auto &v : values_)
    if (v < 0) throw StructuralError("density values must be nonnegative");
}

StepDensity StepDensity::constant(const Rational &T, const Rational &value) {
  return StepDensity({Rational(0), T}, {value});
}

StepDensity StepDensity::from_pieces(
    const Rational &T, std::span<const std::pair<Rational, Rational>> pieces) {
  std::vector<Rational> bps{Rational(0)};
  std::vector<Rational> vals;
  for (const auto &[until, value] : pieces) {
    bps.push_back(until);
    vals.push_back(value);
  }
  if (pieces.empty() || bps.back() != T)
    throw StructuralError("pieces must end at T");
  return StepDensity(std::move(bps), std::move(vals));
}

const Rational &StepDensity::operator()(const Rational &t) const {
  // First breakpoint strictly greater than t closes the piece containing t.
  auto it = std::upper_bound(breakpoints_.begin() + 1, breakpoints_.end() - 1, t);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

Rational StepDensity::integral() const {
  Rational acc = 0;
  for (std::size_t i = 0; i < size(); ++i) acc += values_[i] * (right(i) - left(i));
  return acc;
}

Rational StepDensity::integral(const Rational &a, const Rational &b) const {
  Rational acc = 0;
  if (!(a < b)) return acc;
  for (std::size_t i = 0; i < size(); ++i) {
    Rational lo = rmax(a, left(i));
    Rational hi = rmin(b, right(i));
    if (lo < hi) acc += values_[i] * (hi - lo);
  }
  return acc;
}

Rational StepDensity::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

Rational StepDensity::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

StepDensity StepDensity::canonical() const {
  std::vector<Rational> bps{breakpoints_.front()};
  std::vector<Rational> vals{values_.front()};
  for (std::size_t i = 1; i < size(); ++i) {
    if (values_[i] == vals.back()) continue;
    bps.push_back(breakpoints_[i]);
    vals.push_back(values_[i]);
  }
  bps.push_back(T());
  return StepDensity(std::move(bps), std::move(vals));
}

bool same_function(const StepDensity &a, const StepDensity &b) {
  return a.canonical() == b.canonical();
}

Rational total_variation(const StepDensity &f) {
  Rational tv = 0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) tv += abs(f.value(i + 1) - f.value(i));
  return tv;
}

bool check_universal_bound(const StepDensity &f) {
  const Rational &T = f.T();
  const Rational half = T / 2;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Rational c = std::clamp(half, f.left(i), f.right(i));
    Rational envelope = rmax(1 / c, 1 / (T - c));
    if (f.value(i) > envelope) return false;
  }
  return true;
}

DensityReport validate_density(const StepDensity &f) {
  DensityReport r;
  r.tv = total_variation(f);
  r.f0plus = f.front();
  r.fTminus = f.back();
  r.inf_value = f.min_value();
  r.integral = f.integral();
  const Rational uniform = 1 / f.T();
  r.is_uniform = std::all_of(f.values().begin(), f.values().end(),
                             [&](const Rational &v) { return v == uniform; });
  r.passes_a = r.tv <= r.f0plus + r.fTminus;
  r.passes_b = r.inf_value > 0;
  r.passes_c = r.is_uniform || r.integral < 1;
  r.passes_universal_bound = check_universal_bound(f);
  return r;
}

namespace {

/// Appends the breakpoints of `f`, shifted by -shift, that fall in (lo, hi).
void collect_cuts(const StepDensity &f, const Rational &shift, const Rational &lo,
                  const Rational &hi, std::vector<Rational> &out) {
  for (const auto &b : f.breakpoints()) {
    Rational c = b - shift;
    if (lo < c && c < hi) out.push_back(c);
  }
}

}  // namespace

bool check_window_monotonicity(const SupLocationLaw &law_long,
                               const SupLocationLaw &law_short,
                               const Rational &T, const Rational &Delta,
                               const Rational &delta) {
  if (!(0 <= delta && delta <= Delta && Delta < T))
    throw ArgumentError("window monotonicity needs 0 <= delta <= Delta < T");
  const Rational short_T = T - Delta;
  std::vector<Rational> cuts{Rational(0), short_T};
  collect_cuts(law_short.interior, 0, 0, short_T, cuts);
  collect_cuts(law_long.interior, delta, 0, short_T, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // Both densities are constant on [cuts[i], cuts[i+1]).
    if (law_short.interior(cuts[i]) < law_long.interior(cuts[i] + delta)) return false;
  }
  return true;
}

bool check_integral_inequality(const SupLocationLaw &law_long,
                               const SupLocationLaw &law_short,
                               const Rational &T, const Rational &Delta,
                               const Rational &delta, const Rational &eps1,
                               const Rational &eps2) {
  if (!(0 <= delta && delta <= Delta && Delta < T))
    throw ArgumentError("integral inequality needs 0 <= delta <= Delta < T");
  if (eps1 < 0 || eps2 < 0 || !(eps1 + eps2 < T - Delta))
    throw ArgumentError("integral inequality needs eps1, eps2 >= 0 and eps1+eps2 < T-Delta");
  const auto &fs = law_short.interior;
  const auto &fl = law_long.interior;
  const Rational upper = T - Delta - eps2;
  Rational lhs = fs.integral(eps1, upper) - fl.integral(eps1 + delta, upper + delta);
  Rational rhs = fl.integral(eps1, eps1 + delta) + fl.integral(upper + delta, T - eps2);
  return lhs <= rhs;
}

}  // namespace suploc
