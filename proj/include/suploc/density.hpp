#ifndef SUPLOC_DENSITY_HPP_
#define SUPLOC_DENSITY_HPP_

#include <span>
#include <utility>
#include <vector>

#include "suploc/rational.hpp"

namespace suploc {

/// Piecewise-constant density on (0,T). Piece i carries values()[i] on
/// [breakpoints()[i], breakpoints()[i+1]). Mass at the endpoints 0 and T is
/// never represented here; it lives in the atoms of a SupLocationLaw.
class StepDensity {
 public:
  /// Throws StructuralError unless breakpoints run strictly increasing from
  /// 0 to T > 0 with one nonnegative value per piece.
  StepDensity(std::vector<Rational> breakpoints, std::vector<Rational> values);

  static StepDensity constant(const Rational &T, const Rational &value);

  /// Builds from (until, value) pairs; the last `until` is T.
  static StepDensity from_pieces(
      const Rational &T, std::span<const std::pair<Rational, Rational>> pieces);

  const Rational &T() const { return breakpoints_.back(); }
  std::size_t size() const { return values_.size(); }
  const std::vector<Rational> &breakpoints() const { return breakpoints_; }
  const std::vector<Rational> &values() const { return values_; }

  const Rational &left(std::size_t i) const { return breakpoints_[i]; }
  const Rational &right(std::size_t i) const { return breakpoints_[i + 1]; }
  const Rational &value(std::size_t i) const { return values_[i]; }

  /// f(0+) and f(T-).
  const Rational &front() const { return values_.front(); }
  const Rational &back() const { return values_.back(); }

  /// Value of the cadlag version at t in [0,T); t = T maps to f(T-).
  const Rational &operator()(const Rational &t) const;

  Rational integral() const;
  /// Integral over [a,b] intersected with [0,T]; zero if b <= a.
  Rational integral(const Rational &a, const Rational &b) const;

  Rational min_value() const;
  Rational max_value() const;

  /// Same function with equal-valued neighbouring pieces merged.
  StepDensity canonical() const;

  friend bool operator==(const StepDensity &a, const StepDensity &b) {
    return a.breakpoints_ == b.breakpoints_ && a.values_ == b.values_;
  }

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Rational> values_;
};

/// Canonical equality: same function regardless of piece refinement.
bool same_function(const StepDensity &a, const StepDensity &b);

struct DensityReport {
  Rational tv;
  Rational f0plus;
  Rational fTminus;
  Rational inf_value;
  Rational integral;
  bool is_uniform = false;
  bool passes_a = false;
  bool passes_b = false;
  bool passes_c = false;
  bool passes_universal_bound = false;

  bool admissible() const { return passes_a && passes_b && passes_c; }
};

/// Sum of interior jumps |f_{i+1} - f_i|.
Rational total_variation(const StepDensity &f);

DensityReport validate_density(const StepDensity &f);

/// f(t) <= max(1/t, 1/(T-t)) on (0,T). The envelope is decreasing up to T/2
/// and increasing after, so each piece is compared against the envelope at
/// the point of the piece closest to T/2.
bool check_universal_bound(const StepDensity &f);

struct SupLocationLaw;

/// Window monotonicity: f_{T-Delta}(t) >= f_T(t+delta) for a.e. t in
/// (0, T-Delta), compared on the common refinement of both densities.
bool check_window_monotonicity(const SupLocationLaw &law_long,
                               const SupLocationLaw &law_short,
                               const Rational &T, const Rational &Delta,
                               const Rational &delta);

/// Integral form of the window comparison, evaluated exactly:
///   int_{e1}^{T-Delta-e2} (f_short(t) - f_long(t+delta)) dt
///     <= int_{e1}^{e1+delta} f_long + int_{T-Delta-e2+delta}^{T-e2} f_long.
/// Throws ArgumentError outside 0<=delta<=Delta<T, e1,e2>=0,
/// e1+e2 < T-Delta.
bool check_integral_inequality(const SupLocationLaw &law_long,
                               const SupLocationLaw &law_short,
                               const Rational &T, const Rational &Delta,
                               const Rational &delta, const Rational &eps1,
                               const Rational &eps2);

}  // namespace suploc

#endif  // SUPLOC_DENSITY_HPP_
