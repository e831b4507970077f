#ifndef SUPLOC_ORACLE_HPP_
#define SUPLOC_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "suploc/assembly.hpp"
#include "suploc/law.hpp"

namespace suploc {

/// Exact law of the leftmost supremum location of X(t) = x(t - U) on [0,T],
/// U uniform over one period.
///
/// For a shift s the window is [s, s+T] in path coordinates. The leftmost
/// argmax of a piecewise-linear function over a closed interval is the left
/// endpoint, a knot inside the window, or the right endpoint; between
/// consecutive breakpoints s in {p_i, p_i - T} the set of knots inside the
/// window is fixed and both endpoint values are affine in s, so the winner
/// changes only at rational crossing points. Throws ArgumentError unless
/// 0 < T < period.
SupLocationLaw exact_law(const PiecewiseLinearPath &path, const Rational &T);

/// atom0 + atomT == m d / (HT).
bool atom_identity_check(const SupLocationLaw &law, const BlockCollection &c);

/// Brute force in double precision: n_shift equispaced shifts, each window
/// sampled on an n_grid mesh plus the knots inside it. Endpoint wins become
/// atoms and interior wins are binned into n_bins equal bins.
SupLocationLaw grid_law(const PiecewiseLinearPath &path, const Rational &T,
                        std::size_t n_grid, std::size_t n_shift,
                        std::size_t n_bins = 100, unsigned threads = 1);

struct LawDistance {
  Rational atom0_diff;
  Rational atomT_diff;
  Rational interior_L1;
  Rational interior_sup;
};

/// Exact differences. When exactly one law is binned (grid or Monte Carlo
/// provenance), the exact density is first averaged over its bins.
LawDistance law_distance(const SupLocationLaw &a, const SupLocationLaw &b);

/// Average of f over each cell of `edges` (edges span [0,T]).
StepDensity bin_average(const StepDensity &f, const std::vector<Rational> &edges);

/// L1 and sup distance of two step densities on the same window.
Rational l1_distance(const StepDensity &a, const StepDensity &b);
Rational sup_distance(const StepDensity &a, const StepDensity &b);

/// Double-precision leftmost argmax for individual shifts, built on the same
/// candidate reduction as exact_law. Used by Monte Carlo sampling.
class ShiftArgmax {
 public:
  enum class Winner : std::uint8_t { left, knot, right };
  struct Result {
    double tau;
    double value;
    Winner winner;
  };

  ShiftArgmax(const PiecewiseLinearPath &path, const Rational &T);
  double period() const { return period_; }
  double window() const { return T_; }
  /// s in [0, period).
  Result operator()(double s) const;

 private:
  double eval_segment(std::size_t i, double t) const;
  std::size_t range_max(std::size_t lo, std::size_t hi) const;

  double period_;
  double T_;
  std::vector<double> pos_;
  std::vector<double> val_;
  std::vector<std::vector<std::uint32_t>> sparse_;  // leftmost argmax tables
};

}  // namespace suploc

#endif  // SUPLOC_ORACLE_HPP_
