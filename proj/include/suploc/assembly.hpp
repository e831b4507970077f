#ifndef SUPLOC_ASSEMBLY_HPP_
#define SUPLOC_ASSEMBLY_HPP_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "suploc/blocks.hpp"

namespace suploc {

/// How the two one-sided degenerate components are filled.
///  - literal: a single linear span of length d+T towards the value-2 knot.
///  - repaired: an equal-value span of length T (tent-filled, so it stays
///    below the neighbouring local maximum) plus a linear span of length d.
enum class FillMode { literal, repaired };

std::string to_string(FillMode m);
FillMode fill_mode_from_string(const std::string &s);

struct Knot {
  Rational pos;
  Rational value;
  friend bool operator==(const Knot &, const Knot &) = default;
};

/// One base block with its attached central/left/right blocks; generates a
/// stretch of length L of the periodic path.
struct Component {
  Block base;
  std::optional<Block> central;
  std::vector<Block> lefts;   // ascending by v
  std::vector<Block> rights;  // ascending by T-u
  Rational L;

  std::size_t block_count() const {
    return 1 + lefts.size() + rights.size() + (central ? 1 : 0);
  }
};

/// d * (number of blocks) + total block length.
Rational component_length(const Component &c, const Rational &d);

struct Layout {
  Rational T;
  Rational H;
  Rational d;
  std::vector<Component> components;  // in path order

  Rational period() const { return H * T; }
  /// Largest number of left or right blocks carried by one component.
  std::size_t max_side_count() const;
};

/// Periodic piecewise-linear function: linear between consecutive knots,
/// wrapping from the last knot to (period, knots.front().value).
struct PiecewiseLinearPath {
  Rational period;
  std::vector<Knot> knots;
  FillMode mode = FillMode::repaired;

  /// Throws StructuralError unless knots start at 0, increase strictly and
  /// stay below the period.
  void check() const;
  Rational operator()(const Rational &t) const;
};

struct PathAudit {
  std::size_t n_local_maxima = 0;
  std::vector<Rational> maxima_positions;
  Rational min_maxima_gap;
  std::set<Rational> maxima_values;
  Rational min_value;
  Rational max_value;
  Rational max_slope;
  /// Smallest |slope| over segments reaching above 0, and over segments
  /// lying in {x <= 0} (zero when there are none).
  Rational min_slope_positive;
  Rational min_slope_nonpositive;
  Rational slope_floor_positive;  // 1/(2^N d)
  std::size_t N = 0;
  Rational local_maxima_rate;  // per unit time
  FillMode fill_mode = FillMode::repaired;

  bool bounded = false;          // -1 <= x <= 2
  bool lipschitz = false;        // |x'| <= 3/(2d)
  bool slope_floors = false;     // derivative floors on {x>0} and {x<=0}
  bool maxima_separated = false; // gaps >= d
  bool maxima_values_ok = false; // at most N+3 values
  bool nowhere_constant = false;
  bool periodic_anchor = false;  // x(0) = x(P) = 2
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// One component per base block. Centrals go one per component, lefts and
/// rights are dealt round-robin in sorted order. Components are returned in
/// path order: those with a central first, then by descending L.
Layout assign_components(const BlockCollection &c);

/// Knot skeleton of one component, positions relative to its start. Starts
/// at (0,2) and ends at (L,2).
std::vector<Knot> build_component_profile(const Component &comp, const Rational &d,
                                          const Rational &T, FillMode mode);

/// Interpolates a knot skeleton: linear between unequal values, tent (or
/// deep tent clipped at -1) between equal values.
std::vector<Knot> fill_gaps(const std::vector<Knot> &skeleton, const Rational &d);

/// Concatenated skeleton of all components, before filling.
std::vector<Knot> build_skeleton(const Layout &layout, FillMode mode);

PiecewiseLinearPath build_path(const Layout &layout, FillMode mode);

PathAudit audit_path(const PiecewiseLinearPath &path, const Layout &layout);
PathAudit audit_path(const PiecewiseLinearPath &path, const Rational &d,
                     std::size_t N);

/// Deterministic single-peak tent of period T, stored over two periods so
/// that a window of length T is shorter than the stored period.
PiecewiseLinearPath uniform_preset(const Rational &T);

}  // namespace suploc

#endif  // SUPLOC_ASSEMBLY_HPP_
