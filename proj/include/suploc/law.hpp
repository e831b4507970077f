#ifndef SUPLOC_LAW_HPP_
#define SUPLOC_LAW_HPP_

#include <string>

#include "suploc/density.hpp"

namespace suploc {

enum class Provenance { envelope, grid, montecarlo };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string &s);

/// Law of the leftmost supremum location on [0,T]: atoms at both endpoints
/// plus a piecewise-constant density on the interior.
struct SupLocationLaw {
  Rational T;
  Rational atom0;
  Rational atomT;
  StepDensity interior;
  Provenance provenance = Provenance::envelope;
  /// Shift measure (as a fraction of the period) on which the leftmost rule
  /// had to break a tie of positive length. Zero for constructed paths.
  Rational tie_measure;

  Rational total_mass() const { return atom0 + atomT + interior.integral(); }
};

}  // namespace suploc

#endif  // SUPLOC_LAW_HPP_
