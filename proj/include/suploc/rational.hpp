#ifndef SUPLOC_RATIONAL_HPP_
#define SUPLOC_RATIONAL_HPP_

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace suploc {

/// Exact rational scalar used by every exact artifact (densities, blocks,
/// paths, laws).
using Rational = mpq_class;

/// Errors carry a machine-readable code which the CLI echoes verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string &code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct StructuralError : Error {
  explicit StructuralError(const std::string &what)
      : Error("structural_error", what) {}
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string &what)
      : Error("argument_error", what) {}
};

struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string &what)
      : Error("infeasible_collection", what) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string &what)
      : Error("schema_violation", what) {}
};

/// Parses "p/q", "p", or a finite decimal such as "0.25" into a canonical
/// rational. Throws SchemaError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational &q);

inline double to_double(const Rational &q) { return q.get_d(); }

/// 2^k for any integer k.
Rational pow2(long k);

inline Rational abs(const Rational &q) { return q < 0 ? Rational(-q) : q; }

inline Rational rmin(const Rational &a, const Rational &b) { return a < b ? a : b; }
inline Rational rmax(const Rational &a, const Rational &b) { return a < b ? b : a; }

}  // namespace suploc

#endif  // SUPLOC_RATIONAL_HPP_
