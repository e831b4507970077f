#ifndef SUPLOC_BLOCKS_HPP_
#define SUPLOC_BLOCKS_HPP_

#include <string>
#include <vector>

#include "suploc/density.hpp"

namespace suploc {

enum class BlockKind { base, left, right, central };

std::string to_string(BlockKind k);
BlockKind block_kind_from_string(const std::string &s);

/// Subinterval (u,v) of (0,T); it contributes 1/(HT) on [u,v).
struct Block {
  BlockKind kind;
  Rational u;
  Rational v;

  Rational length() const { return v - u; }
  friend bool operator==(const Block &, const Block &) = default;
};

/// Classifies (u,v) by which window endpoints it touches. Throws
/// StructuralError unless 0 <= u < v <= T.
Block make_block(const Rational &u, const Rational &v, const Rational &T);

struct BlockCollection {
  Rational T;
  Rational H;
  std::vector<Block> blocks;

  std::size_t m() const { return blocks.size(); }
  std::size_t count(BlockKind k) const;
  Rational total_length() const;
  /// (HT - total block length) / m.
  Rational d() const;
};

struct FeasibilityReport {
  bool proper = false;      // nested or closure-disjoint, kinds consistent
  bool has_base = false;    // at least one base block
  bool central_ok = false;  // #central <= #base
  bool d_positive = false;  // d > 0, H > 1

  bool ok() const { return proper && has_base && central_ok && d_positive; }
  std::string first_failure() const;
};

/// Smallest H = L/T with L > T a multiple of the least L0 for which every
/// f_i L0 is an integer. Throws ArgumentError for the uniform density.
Rational choose_period(const StepDensity &f);

/// Layer decomposition: every maximal run of pieces with positive level
/// becomes a block, the run is lowered by its minimum level, and the process
/// repeats. Levels are f_i * HT and must be integers.
BlockCollection peel_blocks(const StepDensity &f, const Rational &H);

FeasibilityReport feasibility(const BlockCollection &c);

/// f(t) = (1/HT) * #{i : t in [u_i, v_i)}, canonical form.
StepDensity recompose(const BlockCollection &c);

}  // namespace suploc

#endif  // SUPLOC_BLOCKS_HPP_
