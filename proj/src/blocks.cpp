#include "suploc/blocks.hpp"

#include <algorithm>
#include <map>

namespace suploc {

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::base: return "base";
    case BlockKind::left: return "left";
    case BlockKind::right: return "right";
    case BlockKind::central: return "central";
  }
  return "?";
}

BlockKind block_kind_from_string(const std::string &s) {
  if (s == "base") return BlockKind::base;
  if (s == "left") return BlockKind::left;
  if (s == "right") return BlockKind::right;
  if (s == "central") return BlockKind::central;
  throw SchemaError("unknown block kind '" + s + "'");
}

Block make_block(const Rational &u, const Rational &v, const Rational &T) {
  if (!(0 <= u && u < v && v <= T))
    throw StructuralError("block (" + to_string(u) + "," + to_string(v) +
                          ") is not a nonempty subinterval of (0,T)");
  BlockKind kind = u == 0 ? (v == T ? BlockKind::base : BlockKind::left)
                          : (v == T ? BlockKind::right : BlockKind::central);
  return Block{kind, u, v};
}

std::size_t BlockCollection::count(BlockKind k) const {
  return static_cast<std::size_t>(std::count_if(
      blocks.begin(), blocks.end(), [k](const Block &b) { return b.kind == k; }));
}

Rational BlockCollection::total_length() const {
  Rational acc = 0;
  for (const auto &b : blocks) acc += b.length();
  return acc;
}

Rational BlockCollection::d() const {
  if (blocks.empty()) throw StructuralError("empty block collection has no spacing");
  return (H * T - total_length()) / Rational(static_cast<long>(m()));
}

std::string FeasibilityReport::first_failure() const {
  if (!proper) return "blocks are not a proper collection";
  if (!has_base) return "no base block";
  if (!central_ok) return "more central blocks than base blocks";
  if (!d_positive) return "spacing d is not positive";
  return "";
}

Rational choose_period(const StepDensity &f) {
  const Rational &T = f.T();
  if (validate_density(f).is_uniform)
    throw ArgumentError("uniform case: no block representation needed");
  // {L : f_i L in Z for all i} is the lattice generated by
  // lcm(q_i) / gcd(p_i) over the nonzero values p_i/q_i.
  mpz_class lcm_den = 1, gcd_num = 0;
  for (const auto &v : f.values()) {
    if (v == 0) continue;
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), v.get_den_mpz_t());
    mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), v.get_num_mpz_t());
  }
  if (gcd_num == 0) throw ArgumentError("density is identically zero");
  Rational L0(lcm_den, gcd_num);
  L0.canonicalize();
  // Smallest integer multiple strictly above T.
  Rational ratio = T / L0;
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
  k += 1;
  return Rational(k) * L0 / T;
}

BlockCollection peel_blocks(const StepDensity &f, const Rational &H) {
  const Rational &T = f.T();
  const Rational HT = H * T;
  std::vector<mpz_class> level;
  level.reserve(f.size());
  for (const auto &v : f.values()) {
    Rational l = v * HT;
    if (l.get_den() != 1)
      throw ArgumentError("level " + to_string(l) + " of value " + to_string(v) +
                          " is not an integer multiple of 1/(HT)");
    level.push_back(l.get_num());
  }
  BlockCollection c{T, H, {}};
  const std::size_t k = level.size();
  for (;;) {
    bool any = false;
    std::size_t i = 0;
    while (i < k) {
      if (level[i] <= 0) {
        ++i;
        continue;
      }
      std::size_t j = i;
      mpz_class lowest = level[i];
      while (j < k && level[j] > 0) {
        if (level[j] < lowest) lowest = level[j];
        ++j;
      }
      Block b = make_block(f.left(i), f.right(j - 1), T);
      for (mpz_class n = 0; n < lowest; ++n) c.blocks.push_back(b);
      for (std::size_t t = i; t < j; ++t) level[t] -= lowest;
      any = true;
      i = j;
    }
    if (!any) break;
  }
  return c;
}

FeasibilityReport feasibility(const BlockCollection &c) {
  FeasibilityReport r;
  r.proper = true;
  for (const auto &b : c.blocks) {
    if (!(0 <= b.u && b.u < b.v && b.v <= c.T) ||
        make_block(b.u, b.v, c.T).kind != b.kind) {
      r.proper = false;
      break;
    }
  }
  if (r.proper) {
    // Identical blocks are trivially nested; compare distinct intervals only.
    std::vector<std::pair<Rational, Rational>> iv;
    for (const auto &b : c.blocks) iv.emplace_back(b.u, b.v);
    std::sort(iv.begin(), iv.end());
    iv.erase(std::unique(iv.begin(), iv.end()), iv.end());
    for (std::size_t i = 0; i < iv.size() && r.proper; ++i) {
      for (std::size_t j = i + 1; j < iv.size(); ++j) {
        const auto &[u1, v1] = iv[i];
        const auto &[u2, v2] = iv[j];
        bool nested = (u1 <= u2 && v2 <= v1) || (u2 <= u1 && v1 <= v2);
        bool disjoint = v1 < u2 || v2 < u1;
        if (!nested && !disjoint) {
          r.proper = false;
          break;
        }
      }
    }
  }
  const std::size_t bases = c.count(BlockKind::base);
  r.has_base = bases >= 1;
  r.central_ok = c.count(BlockKind::central) <= bases;
  r.d_positive = !c.blocks.empty() && c.H > 1 && c.d() > 0;
  return r;
}

StepDensity recompose(const BlockCollection &c) {
  if (c.blocks.empty()) throw StructuralError("empty block collection");
  const Rational unit = 1 / (c.H * c.T);
  std::map<Rational, Rational> delta;
  delta[Rational(0)];
  delta[c.T];
  for (const auto &b : c.blocks) {
    delta[b.u] += unit;
    delta[b.v] -= unit;
  }
  std::vector<Rational> bps, vals;
  Rational running = 0;
  for (const auto &[t, dv] : delta) {
    if (t == c.T) break;
    running += dv;
    bps.push_back(t);
    vals.push_back(running);
  }
  bps.push_back(c.T);
  return StepDensity(std::move(bps), std::move(vals)).canonical();
}

}  // namespace suploc
