#ifndef SUPLOC_APPROXIMATION_HPP_
#define SUPLOC_APPROXIMATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "suploc/assembly.hpp"
#include "suploc/density.hpp"

namespace suploc {

/// Quadratic c0 + c1 t + c2 t^2 (absolute time) on [from, to).
struct PolyPiece {
  Rational from;
  Rational to;
  Rational c0, c1, c2;

  Rational operator()(const Rational &t) const { return c0 + (c1 + c2 * t) * t; }
  Rational derivative(const Rational &t) const { return c1 + 2 * c2 * t; }
  /// min / max over the closed cell [a,b] inside the piece.
  Rational min_on(const Rational &a, const Rational &b) const;
  Rational max_on(const Rational &a, const Rational &b) const;
};

/// Cadlag candidate density: piecewise polynomial of degree <= 2 with
/// rational coefficients. Step densities and the named presets are both
/// represented this way, so every oscillation bound is computed exactly.
class CadlagDensity {
 public:
  CadlagDensity(std::string name, std::vector<PolyPiece> pieces);

  static CadlagDensity from_step(const StepDensity &f);
  /// a + b t on (0,T).
  static CadlagDensity ramp(const Rational &T, const Rational &a, const Rational &b);
  /// a + c (t - t0)^2 on (0,T).
  static CadlagDensity parabola(const Rational &T, const Rational &a, const Rational &c,
                                const Rational &t0);
  /// low on [0,t1), linear from low to high on [t1,t2), high on [t2,T).
  static CadlagDensity two_level_ramp(const Rational &T, const Rational &low,
                                      const Rational &high, const Rational &t1,
                                      const Rational &t2);

  const std::string &name() const { return name_; }
  const Rational &T() const { return pieces_.back().to; }
  const std::vector<PolyPiece> &pieces() const { return pieces_; }
  bool is_step() const;

  Rational operator()(const Rational &t) const;
  Rational integral() const;
  Rational inf() const;
  Rational sup() const;
  Rational f0plus() const { return pieces_.front()(0); }
  Rational fTminus() const { return pieces_.back()(T()); }
  Rational total_variation() const;
  /// Conditions (a)-(c) plus the universal bound, like validate_density.
  DensityReport validate() const;

 private:
  std::string name_;
  std::vector<PolyPiece> pieces_;
};

/// Partition 0 = t_0 < ... < t_k = T on which f oscillates by at most
/// 1/(nT) per cell; piece boundaries of f are always cut points. Cells are
/// found by halving until the exact oscillation fits. Throws
/// Error("mesh_cap", ...) when more than max_cells cells are needed.
std::vector<Rational> mesh_for(const CadlagDensity &f, long n, std::size_t max_cells = 4096);

struct Quantization {
  long n = 0;
  std::size_t k = 0;
  Rational H;  // k n
  std::vector<Rational> mesh;
  StepDensity lower;  // largest multiple of 1/(knT) below f on each cell
  StepDensity fn;     // lower + 1/(nT)
  bool sandwich_ok = false;  // f - 2/(nT) <= lower <= f
  bool tv_ok = false;        // TV(lower) <= TV(f) + 1/(nT)
};

Quantization quantize(const CadlagDensity &f, long n, std::size_t max_cells = 4096);

/// sup and L1 distance between a step density and f on (0,T). L1 is exact
/// when f has no quadratic pieces.
Rational sup_distance(const StepDensity &g, const CadlagDensity &f);
double l1_distance(const StepDensity &g, const CadlagDensity &f);
std::optional<Rational> l1_distance_exact(const StepDensity &g, const CadlagDensity &f);

enum class RealizeStatus { ok, uniform, inadmissible, mesh_cap };
std::string to_string(RealizeStatus s);

struct ConvergenceRow {
  long n = 0;
  RealizeStatus status = RealizeStatus::ok;
  std::size_t k = 0;
  Rational H;
  std::size_t m = 0;
  std::size_t B = 0;
  std::optional<Rational> d_n;
  Rational sup_dist;
  double l1_dist = 0;
  std::optional<Rational> l1_exact;
  std::size_t max_lefts = 0;
  std::size_t max_rights = 0;
  bool realized_equals_fn = false;
  bool atom_identity = false;
  bool sandwich_ok = false;
  bool tv_ok = false;
  bool d_in_interval = false;
  std::string note;
};

struct ConvergenceReport {
  std::string density;
  FillMode mode = FillMode::repaired;
  Rational d_lower;  // (1 - int f) / (4 sup f)
  Rational d_upper;  // 2 / inf f
  std::vector<ConvergenceRow> rows;
  /// Smallest listed n from which every later row realizes blocks with d_n
  /// inside [d_lower, d_upper]; absent if none.
  std::optional<long> d_threshold;
};

/// quantize -> peel (H = kn) -> balanced assignment -> build -> exact law,
/// for each n. Runs the n values on `threads` worker threads.
ConvergenceReport realize_and_compare(const CadlagDensity &f, const std::vector<long> &ns,
                                      FillMode mode = FillMode::repaired,
                                      std::size_t max_cells = 4096, unsigned threads = 1);

}  // namespace suploc

#endif  // SUPLOC_APPROXIMATION_HPP_
