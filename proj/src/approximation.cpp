#include "suploc/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "suploc/oracle.hpp"

namespace suploc {

namespace {

std::optional<Rational> vertex_inside(const PolyPiece &p, const Rational &a, const Rational &b) {
  if (p.c2 == 0) return std::nullopt;
  Rational v = -p.c1 / (2 * p.c2);
  if (a < v && v < b) return v;
  return std::nullopt;
}

const PolyPiece &piece_at(const std::vector<PolyPiece> &pieces, const Rational &t) {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                             [](const Rational &x, const PolyPiece &p) { return x < p.to; });
  if (it == pieces.end()) --it;
  return *it;
}

}  // namespace

Rational PolyPiece::min_on(const Rational &a, const Rational &b) const {
  Rational m = rmin((*this)(a), (*this)(b));
  if (auto v = vertex_inside(*this, a, b)) m = rmin(m, (*this)(*v));
  return m;
}

Rational PolyPiece::max_on(const Rational &a, const Rational &b) const {
  Rational m = rmax((*this)(a), (*this)(b));
  if (auto v = vertex_inside(*this, a, b)) m = rmax(m, (*this)(*v));
  return m;
}

CadlagDensity::CadlagDensity(std::string name, std::vector<PolyPiece> pieces)
    : name_(std::move(name)), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw StructuralError("density needs at least one piece");
  if (pieces_.front().from != 0) throw StructuralError("first piece must start at 0");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto &p = pieces_[i];
    if (!(p.from < p.to)) throw StructuralError("pieces must have positive length");
    if (i > 0 && p.from != pieces_[i - 1].to) throw StructuralError("pieces must be contiguous");
    if (p.min_on(p.from, p.to) < 0) throw StructuralError("density must be nonnegative");
  }
}

CadlagDensity CadlagDensity::from_step(const StepDensity &f) {
  std::vector<PolyPiece> pieces;
  for (std::size_t i = 0; i < f.size(); ++i)
    pieces.push_back({f.left(i), f.right(i), f.value(i), 0, 0});
  return CadlagDensity("step", std::move(pieces));
}

CadlagDensity CadlagDensity::ramp(const Rational &T, const Rational &a, const Rational &b) {
  return CadlagDensity("ramp", {{0, T, a, b, 0}});
}

CadlagDensity CadlagDensity::parabola(const Rational &T, const Rational &a, const Rational &c,
                                      const Rational &t0) {
  // a + c (t - t0)^2 = (a + c t0^2) - 2 c t0 t + c t^2
  return CadlagDensity("parabola", {{0, T, a + c * t0 * t0, -2 * c * t0, c}});
}

CadlagDensity CadlagDensity::two_level_ramp(const Rational &T, const Rational &low,
                                            const Rational &high, const Rational &t1,
                                            const Rational &t2) {
  if (!(0 < t1 && t1 < t2 && t2 < T))
    throw ArgumentError("two-level ramp needs 0 < t1 < t2 < T");
  const Rational slope = (high - low) / (t2 - t1);
  return CadlagDensity("two_level_ramp", {{0, t1, low, 0, 0},
                                          {t1, t2, low - slope * t1, slope, 0},
                                          {t2, T, high, 0, 0}});
}

bool CadlagDensity::is_step() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const PolyPiece &p) { return p.c1 == 0 && p.c2 == 0; });
}

Rational CadlagDensity::operator()(const Rational &t) const { return piece_at(pieces_, t)(t); }

Rational CadlagDensity::integral() const {
  Rational acc = 0;
  for (const auto &p : pieces_) {
    const Rational &a = p.from, &b = p.to;
    acc += p.c0 * (b - a) + p.c1 * (b * b - a * a) / 2 + p.c2 * (b * b * b - a * a * a) / 3;
  }
  return acc;
}

Rational CadlagDensity::inf() const {
  Rational m = pieces_.front().min_on(pieces_.front().from, pieces_.front().to);
  for (const auto &p : pieces_) m = rmin(m, p.min_on(p.from, p.to));
  return m;
}

Rational CadlagDensity::sup() const {
  Rational m = 0;
  for (const auto &p : pieces_) m = rmax(m, p.max_on(p.from, p.to));
  return m;
}

Rational CadlagDensity::total_variation() const {
  Rational tv = 0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto &p = pieces_[i];
    if (auto v = vertex_inside(p, p.from, p.to))
      tv += abs(p(*v) - p(p.from)) + abs(p(p.to) - p(*v));
    else
      tv += abs(p(p.to) - p(p.from));
    if (i + 1 < pieces_.size()) tv += abs(pieces_[i + 1](p.to) - p(p.to));
  }
  return tv;
}

DensityReport CadlagDensity::validate() const {
  DensityReport r;
  r.tv = total_variation();
  r.f0plus = f0plus();
  r.fTminus = fTminus();
  r.inf_value = inf();
  r.integral = integral();
  const Rational uniform = 1 / T();
  r.is_uniform = std::all_of(pieces_.begin(), pieces_.end(), [&](const PolyPiece &p) {
    return p.c1 == 0 && p.c2 == 0 && p.c0 == uniform;
  });
  r.passes_a = r.tv <= r.f0plus + r.fTminus;
  r.passes_b = r.inf_value > 0;
  r.passes_c = r.is_uniform || r.integral < 1;
  // Sufficient check: on each of 256 cells per piece the sup of f stays
  // below the envelope minimum over that cell.
  const Rational half = T() / 2;
  r.passes_universal_bound = true;
  for (const auto &p : pieces_) {
    const long cells = p.c1 == 0 && p.c2 == 0 ? 1 : 256;
    for (long c = 0; c < cells && r.passes_universal_bound; ++c) {
      Rational a = p.from + (p.to - p.from) * Rational(c) / Rational(cells);
      Rational b = p.from + (p.to - p.from) * Rational(c + 1) / Rational(cells);
      Rational mid = std::clamp(half, a, b);
      if (p.max_on(a, b) > rmax(1 / mid, 1 / (T() - mid))) r.passes_universal_bound = false;
    }
  }
  return r;
}

std::vector<Rational> mesh_for(const CadlagDensity &f, long n, std::size_t max_cells) {
  if (n < 1) throw ArgumentError("mesh_for needs n >= 1");
  const Rational eps = 1 / (Rational(n) * f.T());
  std::vector<Rational> mesh{Rational(0)};
  for (const auto &p : f.pieces()) {
    Rational t = p.from;
    while (t < p.to) {
      Rational w = p.to - t;
      while (p.max_on(t, t + w) - p.min_on(t, t + w) > eps) w /= 2;
      t += w;
      mesh.push_back(t);
      if (mesh.size() - 1 > max_cells)
        throw Error("mesh_cap", "mesh for n=" + std::to_string(n) + " needs more than " +
                                    std::to_string(max_cells) + " cells");
    }
  }
  return mesh;
}

Quantization quantize(const CadlagDensity &f, long n, std::size_t max_cells) {
  if (!(f.inf() > 0))
    throw ArgumentError("density is not bounded away from zero; quantization would hit 0");
  auto mesh = mesh_for(f, n, max_cells);
  const std::size_t k = mesh.size() - 1;
  const Rational nT = Rational(n) * f.T();
  const Rational grid = 1 / (Rational(static_cast<long>(k)) * nT);
  const Rational lift = 1 / nT;
  std::vector<Rational> lower, upper;
  bool sandwich = true;
  for (std::size_t i = 0; i < k; ++i) {
    const auto &p = piece_at(f.pieces(), mesh[i]);
    const Rational lo = p.min_on(mesh[i], mesh[i + 1]);
    Rational steps = lo / grid;
    mpz_class j;
    mpz_fdiv_q(j.get_mpz_t(), steps.get_num_mpz_t(), steps.get_den_mpz_t());
    Rational value = Rational(j) * grid;
    if (value > lo || value < p.max_on(mesh[i], mesh[i + 1]) - 2 * lift) sandwich = false;
    lower.push_back(value);
    upper.push_back(value + lift);
  }
  StepDensity lower_f(mesh, lower);
  StepDensity fn(mesh, upper);
  Quantization q{n, k, Rational(static_cast<long>(k)) * Rational(n), mesh,
                 lower_f, fn, sandwich, false};
  q.tv_ok = suploc::total_variation(lower_f) <= f.total_variation() + lift;
  return q;
}

namespace {

std::vector<Rational> cells_of(const StepDensity &g, const CadlagDensity &f) {
  if (g.T() != f.T()) throw ArgumentError("densities live on different windows");
  std::vector<Rational> cuts = g.breakpoints();
  for (const auto &p : f.pieces()) cuts.push_back(p.from);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

Rational sup_distance(const StepDensity &g, const CadlagDensity &f) {
  Rational acc = 0;
  const auto cuts = cells_of(g, f);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto &p = piece_at(f.pieces(), cuts[i]);
    const Rational &c = g(cuts[i]);
    acc = rmax(acc, rmax(abs(c - p.min_on(cuts[i], cuts[i + 1])),
                         abs(c - p.max_on(cuts[i], cuts[i + 1]))));
  }
  return acc;
}

std::optional<Rational> l1_distance_exact(const StepDensity &g, const CadlagDensity &f) {
  if (std::any_of(f.pieces().begin(), f.pieces().end(),
                  [](const PolyPiece &p) { return p.c2 != 0; }))
    return std::nullopt;
  Rational acc = 0;
  const auto cuts = cells_of(g, f);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational &a = cuts[i], &b = cuts[i + 1];
    const auto &p = piece_at(f.pieces(), a);
    const Rational ha = g(a) - p(a), hb = g(a) - p(b);
    if ((ha >= 0) == (hb >= 0) || ha == 0 || hb == 0) {
      acc += abs(ha + hb) / 2 * (b - a);
    } else {
      const Rational r = a + (b - a) * ha / (ha - hb);
      acc += abs(ha) * (r - a) / 2 + abs(hb) * (b - r) / 2;
    }
  }
  return acc;
}

double l1_distance(const StepDensity &g, const CadlagDensity &f) {
  if (auto exact = l1_distance_exact(g, f)) return exact->get_d();
  double acc = 0;
  const auto cuts = cells_of(g, f);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i].get_d(), b = cuts[i + 1].get_d();
    const auto &p = piece_at(f.pieces(), cuts[i]);
    // h(t) = k0 + k1 t + k2 t^2 = g - f on the cell.
    const double k0 = Rational(g(cuts[i]) - p.c0).get_d(), k1 = -p.c1.get_d(), k2 = -p.c2.get_d();
    auto prim = [&](double t) { return k0 * t + k1 * t * t / 2 + k2 * t * t * t / 3; };
    std::vector<double> pts{a, b};
    if (k2 != 0) {
      const double disc = k1 * k1 - 4 * k2 * k0;
      if (disc > 0) {
        const double sq = std::sqrt(disc);
        for (double r : {(-k1 - sq) / (2 * k2), (-k1 + sq) / (2 * k2)})
          if (a < r && r < b) pts.push_back(r);
      }
    } else if (k1 != 0) {
      const double r = -k0 / k1;
      if (a < r && r < b) pts.push_back(r);
    }
    std::sort(pts.begin(), pts.end());
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) acc += std::abs(prim(pts[j + 1]) - prim(pts[j]));
  }
  return acc;
}

std::string to_string(RealizeStatus s) {
  switch (s) {
    case RealizeStatus::ok: return "ok";
    case RealizeStatus::uniform: return "uniform";
    case RealizeStatus::inadmissible: return "inadmissible";
    case RealizeStatus::mesh_cap: return "mesh_cap";
  }
  return "?";
}

namespace {

ConvergenceRow realize_one(const CadlagDensity &f, long n, FillMode mode,
                           std::size_t max_cells, const Rational &d_lower,
                           const Rational &d_upper) {
  ConvergenceRow row;
  row.n = n;
  std::optional<Quantization> quant;
  try {
    quant = quantize(f, n, max_cells);
  } catch (const Error &e) {
    if (e.code() != "mesh_cap") throw;
    row.status = RealizeStatus::mesh_cap;
    row.note = e.what();
    return row;
  }
  const Quantization &q = *quant;
  row.k = q.k;
  row.H = q.H;
  row.sandwich_ok = q.sandwich_ok;
  row.tv_ok = q.tv_ok;
  const Rational &T = f.T();
  const auto report = validate_density(q.fn);

  auto compare = [&](const StepDensity &realized) {
    row.realized_equals_fn = same_function(realized, q.fn);
    row.sup_dist = sup_distance(realized, f);
    row.l1_exact = l1_distance_exact(realized, f);
    row.l1_dist = row.l1_exact ? row.l1_exact->get_d() : l1_distance(realized, f);
  };

  if (report.is_uniform) {
    row.status = RealizeStatus::uniform;
    row.note = "f_n is uniform; realized by the single-tent preset";
    compare(exact_law(uniform_preset(T), T).interior);
    row.atom_identity = true;
    return row;
  }
  if (!report.admissible()) {
    row.status = RealizeStatus::inadmissible;
    row.note = !report.passes_c ? "integral of f_n is not below 1; n too small"
                                : "f_n violates the total-variation condition";
    return row;
  }
  const BlockCollection blocks = peel_blocks(q.fn, q.H);
  const auto feas = feasibility(blocks);
  if (!feas.ok()) {
    row.status = RealizeStatus::inadmissible;
    row.note = feas.first_failure();
    return row;
  }
  const Layout layout = assign_components(blocks);
  const PiecewiseLinearPath path = build_path(layout, mode);
  const SupLocationLaw law = exact_law(path, T);
  row.m = blocks.m();
  row.B = blocks.count(BlockKind::base);
  row.d_n = blocks.d();
  for (const auto &c : layout.components) {
    row.max_lefts = std::max(row.max_lefts, c.lefts.size());
    row.max_rights = std::max(row.max_rights, c.rights.size());
  }
  row.atom_identity = atom_identity_check(law, blocks);
  row.d_in_interval = d_lower <= *row.d_n && *row.d_n <= d_upper;
  compare(law.interior);
  return row;
}

}  // namespace

ConvergenceReport realize_and_compare(const CadlagDensity &f, const std::vector<long> &ns,
                                      FillMode mode, std::size_t max_cells, unsigned threads) {
  const auto report = f.validate();
  if (!report.admissible())
    throw ArgumentError("candidate density " + f.name() + " fails conditions (a)-(c)");
  ConvergenceReport out;
  out.density = f.name();
  out.mode = mode;
  out.d_lower = (1 - report.integral) / (4 * f.sup());
  out.d_upper = 2 / report.inf_value;
  out.rows.resize(ns.size());

  const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(ns.size())));
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < ns.size(); i += nt)
      out.rows[i] = realize_one(f, ns[i], mode, max_cells, out.d_lower, out.d_upper);
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto &th : pool) th.join();
  }

  for (std::size_t i = out.rows.size(); i-- > 0;) {
    const auto &r = out.rows[i];
    if (r.status != RealizeStatus::ok || !r.d_in_interval) break;
    out.d_threshold = r.n;
  }
  return out;
}

}  // namespace suploc
