#include "suploc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <thread>

namespace suploc {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::envelope: return "envelope";
    case Provenance::grid: return "grid";
    case Provenance::montecarlo: return "montecarlo";
  }
  return "?";
}

Provenance provenance_from_string(const std::string &s) {
  if (s == "envelope") return Provenance::envelope;
  if (s == "grid") return Provenance::grid;
  if (s == "montecarlo") return Provenance::montecarlo;
  throw SchemaError("unknown provenance '" + s + "'");
}

namespace {

using ArgmaxTable = std::vector<std::vector<std::uint32_t>>;

template <class Value>
std::uint32_t leftmost_better(const std::vector<Value> &v, std::uint32_t a, std::uint32_t b) {
  if (v[b] > v[a]) return b;
  if (v[a] > v[b]) return a;
  return std::min(a, b);
}

/// Sparse table of leftmost argmax indices over power-of-two ranges.
template <class Value>
ArgmaxTable build_argmax_table(const std::vector<Value> &v) {
  const std::size_t n = v.size();
  ArgmaxTable table(1, std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) table[0][i] = static_cast<std::uint32_t>(i);
  for (std::size_t w = 1; 2 * w <= n; w *= 2) {
    const auto &prev = table.back();
    std::vector<std::uint32_t> next(n - 2 * w + 1);
    for (std::size_t i = 0; i + 2 * w <= n; ++i) next[i] = leftmost_better(v, prev[i], prev[i + w]);
    table.push_back(std::move(next));
  }
  return table;
}

/// Leftmost argmax over [lo, hi), hi > lo.
template <class Value>
std::size_t argmax_query(const ArgmaxTable &table, const std::vector<Value> &v,
                         std::size_t lo, std::size_t hi) {
  const std::size_t level = std::bit_width(hi - lo) - 1;
  const std::size_t w = std::size_t{1} << level;
  return leftmost_better(v, table[level][lo], table[level][hi - w]);
}

/// Knots over two periods plus the closing knot at 2P, so that every window
/// [s, s+T] with 0 <= s < P lies inside the unrolled range.
template <class Scalar, class Convert>
void unroll(const PiecewiseLinearPath &path, Convert conv, std::vector<Scalar> &pos,
            std::vector<Scalar> &val) {
  const std::size_t n = path.knots.size();
  pos.reserve(2 * n + 1);
  val.reserve(2 * n + 1);
  for (std::size_t rep = 0; rep < 2; ++rep) {
    for (const auto &k : path.knots) {
      pos.push_back(conv(k.pos + Rational(static_cast<long>(rep)) * path.period));
      val.push_back(conv(k.value));
    }
  }
  pos.push_back(conv(2 * path.period));
  val.push_back(conv(path.knots.front().value));
}

struct Line {
  Rational intercept;
  Rational slope;
  Rational operator()(const Rational &s) const { return intercept + slope * s; }
};

Line segment_line(const std::vector<Rational> &pos, const std::vector<Rational> &val,
                  std::size_t i) {
  Rational slope = (val[i + 1] - val[i]) / (pos[i + 1] - pos[i]);
  return Line{val[i] - slope * pos[i], slope};
}

void add_root(const Line &a, const Line &b, const Rational &lo, const Rational &hi,
              std::vector<Rational> &cuts) {
  if (a.slope == b.slope) return;
  Rational s = (b.intercept - a.intercept) / (a.slope - b.slope);
  if (lo < s && s < hi) cuts.push_back(s);
}

}  // namespace

SupLocationLaw exact_law(const PiecewiseLinearPath &path, const Rational &T) {
  path.check();
  const Rational &P = path.period;
  if (!(T > 0 && T < P))
    throw ArgumentError("window length T must satisfy 0 < T < period");

  std::vector<Rational> pos, val;
  unroll<Rational>(path, [](const Rational &q) { return q; }, pos, val);
  const ArgmaxTable argmax = build_argmax_table(val);

  std::vector<Rational> bps{Rational(0), P};
  for (const auto &k : path.knots) {
    bps.push_back(k.pos);
    Rational q = k.pos - T;
    if (q < 0) q += P;
    bps.push_back(q);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  const Rational invP = 1 / P;
  Rational atom0 = 0, atomT = 0, ties = 0;
  std::map<Rational, Rational> diff;
  diff[Rational(0)];
  diff[T];

  std::vector<Rational> cuts;
  for (std::size_t e = 0; e + 1 < bps.size(); ++e) {
    const Rational &sa = bps[e];
    const Rational &sb = bps[e + 1];
    const Rational mid = (sa + sb) / 2;
    const Rational mid_right = mid + T;
    const std::size_t lo = static_cast<std::size_t>(
        std::upper_bound(pos.begin(), pos.end(), mid) - pos.begin());
    const std::size_t hi = static_cast<std::size_t>(
        std::lower_bound(pos.begin(), pos.end(), mid_right) - pos.begin());

    const Line left = segment_line(pos, val, lo - 1);
    Line right = segment_line(pos, val, hi - 1);
    right.intercept += right.slope * T;  // r(s) = x(s + T)

    const bool has_knot = lo < hi;
    std::size_t kmax = 0;
    bool knot_tie = false;
    Line knot{0, 0};
    if (has_knot) {
      kmax = argmax_query(argmax, val, lo, hi);
      knot.intercept = val[kmax];
      if (kmax + 1 < hi) knot_tie = val[argmax_query(argmax, val, kmax + 1, hi)] == val[kmax];
    }

    cuts.assign({sa, sb});
    add_root(left, right, sa, sb, cuts);
    if (has_knot) {
      add_root(left, knot, sa, sb, cuts);
      add_root(right, knot, sa, sb, cuts);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const Rational &c0 = cuts[c];
      const Rational &c1 = cuts[c + 1];
      const Rational s = (c0 + c1) / 2;
      const Rational lv = left(s);
      const Rational rv = right(s);
      const Rational len = c1 - c0;
      // Leftmost wins ties: left endpoint, then knots, then right endpoint.
      if ((!has_knot || lv >= knot.intercept) && lv >= rv) {
        atom0 += len * invP;
        if ((has_knot && lv == knot.intercept) || lv == rv) ties += len * invP;
      } else if (has_knot && knot.intercept >= rv) {
        const Rational &q = pos[kmax];
        diff[q - c1] += invP;
        diff[q - c0] -= invP;
        if (knot_tie || knot.intercept == rv) ties += len * invP;
      } else {
        atomT += len * invP;
      }
    }
  }

  std::vector<Rational> edges, values;
  Rational running = 0;
  for (const auto &[t, dv] : diff) {
    if (t == T) break;
    running += dv;
    edges.push_back(t);
    values.push_back(running);
  }
  edges.push_back(T);
  SupLocationLaw law{T, atom0, atomT,
                     StepDensity(std::move(edges), std::move(values)).canonical(),
                     Provenance::envelope, ties};
  if (law.total_mass() != 1)
    throw StructuralError("internal: exact law does not have unit mass");
  return law;
}

bool atom_identity_check(const SupLocationLaw &law, const BlockCollection &c) {
  return law.atom0 + law.atomT ==
         Rational(static_cast<long>(c.m())) * c.d() / (c.H * c.T);
}

SupLocationLaw grid_law(const PiecewiseLinearPath &path, const Rational &T,
                        std::size_t n_grid, std::size_t n_shift, std::size_t n_bins,
                        unsigned threads) {
  path.check();
  if (n_grid < 1 || n_shift < 1 || n_bins < 1)
    throw ArgumentError("grid_law needs n_grid, n_shift, n_bins >= 1");
  if (!(T > 0 && T < path.period))
    throw ArgumentError("window length T must satisfy 0 < T < period");
  std::vector<double> pos, val;
  unroll<double>(path, [](const Rational &q) { return q.get_d(); }, pos, val);
  const double P = path.period.get_d();
  const double Td = T.get_d();

  struct Counts {
    std::uint64_t atom0 = 0, atomT = 0;
    std::vector<std::uint64_t> bins;
  };
  auto run = [&](std::size_t first, std::size_t last, Counts &out) {
    out.bins.assign(n_bins, 0);
    for (std::size_t i = first; i < last; ++i) {
      const double s = static_cast<double>(i) * P / static_cast<double>(n_shift);
      std::size_t next = static_cast<std::size_t>(
          std::upper_bound(pos.begin(), pos.end(), s) - pos.begin());
      auto eval = [&](double t) {
        const std::size_t j = next - 1;
        return val[j] + (val[j + 1] - val[j]) * (t - pos[j]) / (pos[j + 1] - pos[j]);
      };
      enum { at_left, inside, at_right } kind = at_left;
      double best = eval(s), best_t = s;
      for (std::size_t j = 1; j <= n_grid; ++j) {
        const double t = j == n_grid ? s + Td
                                     : s + Td * static_cast<double>(j) / static_cast<double>(n_grid);
        while (pos[next] < t) {
          if (val[next] > best) {
            best = val[next];
            best_t = pos[next];
            kind = inside;
          }
          ++next;
        }
        const double v = eval(t);
        if (v > best) {
          best = v;
          best_t = t;
          kind = j == n_grid ? at_right : inside;
        }
      }
      if (kind == at_left) {
        ++out.atom0;
      } else if (kind == at_right) {
        ++out.atomT;
      } else {
        const double frac = (best_t - s) / Td;
        auto b = static_cast<std::size_t>(std::max(0.0, frac * static_cast<double>(n_bins)));
        ++out.bins[std::min(b, n_bins - 1)];
      }
    }
  };

  const unsigned nt = std::max(1u, threads);
  std::vector<Counts> parts(nt);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) {
    const std::size_t first = n_shift * t / nt, last = n_shift * (t + 1) / nt;
    if (nt == 1)
      run(first, last, parts[t]);
    else
      pool.emplace_back(run, first, last, std::ref(parts[t]));
  }
  for (auto &th : pool) th.join();

  Counts total;
  total.bins.assign(n_bins, 0);
  for (const auto &p : parts) {
    total.atom0 += p.atom0;
    total.atomT += p.atomT;
    for (std::size_t b = 0; b < n_bins; ++b) total.bins[b] += p.bins[b];
  }
  const Rational N(static_cast<unsigned long>(n_shift));
  const Rational width = T / Rational(static_cast<unsigned long>(n_bins));
  std::vector<Rational> edges, values;
  for (std::size_t b = 0; b < n_bins; ++b) {
    edges.push_back(width * Rational(static_cast<unsigned long>(b)));
    values.push_back(Rational(static_cast<unsigned long>(total.bins[b])) / (N * width));
  }
  edges.push_back(T);
  return SupLocationLaw{T,
                        Rational(static_cast<unsigned long>(total.atom0)) / N,
                        Rational(static_cast<unsigned long>(total.atomT)) / N,
                        StepDensity(std::move(edges), std::move(values)),
                        Provenance::grid,
                        Rational(0)};
}

StepDensity bin_average(const StepDensity &f, const std::vector<Rational> &edges) {
  if (edges.size() < 2 || edges.front() != 0 || edges.back() != f.T())
    throw ArgumentError("bin edges must span [0, T]");
  std::vector<Rational> values;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    values.push_back(f.integral(edges[i], edges[i + 1]) / (edges[i + 1] - edges[i]));
  return StepDensity(edges, std::move(values));
}

namespace {

std::vector<Rational> refinement(const StepDensity &a, const StepDensity &b) {
  std::vector<Rational> cuts = a.breakpoints();
  cuts.insert(cuts.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

Rational l1_distance(const StepDensity &a, const StepDensity &b) {
  if (a.T() != b.T()) throw ArgumentError("densities live on different windows");
  Rational acc = 0;
  const auto cuts = refinement(a, b);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += abs(a(cuts[i]) - b(cuts[i])) * (cuts[i + 1] - cuts[i]);
  return acc;
}

Rational sup_distance(const StepDensity &a, const StepDensity &b) {
  if (a.T() != b.T()) throw ArgumentError("densities live on different windows");
  Rational acc = 0;
  const auto cuts = refinement(a, b);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc = rmax(acc, abs(a(cuts[i]) - b(cuts[i])));
  return acc;
}

LawDistance law_distance(const SupLocationLaw &a, const SupLocationLaw &b) {
  if (a.T != b.T) throw ArgumentError("laws live on different windows");
  const bool a_binned = a.provenance != Provenance::envelope;
  const bool b_binned = b.provenance != Provenance::envelope;
  StepDensity fa = a.interior, fb = b.interior;
  if (a_binned && !b_binned) fb = bin_average(fb, fa.breakpoints());
  if (b_binned && !a_binned) fa = bin_average(fa, fb.breakpoints());
  return LawDistance{abs(a.atom0 - b.atom0), abs(a.atomT - b.atomT), l1_distance(fa, fb),
                     sup_distance(fa, fb)};
}

ShiftArgmax::ShiftArgmax(const PiecewiseLinearPath &path, const Rational &T)
    : period_(path.period.get_d()), T_(T.get_d()) {
  path.check();
  if (!(T > 0 && T < path.period))
    throw ArgumentError("window length T must satisfy 0 < T < period");
  unroll<double>(path, [](const Rational &q) { return q.get_d(); }, pos_, val_);
  sparse_ = build_argmax_table(val_);
}

double ShiftArgmax::eval_segment(std::size_t i, double t) const {
  return val_[i] + (val_[i + 1] - val_[i]) * (t - pos_[i]) / (pos_[i + 1] - pos_[i]);
}

std::size_t ShiftArgmax::range_max(std::size_t lo, std::size_t hi) const {
  return argmax_query(sparse_, val_, lo, hi);
}

ShiftArgmax::Result ShiftArgmax::operator()(double s) const {
  const std::size_t lo =
      static_cast<std::size_t>(std::upper_bound(pos_.begin(), pos_.end(), s) - pos_.begin());
  const std::size_t hi = static_cast<std::size_t>(
      std::lower_bound(pos_.begin(), pos_.end(), s + T_) - pos_.begin());
  const double lv = eval_segment(lo - 1, s);
  const double rv = eval_segment(hi - 1, s + T_);
  if (lo < hi) {
    const std::size_t k = range_max(lo, hi);
    const double kv = val_[k];
    if (lv >= kv && lv >= rv) return {0.0, lv, Winner::left};
    if (kv >= rv) return {pos_[k] - s, kv, Winner::knot};
    return {T_, rv, Winner::right};
  }
  if (lv >= rv) return {0.0, lv, Winner::left};
  return {T_, rv, Winner::right};
}

}  // namespace suploc
