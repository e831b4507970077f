#include "suploc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "suploc/oracle.hpp"
#include "suploc/rng.hpp"

namespace suploc {

std::string to_string(Innovations i) {
  switch (i) {
    case Innovations::uniform: return "uniform";
    case Innovations::exponential: return "exponential";
    case Innovations::normal: return "normal";
    case Innovations::rademacher: return "rademacher";
    case Innovations::constant: return "constant";
  }
  return "unknown";
}

Innovations innovations_from_string(const std::string &s) {
  for (auto i : {Innovations::uniform, Innovations::exponential, Innovations::normal,
                 Innovations::rademacher, Innovations::constant})
    if (to_string(i) == s) return i;
  throw ArgumentError("unknown innovation law: " + s);
}

void MixingProcessSpec::check() const {
  if (!(w > 0)) throw ArgumentError("kernel width w must be positive");
  if (!(h > 0)) throw ArgumentError("grid step h must be positive");
  if (h > w / 10 * (1 + 1e-12)) throw ArgumentError("grid step h must be at most w/10");
  if (innovations == Innovations::constant)
    throw ArgumentError("constant innovations give a degenerate supremum");
}

namespace {

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled by exactly one worker and writes only its own slot.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F body) {
  const unsigned nt = static_cast<unsigned>(
      std::max<std::size_t>(1, std::min<std::size_t>(std::max(1u, threads), n)));
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nt) body(i);
    });
  for (auto &th : pool) th.join();
}

std::vector<double> uniform_edges(double T, std::size_t n_bins) {
  std::vector<double> edges(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    edges[i] = T * static_cast<double>(i) / static_cast<double>(n_bins);
  edges[n_bins] = T;
  return edges;
}

std::size_t bin_of(double tau, double T, std::size_t n_bins) {
  auto b = static_cast<std::size_t>(tau / T * static_cast<double>(n_bins));
  return std::min(b, n_bins - 1);
}

double draw(Innovations law, PathStream &rng, std::normal_distribution<double> &normal) {
  switch (law) {
    case Innovations::uniform: return rng.uniform();
    case Innovations::exponential: return -std::log1p(-rng.uniform());
    case Innovations::normal: return normal(rng);
    case Innovations::rademacher: return (rng() >> 63) ? 1.0 : -1.0;
    case Innovations::constant: return 1.0;
  }
  return 0.0;
}

}  // namespace

EmpiricalLaw sample_shift_tau(const PiecewiseLinearPath &path, const Rational &T,
                              std::size_t n_paths, std::uint64_t seed, std::size_t n_bins,
                              unsigned threads) {
  if (n_paths == 0) throw ArgumentError("n_paths must be at least 1");
  if (n_bins == 0) throw ArgumentError("n_bins must be at least 1");
  const ShiftArgmax argmax(path, T);
  const double P = argmax.period();
  const double Td = argmax.window();

  std::vector<double> taus(n_paths), sups(n_paths);
  std::vector<ShiftArgmax::Winner> winners(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t i) {
    PathStream rng(seed, i);
    const double U = rng.uniform() * P;
    double s = P - U;
    if (s >= P) s -= P;
    const auto r = argmax(s);
    taus[i] = r.tau;
    sups[i] = r.value;
    winners[i] = r.winner;
  });

  EmpiricalLaw e;
  e.T = Td;
  e.n_paths = n_paths;
  e.seed = seed;
  e.generator = PathStream::generator_id;
  e.bin_edges = uniform_edges(Td, n_bins);
  std::vector<std::size_t> counts(n_bins, 0);
  std::size_t a0 = 0, aT = 0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    switch (winners[i]) {
      case ShiftArgmax::Winner::left: ++a0; break;
      case ShiftArgmax::Winner::right: ++aT; break;
      case ShiftArgmax::Winner::knot: ++counts[bin_of(taus[i], Td, n_bins)]; break;
    }
  }
  const double n = static_cast<double>(n_paths);
  e.bin_masses.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) e.bin_masses[b] = static_cast<double>(counts[b]) / n;
  e.atom0_hat = static_cast<double>(a0) / n;
  e.atomT_hat = static_cast<double>(aT) / n;
  e.taus = std::move(taus);
  e.sup_values = std::move(sups);
  return e;
}

EmpiricalLaw simulate_mixing_tau(const MixingProcessSpec &spec, double T, std::size_t n_paths,
                                 std::size_t n_bins, unsigned threads) {
  spec.check();
  if (!(T >= 10 * spec.w)) throw ArgumentError("window T must be at least 10 w");
  if (n_paths == 0) throw ArgumentError("n_paths must be at least 1");
  if (n_bins == 0) throw ArgumentError("n_bins must be at least 1");

  // Grid t_i = i T / N with N = ceil(T / h), so the step never exceeds h and
  // both window endpoints lie on the grid.
  const auto N = static_cast<std::size_t>(std::ceil(T / spec.h - 1e-9));
  const double step = T / static_cast<double>(N);
  const double w = spec.w;
  const auto n_knots = static_cast<std::size_t>(std::floor(T / w)) + 3;

  std::vector<double> taus(n_paths), sups(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t p) {
    PathStream rng(spec.seed, p);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double theta = rng.uniform() * w;
    // Bump k sits at (k - 1) w + theta for k = 0 .. n_knots, covering [-w, T + w].
    std::vector<double> eps(n_knots + 1);
    for (auto &x : eps) x = draw(spec.innovations, rng, normal);

    auto X = [&](double t) {
      const double y = (t - theta) / w + 1.0;
      auto k = static_cast<std::size_t>(std::floor(y));
      k = std::min(k, n_knots - 1);
      const double frac = y - static_cast<double>(k);
      return eps[k] * (1.0 - frac) + eps[k + 1] * frac;
    };

    std::size_t best = 0;
    double best_v = -INFINITY;
    for (std::size_t i = 0; i <= N; ++i) {
      const double t = i == N ? T : step * static_cast<double>(i);
      const double v = X(spec.time_reversed ? T - t : t);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    taus[p] = best == N ? T : step * static_cast<double>(best);
    sups[p] = best_v;
  });

  EmpiricalLaw e;
  e.T = T;
  e.n_paths = n_paths;
  e.seed = spec.seed;
  e.generator = PathStream::generator_id;
  e.bin_edges = uniform_edges(T, n_bins);
  std::vector<std::size_t> counts(n_bins, 0);
  for (double t : taus) ++counts[bin_of(t, T, n_bins)];
  e.bin_masses.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b)
    e.bin_masses[b] = static_cast<double>(counts[b]) / static_cast<double>(n_paths);
  e.taus = std::move(taus);
  e.sup_values = std::move(sups);
  if (spec.innovations == Innovations::rademacher)
    e.warnings.push_back("discrete innovations: the supremum has atoms");
  return e;
}

std::vector<double> normalized_taus(const EmpiricalLaw &e) {
  std::vector<double> out(e.taus.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = e.taus[i] / e.T;
  return out;
}

}  // namespace suploc
