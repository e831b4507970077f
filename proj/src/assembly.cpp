#include "suploc/assembly.hpp"

#include <algorithm>

namespace suploc {

std::string to_string(FillMode m) {
  return m == FillMode::literal ? "literal" : "repaired";
}

FillMode fill_mode_from_string(const std::string &s) {
  if (s == "literal") return FillMode::literal;
  if (s == "repaired") return FillMode::repaired;
  throw SchemaError("unknown fill mode '" + s + "'");
}

Rational component_length(const Component &c, const Rational &d) {
  Rational len = c.base.length();
  if (c.central) len += c.central->length();
  for (const auto &b : c.lefts) len += b.length();
  for (const auto &b : c.rights) len += b.length();
  return d * Rational(static_cast<long>(c.block_count())) + len;
}

std::size_t Layout::max_side_count() const {
  std::size_t n = 0;
  for (const auto &c : components) n = std::max({n, c.lefts.size(), c.rights.size()});
  return n;
}

void PiecewiseLinearPath::check() const {
  if (!(period > 0)) throw StructuralError("path period must be positive");
  if (knots.empty() || knots.front().pos != 0)
    throw StructuralError("path must have a knot at position 0");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i].pos < knots[i + 1].pos))
      throw StructuralError("knot positions must increase strictly");
  if (!(knots.back().pos < period))
    throw StructuralError("knot positions must lie in [0, period)");
}

Rational PiecewiseLinearPath::operator()(const Rational &t) const {
  Rational s = t;
  if (s < 0 || s >= period) {
    Rational q = s / period;
    mpz_class k;
    mpz_fdiv_q(k.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    s -= Rational(k) * period;
  }
  auto it = std::upper_bound(knots.begin(), knots.end(), s,
                             [](const Rational &x, const Knot &k) { return x < k.pos; });
  const Knot &a = *(it - 1);
  const Knot b = it == knots.end() ? Knot{period, knots.front().value} : *it;
  return a.value + (b.value - a.value) * (s - a.pos) / (b.pos - a.pos);
}

Layout assign_components(const BlockCollection &c) {
  const auto report = feasibility(c);
  if (!report.ok()) throw InfeasibleError(report.first_failure());
  Layout layout{c.T, c.H, c.d(), {}};

  std::vector<Block> centrals, lefts, rights;
  for (const auto &b : c.blocks) {
    switch (b.kind) {
      case BlockKind::base:
        layout.components.push_back(Component{b, std::nullopt, {}, {}, 0});
        break;
      case BlockKind::central: centrals.push_back(b); break;
      case BlockKind::left: lefts.push_back(b); break;
      case BlockKind::right: rights.push_back(b); break;
    }
  }
  auto by_uv = [](const Block &a, const Block &b) {
    return a.u < b.u || (a.u == b.u && a.v < b.v);
  };
  std::stable_sort(centrals.begin(), centrals.end(), by_uv);
  std::stable_sort(lefts.begin(), lefts.end(),
                   [](const Block &a, const Block &b) { return a.v < b.v; });
  std::stable_sort(rights.begin(), rights.end(),
                   [](const Block &a, const Block &b) { return a.u > b.u; });

  auto &comps = layout.components;
  const std::size_t B = comps.size();
  for (std::size_t i = 0; i < centrals.size(); ++i) comps[i].central = centrals[i];
  for (std::size_t i = 0; i < lefts.size(); ++i) comps[i % B].lefts.push_back(lefts[i]);
  for (std::size_t i = 0; i < rights.size(); ++i) comps[i % B].rights.push_back(rights[i]);
  for (auto &comp : comps) comp.L = component_length(comp, layout.d);

  std::stable_sort(comps.begin(), comps.end(), [](const Component &a, const Component &b) {
    if (a.central.has_value() != b.central.has_value()) return a.central.has_value();
    return a.L > b.L;
  });
  return layout;
}

std::vector<Knot> build_component_profile(const Component &comp, const Rational &d,
                                          const Rational &T, FillMode mode) {
  std::vector<Knot> out{{Rational(0), Rational(2)}};
  Rational pos = 0;
  auto put = [&](const Rational &step, const Rational &value) {
    pos += step;
    out.push_back({pos, value});
  };
  const long l = static_cast<long>(comp.lefts.size());
  const long r = static_cast<long>(comp.rights.size());
  const bool one_sided_left = l > 0 && !comp.central && r == 0;
  const bool one_sided_right = l == 0 && !comp.central && r > 0;
  const bool repair = mode == FillMode::repaired;

  // Step 1: left blocks, values 2 - 2^{j-l} descending to 1.
  for (long j = 1; j <= l; ++j) {
    const Rational y = 2 - pow2(j - l);
    put(d, y);
    put(comp.lefts[static_cast<std::size_t>(j - 1)].v, y);
  }

  // Step 2: central block, three knots at 1/2.
  if (comp.central) {
    const Rational half(1, 2);
    put(d, half);
    put(comp.central->v, half);
    put(T - comp.central->u, half);
  }

  // Step 3: right blocks, values 2 - 2^{-(j-1)} ascending from 1.
  for (long j = 1; j <= r; ++j) {
    const Rational y = 2 - pow2(-(j - 1));
    if (j == 1 && !comp.central) {
      // No central: the first right knot sits a further T out.
      if (one_sided_right && repair) {
        put(d, y);
        put(T, y);
      } else {
        put(d + T, y);
      }
    } else {
      put(d, y);
    }
    put(T - comp.rights[static_cast<std::size_t>(j - 1)].u, y);
  }

  // Step 4: back to 2.
  if (comp.central || r > 0) {
    put(d, Rational(2));
  } else if (one_sided_left && repair) {
    put(T, Rational(1));
    put(d, Rational(2));
  } else {
    put(d + T, Rational(2));
  }
  return out;
}

std::vector<Knot> fill_gaps(const std::vector<Knot> &skeleton, const Rational &d) {
  if (skeleton.empty()) return {};
  if (!(d > 0)) throw StructuralError("fill spacing d must be positive");
  std::vector<Knot> out{skeleton.front()};
  for (std::size_t i = 0; i + 1 < skeleton.size(); ++i) {
    const Knot &a = skeleton[i];
    const Knot &b = skeleton[i + 1];
    if (!(a.pos < b.pos)) throw StructuralError("skeleton knots must increase strictly");
    if (a.value == b.value) {
      const Rational &y = a.value;
      const Rational width = b.pos - a.pos;
      const Rational mid = (a.pos + b.pos) / 2;
      const Rational bottom = y - width / (2 * d);
      if (bottom >= -1) {
        out.push_back({mid, bottom});
      } else {
        // Deep tent: slope -1/d down to 0, an inner tent of slope tau
        // bottoming out at >= -1, then the mirror image.
        if (y < 0) throw StructuralError("deep tent needs a nonnegative plateau value");
        const Rational inner = width - 2 * d * y;  // > 0 here
        const Rational tau = rmin(1 / d, 2 / inner);
        const Rational p0 = a.pos + d * y;
        const Rational p1 = b.pos - d * y;
        if (p0 > a.pos) out.push_back({p0, Rational(0)});
        out.push_back({mid, -tau * inner / 2});
        if (p1 < b.pos) out.push_back({p1, Rational(0)});
      }
    }
    out.push_back(b);
  }
  return out;
}

std::vector<Knot> build_skeleton(const Layout &layout, FillMode mode) {
  std::vector<Knot> skeleton{{Rational(0), Rational(2)}};
  Rational offset = 0;
  for (const auto &comp : layout.components) {
    auto profile = build_component_profile(comp, layout.d, layout.T, mode);
    if (profile.back().pos != comp.L)
      throw StructuralError("component profile length disagrees with its block accounting");
    for (std::size_t i = 1; i < profile.size(); ++i)
      skeleton.push_back({offset + profile[i].pos, profile[i].value});
    offset += comp.L;
  }
  if (offset != layout.period())
    throw StructuralError("component lengths do not sum to the period HT");
  return skeleton;
}

PiecewiseLinearPath build_path(const Layout &layout, FillMode mode) {
  auto knots = fill_gaps(build_skeleton(layout, mode), layout.d);
  knots.pop_back();  // (P,2) is the implicit wraparound of (0,2)
  PiecewiseLinearPath path{layout.period(), std::move(knots), mode};
  path.check();
  return path;
}

PathAudit audit_path(const PiecewiseLinearPath &path, const Layout &layout) {
  return audit_path(path, layout.d, layout.max_side_count());
}

PathAudit audit_path(const PiecewiseLinearPath &path, const Rational &d, std::size_t N) {
  path.check();
  PathAudit a;
  a.fill_mode = path.mode;
  a.N = N;
  const auto &k = path.knots;
  const std::size_t n = k.size();
  auto pos_at = [&](std::size_t i) { return i < n ? k[i].pos : path.period; };
  auto val_at = [&](std::size_t i) { return k[i % n].value; };
  auto fail = [&](const std::string &msg) { a.failures.push_back(msg); };
  auto seg_name = [&](std::size_t i) {
    return "[" + to_string(pos_at(i)) + ", " + to_string(pos_at(i + 1)) + "]";
  };

  a.min_value = k.front().value;
  a.max_value = k.front().value;
  for (const auto &kn : k) {
    a.min_value = rmin(a.min_value, kn.value);
    a.max_value = rmax(a.max_value, kn.value);
  }
  a.bounded = a.min_value >= -1 && a.max_value <= 2;
  if (!a.bounded) fail("values leave [-1, 2]");
  a.periodic_anchor = k.front().value == 2;
  if (!a.periodic_anchor) fail("x(0) != 2");

  const Rational lip = Rational(3, 2) / d;
  a.slope_floor_positive = 1 / (pow2(static_cast<long>(N)) * d);
  a.lipschitz = true;
  a.nowhere_constant = true;
  bool floors = true;
  bool have_pos = false, have_nonpos = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational slope = abs((val_at(i + 1) - val_at(i)) / (pos_at(i + 1) - pos_at(i)));
    a.max_slope = i == 0 ? slope : rmax(a.max_slope, slope);
    if (slope > lip) {
      a.lipschitz = false;
      fail("slope " + to_string(slope) + " exceeds 3/(2d) on " + seg_name(i));
    }
    if (slope == 0) {
      a.nowhere_constant = false;
      fail("constant segment " + seg_name(i));
    }
    if (rmax(val_at(i), val_at(i + 1)) > 0) {
      a.min_slope_positive = have_pos ? rmin(a.min_slope_positive, slope) : slope;
      have_pos = true;
      if (slope < a.slope_floor_positive) {
        floors = false;
        if (path.mode == FillMode::repaired)
          fail("slope " + to_string(slope) + " below 1/(2^N d) on " + seg_name(i));
      }
    } else {
      a.min_slope_nonpositive = have_nonpos ? rmin(a.min_slope_nonpositive, slope) : slope;
      have_nonpos = true;
      if (slope == 0) floors = false;
    }
  }
  // Floors are informational for literal paths.
  a.slope_floors = floors;

  // Local maxima: groups of equal consecutive knots that sit strictly above
  // both neighbouring groups (cyclically).
  std::vector<std::size_t> group_start;
  for (std::size_t i = 0; i < n; ++i)
    if (i == 0 || k[i].value != k[i - 1].value) group_start.push_back(i);
  if (group_start.size() > 1 && k.back().value == k.front().value) {
    // The last group wraps into the first one and starts the merged plateau.
    group_start.erase(group_start.begin());
  }
  const std::size_t g = group_start.size();
  for (std::size_t j = 0; j < g && g > 1; ++j) {
    const Rational &y = k[group_start[j]].value;
    const Rational &prev = k[group_start[(j + g - 1) % g]].value;
    const Rational &next = k[group_start[(j + 1) % g]].value;
    if (y > prev && y > next) {
      a.maxima_positions.push_back(k[group_start[j]].pos);
      a.maxima_values.insert(y);
    }
  }
  std::sort(a.maxima_positions.begin(), a.maxima_positions.end());
  a.n_local_maxima = a.maxima_positions.size();
  a.local_maxima_rate = Rational(static_cast<long>(a.n_local_maxima)) / path.period;
  const auto &mp = a.maxima_positions;
  if (mp.empty()) {
    a.min_maxima_gap = path.period;
  } else {
    a.min_maxima_gap = path.period - mp.back() + mp.front();
    for (std::size_t i = 0; i + 1 < mp.size(); ++i)
      a.min_maxima_gap = rmin(a.min_maxima_gap, mp[i + 1] - mp[i]);
  }
  a.maxima_separated = a.min_maxima_gap >= d;
  if (!a.maxima_separated)
    fail("local maxima only " + to_string(a.min_maxima_gap) + " apart, below d");
  a.maxima_values_ok = a.maxima_values.size() <= N + 3;
  if (!a.maxima_values_ok) fail("more than N+3 distinct local maximum values");
  return a;
}

PiecewiseLinearPath uniform_preset(const Rational &T) {
  if (!(T > 0)) throw ArgumentError("window length must be positive");
  return PiecewiseLinearPath{2 * T,
                             {{Rational(0), Rational(2)},
                              {T / 2, Rational(1)},
                              {T, Rational(2)},
                              {3 * T / 2, Rational(1)}},
                             FillMode::repaired};
}

}  // namespace suploc
