#include "suploc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace suploc {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

json rat(const Rational &q) { return to_string(q); }

json opt_rat(const std::optional<Rational> &q) { return q ? rat(*q) : json(nullptr); }

json rats(const std::vector<Rational> &v) {
  json a = json::array();
  for (const auto &q : v) a.push_back(rat(q));
  return a;
}

const json &field(const json &j, const char *key) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field \"") + key + "\"");
  return *it;
}

const json &array_field(const json &j, const char *key) {
  const json &a = field(j, key);
  if (!a.is_array()) throw SchemaError(std::string("field \"") + key + "\" must be an array");
  return a;
}

void check_schema(const json &j) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  auto it = j.find("schema");
  if (it != j.end() && (!it->is_string() || it->get<std::string>() != kSchemaVersion))
    throw SchemaError("unsupported schema version");
}

json pieces(const StepDensity &f) {
  json a = json::array();
  for (std::size_t i = 0; i < f.size(); ++i)
    a.push_back({{"until", rat(f.right(i))}, {"value", rat(f.value(i))}});
  return a;
}

StepDensity pieces_from_json(const Rational &T, const json &a) {
  std::vector<std::pair<Rational, Rational>> ps;
  for (const auto &p : a) ps.emplace_back(rational_from_json(p, "until"), rational_from_json(p, "value"));
  if (ps.empty()) throw SchemaError("no pieces");
  if (ps.back().first != T) throw SchemaError("pieces must end at T");
  try {
    return StepDensity::from_pieces(T, ps);
  } catch (const StructuralError &e) {
    throw SchemaError(e.what());
  }
}

std::string csv_header() { return std::string("# schema ") + kSchemaVersion + "\n"; }

}  // namespace

Rational rational_from_json(const json &j, const char *key) {
  const json &v = field(j, key);
  if (!v.is_string()) throw SchemaError(std::string("field \"") + key + "\" must be a rational string");
  return parse_rational(v.get<std::string>());
}

json to_json(const StepDensity &f) {
  return {{"schema", kSchemaVersion}, {"T", rat(f.T())}, {"pieces", pieces(f)}};
}

json to_json(const BlockCollection &c) {
  json blocks = json::array();
  for (const auto &b : c.blocks)
    blocks.push_back({{"kind", to_string(b.kind)}, {"u", rat(b.u)}, {"v", rat(b.v)}});
  json j = {{"schema", kSchemaVersion}, {"T", rat(c.T)}, {"H", rat(c.H)},
            {"m", c.m()}, {"d", nullptr}, {"blocks", blocks}};
  if (c.m() > 0) j["d"] = rat(c.d());
  return j;
}

json to_json(const PiecewiseLinearPath &p) {
  json knots = json::array();
  for (const auto &k : p.knots) knots.push_back(json::array({rat(k.pos), rat(k.value)}));
  return {{"schema", kSchemaVersion},
          {"period", rat(p.period)},
          {"mode", to_string(p.mode)},
          {"knots", knots}};
}

json to_json(const SupLocationLaw &law) {
  return {{"schema", kSchemaVersion},
          {"T", rat(law.T)},
          {"atom0", rat(law.atom0)},
          {"atomT", rat(law.atomT)},
          {"interior", pieces(law.interior)},
          {"provenance", to_string(law.provenance)},
          {"tie_measure", rat(law.tie_measure)}};
}

json to_json(const DensityReport &r) {
  return {{"schema", kSchemaVersion},
          {"tv", rat(r.tv)},
          {"f0plus", rat(r.f0plus)},
          {"fTminus", rat(r.fTminus)},
          {"inf", rat(r.inf_value)},
          {"integral", rat(r.integral)},
          {"is_uniform", r.is_uniform},
          {"passes_a", r.passes_a},
          {"passes_b", r.passes_b},
          {"passes_c", r.passes_c},
          {"passes_universal_bound", r.passes_universal_bound},
          {"admissible", r.admissible()}};
}

json to_json(const FeasibilityReport &r) {
  return {{"schema", kSchemaVersion}, {"proper", r.proper},         {"has_base", r.has_base},
          {"central_ok", r.central_ok}, {"d_positive", r.d_positive}, {"ok", r.ok()}};
}

json to_json(const PathAudit &a) {
  json values = json::array();
  for (const auto &v : a.maxima_values) values.push_back(rat(v));
  return {{"schema", kSchemaVersion},
          {"fill_mode", to_string(a.fill_mode)},
          {"n_local_maxima", a.n_local_maxima},
          {"maxima_positions", rats(a.maxima_positions)},
          {"min_maxima_gap", rat(a.min_maxima_gap)},
          {"maxima_values", values},
          {"min_value", rat(a.min_value)},
          {"max_value", rat(a.max_value)},
          {"max_slope", rat(a.max_slope)},
          {"min_slope_positive", rat(a.min_slope_positive)},
          {"min_slope_nonpositive", rat(a.min_slope_nonpositive)},
          {"slope_floor_positive", rat(a.slope_floor_positive)},
          {"N", a.N},
          {"local_maxima_rate", rat(a.local_maxima_rate)},
          {"bounded", a.bounded},
          {"lipschitz", a.lipschitz},
          {"slope_floors", a.slope_floors},
          {"maxima_separated", a.maxima_separated},
          {"maxima_values_ok", a.maxima_values_ok},
          {"nowhere_constant", a.nowhere_constant},
          {"periodic_anchor", a.periodic_anchor},
          {"failures", a.failures},
          {"ok", a.ok()}};
}

json to_json(const ConvergenceReport &r) {
  json rows = json::array();
  for (const auto &row : r.rows)
    rows.push_back({{"n", row.n},
                    {"status", to_string(row.status)},
                    {"k", row.k},
                    {"H", rat(row.H)},
                    {"m", row.m},
                    {"B", row.B},
                    {"d_n", opt_rat(row.d_n)},
                    {"sup_dist", rat(row.sup_dist)},
                    {"L1_dist", format_double(row.l1_dist)},
                    {"L1_exact", opt_rat(row.l1_exact)},
                    {"max_lefts_per_component", row.max_lefts},
                    {"max_rights_per_component", row.max_rights},
                    {"realized_equals_fn", row.realized_equals_fn},
                    {"atom_identity", row.atom_identity},
                    {"sandwich_ok", row.sandwich_ok},
                    {"tv_ok", row.tv_ok},
                    {"d_in_interval", row.d_in_interval},
                    {"note", row.note}});
  return {{"schema", kSchemaVersion},
          {"density", r.density},
          {"mode", to_string(r.mode)},
          {"d_lower", rat(r.d_lower)},
          {"d_upper", rat(r.d_upper)},
          {"d_threshold", r.d_threshold ? json(*r.d_threshold) : json(nullptr)},
          {"rows", rows}};
}

json to_json(const LawDistance &d) {
  return {{"atom0_diff", rat(d.atom0_diff)},
          {"atomT_diff", rat(d.atomT_diff)},
          {"interior_L1", rat(d.interior_L1)},
          {"interior_sup", rat(d.interior_sup)}};
}

json summary_json(const EmpiricalLaw &e) {
  return {{"schema", kSchemaVersion},
          {"T", format_double(e.T)},
          {"n_paths", e.n_paths},
          {"n_bins", e.n_bins()},
          {"atom0_hat", format_double(e.atom0_hat)},
          {"atomT_hat", format_double(e.atomT_hat)},
          {"seed", e.seed},
          {"generator", e.generator},
          {"warnings", e.warnings}};
}

StepDensity density_from_json(const json &j) {
  check_schema(j);
  return pieces_from_json(rational_from_json(j, "T"), array_field(j, "pieces"));
}

BlockCollection blocks_from_json(const json &j) {
  check_schema(j);
  BlockCollection c{rational_from_json(j, "T"), rational_from_json(j, "H"), {}};
  for (const auto &b : array_field(j, "blocks")) {
    Block blk;
    try {
      blk = make_block(rational_from_json(b, "u"), rational_from_json(b, "v"), c.T);
    } catch (const StructuralError &e) {
      throw SchemaError(e.what());
    }
    if (b.contains("kind")) {
      if (!b["kind"].is_string()) throw SchemaError("block kind must be a string");
      if (block_kind_from_string(b["kind"].get<std::string>()) != blk.kind)
        throw SchemaError("block kind does not match its endpoints");
    }
    c.blocks.push_back(blk);
  }
  return c;
}

PiecewiseLinearPath path_from_json(const json &j) {
  check_schema(j);
  PiecewiseLinearPath p;
  p.period = rational_from_json(j, "period");
  if (j.contains("mode")) p.mode = fill_mode_from_string(field(j, "mode").get<std::string>());
  for (const auto &k : array_field(j, "knots")) {
    if (k.is_object()) {
      p.knots.push_back({rational_from_json(k, "pos"), rational_from_json(k, "value")});
      continue;
    }
    if (!k.is_array() || k.size() != 2 || !k[0].is_string() || !k[1].is_string())
      throw SchemaError("a knot is [\"pos\", \"value\"]");
    p.knots.push_back({parse_rational(k[0].get<std::string>()), parse_rational(k[1].get<std::string>())});
  }
  try {
    p.check();
  } catch (const StructuralError &e) {
    throw SchemaError(e.what());
  }
  return p;
}

SupLocationLaw law_from_json(const json &j) {
  check_schema(j);
  const Rational T = rational_from_json(j, "T");
  SupLocationLaw law{T, rational_from_json(j, "atom0"), rational_from_json(j, "atomT"),
                     pieces_from_json(T, array_field(j, "interior")),
                     Provenance::envelope, Rational(0)};
  if (j.contains("provenance"))
    law.provenance = provenance_from_string(field(j, "provenance").get<std::string>());
  if (j.contains("tie_measure")) law.tie_measure = rational_from_json(j, "tie_measure");
  return law;
}

std::string convergence_csv(const ConvergenceReport &r) {
  std::ostringstream out;
  out << csv_header()
      << "n,H,m,d_n,sup_dist,L1_dist,max_lefts_per_component,max_rights_per_component\n";
  for (const auto &row : r.rows) {
    out << row.n << ',' << to_string(row.H) << ',' << row.m << ','
        << (row.d_n ? to_string(*row.d_n) : std::string()) << ',' << to_string(row.sup_dist)
        << ',' << format_double(row.l1_dist) << ',' << row.max_lefts << ',' << row.max_rights
        << '\n';
  }
  return out.str();
}

std::string bins_csv(const EmpiricalLaw &e) {
  std::ostringstream out;
  out << csv_header() << "kind,lo,hi,mass,density\n";
  const std::string zero = format_double(0.0), T = format_double(e.T);
  out << "atom0," << zero << ',' << zero << ',' << format_double(e.atom0_hat) << ",\n";
  for (std::size_t i = 0; i < e.n_bins(); ++i)
    out << "bin," << format_double(e.bin_edges[i]) << ',' << format_double(e.bin_edges[i + 1])
        << ',' << format_double(e.bin_masses[i]) << ',' << format_double(e.density(i)) << '\n';
  out << "atomT," << T << ',' << T << ',' << format_double(e.atomT_hat) << ",\n";
  return out.str();
}

std::string law_csv(const SupLocationLaw &law) {
  std::ostringstream out;
  out << csv_header() << "kind,lo,hi,mass,density\n";
  out << "atom0,0,0," << to_string(law.atom0) << ",\n";
  const StepDensity &f = law.interior;
  for (std::size_t i = 0; i < f.size(); ++i)
    out << "bin," << to_string(f.left(i)) << ',' << to_string(f.right(i)) << ','
        << to_string(Rational(f.value(i) * (f.right(i) - f.left(i)))) << ','
        << to_string(f.value(i)) << '\n';
  out << "atomT," << to_string(law.T) << ',' << to_string(law.T) << ',' << to_string(law.atomT)
      << ",\n";
  return out.str();
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
}

}  // namespace suploc
