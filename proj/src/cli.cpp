#include "suploc/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "suploc/approximation.hpp"
#include "suploc/io.hpp"
#include "suploc/oracle.hpp"
#include "suploc/simulate.hpp"

namespace suploc {

namespace fs = std::filesystem;

std::string resolve_out_dir(const RunConfig &cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char *env = std::getenv(kOutDirEnv); env && *env) return env;
  return "suploc-out";
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_json(const RunConfig &c) {
  return {{"subcommand", c.subcommand},
          {"inputs", c.inputs},
          {"mode", to_string(c.mode)},
          {"seed", c.seed},
          {"threads", c.threads},
          {"out_dir", resolve_out_dir(c)},
          {"window", c.window ? json(*c.window) : json(nullptr)},
          {"H", c.H ? json(*c.H) : json(nullptr)},
          {"target", c.target ? json(*c.target) : json(nullptr)},
          {"grid_check", c.grid_check},
          {"n_grid", c.n_grid},
          {"n_shift", c.n_shift},
          {"preset", c.preset},
          {"ns", c.ns},
          {"max_cells", c.max_cells},
          {"T", format_double(c.T)},
          {"w", format_double(c.w)},
          {"h", format_double(c.h)},
          {"n_paths", c.n_paths},
          {"n_bins", c.n_bins},
          {"innovations", c.innovations},
          {"eps", format_double(c.eps)},
          {"time_reversed", c.time_reversed}};
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

json checks_json(const std::vector<Check> &checks) {
  json a = json::array();
  for (const auto &c : checks) a.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return a;
}

bool all_pass(const std::vector<Check> &checks) {
  for (const auto &c : checks)
    if (!c.pass) return false;
  return true;
}

void print_checks(std::ostream &out, const std::vector<Check> &checks) {
  for (const auto &c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
}

// Collects artifacts written by one run.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  void write(const std::string &name, const std::string &text) {
    fs::create_directories(dir_);
    write_text_file((dir_ / name).string(), text);
    names_.push_back(name);
  }
  void write(const std::string &name, const json &j) { write(name, j.dump(2) + "\n"); }
  const std::vector<std::string> &names() const { return names_; }
  const fs::path &dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string require_input(const RunConfig &cfg) {
  if (cfg.inputs.empty()) throw ArgumentError(cfg.subcommand + " needs an input file");
  return cfg.inputs.front();
}

enum class InputKind { density, blocks, path };

InputKind input_kind(const json &j) {
  if (j.is_object()) {
    if (j.contains("pieces")) return InputKind::density;
    if (j.contains("blocks")) return InputKind::blocks;
    if (j.contains("knots")) return InputKind::path;
  }
  throw SchemaError("input is neither a density, a block collection nor a path");
}

struct Realization {
  std::optional<BlockCollection> blocks;
  std::optional<Layout> layout;
  PiecewiseLinearPath path;
};

Realization realize_blocks(const BlockCollection &c, FillMode mode) {
  const auto feas = feasibility(c);
  if (!feas.ok()) throw InfeasibleError(feas.first_failure());
  Layout layout = assign_components(c);
  PiecewiseLinearPath path = build_path(layout, mode);
  return {c, std::move(layout), std::move(path)};
}

Realization realize_density(const StepDensity &f, const RunConfig &cfg) {
  const auto report = validate_density(f);
  if (report.is_uniform) return {std::nullopt, std::nullopt, uniform_preset(f.T())};
  if (!report.admissible()) throw ArgumentError("density is not admissible");
  const Rational H = cfg.H ? parse_rational(*cfg.H) : choose_period(f);
  return realize_blocks(peel_blocks(f, H), cfg.mode);
}

std::string describe_law(const SupLocationLaw &law) {
  std::ostringstream s;
  s << "atom0=" << to_string(law.atom0) << " atomT=" << to_string(law.atomT) << " interior=";
  const StepDensity &f = law.interior;
  for (std::size_t i = 0; i < f.size(); ++i)
    s << (i ? "," : "") << '[' << to_string(f.left(i)) << ',' << to_string(f.right(i))
      << "):" << to_string(f.value(i));
  return s.str();
}

Check law_matches_target(const SupLocationLaw &law, const StepDensity &target) {
  if (same_function(law.interior, target)) return {"law_matches_target", true, ""};
  const Rational l1 = l1_distance(law.interior, target);
  return {"law_matches_target", false,
          "interior density differs from target (L1 " + to_string(l1) + ", sup " +
              to_string(sup_distance(law.interior, target)) + "); realized " + describe_law(law)};
}

int cmd_validate(const RunConfig &cfg, Outputs &o, std::ostream &out) {
  const StepDensity f = density_from_json(read_json_file(require_input(cfg)));
  const auto r = validate_density(f);
  o.write("density_report.json", to_json(r));
  print_checks(out, {{"passes_a", r.passes_a, "tv " + to_string(r.tv)},
                     {"passes_b", r.passes_b, "inf " + to_string(r.inf_value)},
                     {"passes_c", r.passes_c, "integral " + to_string(r.integral)},
                     {"universal_bound", r.passes_universal_bound, ""}});
  return r.admissible() ? 0 : 1;
}

int cmd_decompose(const RunConfig &cfg, Outputs &o, std::ostream &out) {
  const StepDensity f = density_from_json(read_json_file(require_input(cfg)));
  const auto r = validate_density(f);
  if (r.is_uniform) throw ArgumentError("the uniform density has no block decomposition");
  if (!r.admissible()) throw ArgumentError("density is not admissible");
  const Rational H = cfg.H ? parse_rational(*cfg.H) : choose_period(f);
  const BlockCollection c = peel_blocks(f, H);
  const auto feas = feasibility(c);
  json j = to_json(c);
  j["feasibility"] = to_json(feas);
  o.write("blocks.json", j);
  out << "H=" << to_string(c.H) << " m=" << c.m() << " d=" << to_string(c.d())
      << " base=" << c.count(BlockKind::base) << " left=" << c.count(BlockKind::left)
      << " right=" << c.count(BlockKind::right) << " central=" << c.count(BlockKind::central)
      << '\n';
  print_checks(out, {{"feasible", feas.ok(), feas.ok() ? "" : feas.first_failure()}});
  return feas.ok() ? 0 : 1;
}

int cmd_build(const RunConfig &cfg, Outputs &o, std::ostream &out) {
  const json in = read_json_file(require_input(cfg));
  Realization r;
  if (input_kind(in) == InputKind::blocks) {
    r = realize_blocks(blocks_from_json(in), cfg.mode);
  } else if (input_kind(in) == InputKind::density) {
    r = realize_density(density_from_json(in), cfg);
  } else {
    throw ArgumentError("build takes a density or a block collection");
  }
  o.write("path.json", to_json(r.path));
  if (r.blocks) o.write("blocks.json", to_json(*r.blocks));
  if (!r.layout) {
    out << "uniform density: single-tent preset, " << r.path.knots.size() << " knots\n";
    return 0;
  }
  const PathAudit audit = audit_path(r.path, *r.layout);
  o.write("audit.json", to_json(audit));
  out << r.path.knots.size() << " knots, period " << to_string(r.path.period) << ", "
      << r.layout->components.size() << " components\n";
  std::vector<Check> checks{{"path_audit", audit.ok(), ""}};
  for (const auto &f : audit.failures) checks.push_back({"audit", false, f});
  print_checks(out, checks);
  return audit.ok() ? 0 : 1;
}

int cmd_law(const RunConfig &cfg, Outputs &o, std::ostream &out) {
  const json in = read_json_file(require_input(cfg));
  PiecewiseLinearPath path;
  Rational T;
  std::optional<StepDensity> target;
  std::optional<BlockCollection> blocks;
  switch (input_kind(in)) {
    case InputKind::path:
      path = path_from_json(in);
      if (!cfg.window) throw ArgumentError("law on a path needs --window");
      T = parse_rational(*cfg.window);
      break;
    case InputKind::density: {
      const StepDensity f = density_from_json(in);
      auto r = realize_density(f, cfg);
      path = std::move(r.path);
      blocks = std::move(r.blocks);
      T = f.T();
      target = f;
      break;
    }
    case InputKind::blocks: {
      auto r = realize_blocks(blocks_from_json(in), cfg.mode);
      path = std::move(r.path);
      blocks = std::move(r.blocks);
      T = blocks->T;
      target = recompose(*blocks);
      break;
    }
  }
  if (cfg.window) T = parse_rational(*cfg.window);
  if (cfg.target) target = density_from_json(read_json_file(*cfg.target));

  const SupLocationLaw law = exact_law(path, T);
  o.write("law.json", to_json(law));
  o.write("law.csv", law_csv(law));
  out << describe_law(law) << '\n';

  std::vector<Check> checks;
  checks.push_back({"total_mass", law.total_mass() == 1, to_string(law.total_mass())});
  if (target && target->T() == T) checks.push_back(law_matches_target(law, *target));
  if (blocks && blocks->T == T)
    checks.push_back({"atom_identity", atom_identity_check(law, *blocks), ""});
  if (cfg.grid_check) {
    const SupLocationLaw g = grid_law(path, T, cfg.n_grid, cfg.n_shift, 100, cfg.threads);
    const LawDistance d = law_distance(law, g);
    const Rational tol(1, 100);
    const bool ok = d.atom0_diff <= tol && d.atomT_diff <= tol && d.interior_sup <= tol;
    json gj = to_json(g);
    gj["distance_to_exact"] = to_json(d);
    o.write("grid_law.json", gj);
    checks.push_back({"grid_agreement", ok,
                      "atom0 " + format_double(to_double(d.atom0_diff)) + ", atomT " +
                          format_double(to_double(d.atomT_diff)) + ", per-bin sup " +
                          format_double(to_double(d.interior_sup))});
  }
  json report = {{"schema", kSchemaVersion}, {"checks", checks_json(checks)}, {"ok", all_pass(checks)}};
  o.write("law_checks.json", report);
  print_checks(out, checks);
  return all_pass(checks) ? 0 : 1;
}

int cmd_verify(const RunConfig &cfg, Outputs &o, std::ostream &out) {
  const StepDensity f = density_from_json(read_json_file(require_input(cfg)));
  const Rational T = f.T();
  std::vector<Check> checks;
  const auto rep = validate_density(f);
  checks.push_back({"admissible", rep.admissible(),
                    rep.admissible() ? "" : (!rep.passes_a   ? "total variation too large"
                                             : !rep.passes_b ? "density not bounded away from zero"
                                                             : "integral not below 1")});
  checks.push_back({"universal_bound", rep.passes_universal_bound, ""});

  auto finish = [&] {
    json report = {{"schema", kSchemaVersion},
                   {"mode", to_string(cfg.mode)},
                   {"checks", checks_json(checks)},
                   {"ok", all_pass(checks)}};
    o.write("verify.json", report);
    print_checks(out, checks);
    return all_pass(checks) ? 0 : 1;
  };
  if (!rep.admissible()) return finish();

  Realization r;
  if (rep.is_uniform) {
    r.path = uniform_preset(T);
  } else {
    const Rational H = cfg.H ? parse_rational(*cfg.H) : choose_period(f);
    const BlockCollection c = peel_blocks(f, H);
    checks.push_back({"round_trip", same_function(recompose(c), f), ""});
    const auto feas = feasibility(c);
    checks.push_back({"feasible", feas.ok(), feas.ok() ? "" : feas.first_failure()});
    if (!feas.ok()) return finish();
    r = realize_blocks(c, cfg.mode);
    const PathAudit audit = audit_path(r.path, *r.layout);
    std::string failures;
    for (const auto &s : audit.failures) failures += (failures.empty() ? "" : "; ") + s;
    checks.push_back({"path_audit", audit.ok(), failures});
  }

  const SupLocationLaw law = exact_law(r.path, T);
  o.write("law.json", to_json(law));
  checks.push_back({"total_mass", law.total_mass() == 1, to_string(law.total_mass())});
  checks.push_back(law_matches_target(law, f));
  if (r.blocks) {
    const Rational expected = Rational(r.blocks->m()) * r.blocks->d() / (r.blocks->H * T);
    checks.push_back({"atom_identity", atom_identity_check(law, *r.blocks),
                      "atoms " + to_string(Rational(law.atom0 + law.atomT)) + ", m d/(HT) " +
                          to_string(expected)});
  }
  checks.push_back({"law_universal_bound", check_universal_bound(law.interior), ""});

  bool mono = true, integral = true;
  for (const Rational &frac : {Rational(1, 10), Rational(1, 4)}) {
    const Rational Delta = frac * T;
    const SupLocationLaw shorter = exact_law(r.path, T - Delta);
    for (const Rational &delta : {Rational(0), Rational(Delta / 2), Delta}) {
      mono = mono && check_window_monotonicity(law, shorter, T, Delta, delta);
      for (const Rational &e : {Rational(0), Rational((T - Delta) / 10)})
        integral = integral && check_integral_inequality(law, shorter, T, Delta, delta, e, e);
    }
  }
  checks.push_back({"window_monotonicity", mono, ""});
  checks.push_back({"integral_inequality", integral, ""});
  return finish();
}

CadlagDensity approx_density(const RunConfig &cfg) {
  if (!cfg.inputs.empty())
    return CadlagDensity::from_step(density_from_json(read_json_file(cfg.inputs.front())));
  const Rational one(1), half(1, 2), quarter(1, 4);
  if (cfg.preset == "ramp") return CadlagDensity::ramp(one, half, half);
  if (cfg.preset == "parabola") return CadlagDensity::parabola(one, quarter, one, half);
  if (cfg.preset == "two_level")
    return CadlagDensity::two_level_ramp(one, half, one, quarter, Rational(3, 4));
  throw ArgumentError("unknown preset " + cfg.preset + " (ramp, parabola, two_level)");
}

int cmd_approx(const RunConfig &cfg, Outputs &o, std::ostream &out) {
  const CadlagDensity f = approx_density(cfg);
  const ConvergenceReport rep = realize_and_compare(f, cfg.ns, cfg.mode, cfg.max_cells, cfg.threads);
  o.write("convergence.csv", convergence_csv(rep));
  o.write("convergence.json", to_json(rep));
  std::vector<Check> checks;
  for (const auto &row : rep.rows) {
    const Rational bound = Rational(2) / (Rational(row.n) * f.T());
    bool ok = false;
    if (row.status == RealizeStatus::ok)
      ok = row.realized_equals_fn && row.atom_identity && row.sandwich_ok && row.tv_ok &&
           row.sup_dist <= bound;
    else if (row.status == RealizeStatus::uniform)
      ok = row.realized_equals_fn && row.sandwich_ok && row.sup_dist <= bound;
    checks.push_back({"n=" + std::to_string(row.n), ok,
                      to_string(row.status) + ", sup " + to_string(row.sup_dist) + ", L1 " +
                          format_double(row.l1_dist) + (row.note.empty() ? "" : ", " + row.note)});
  }
  print_checks(out, checks);
  return all_pass(checks) ? 0 : 1;
}

int cmd_mix(const RunConfig &cfg, Outputs &o, std::ostream &out) {
  MixingProcessSpec spec;
  spec.w = cfg.w;
  spec.h = cfg.h;
  spec.innovations = innovations_from_string(cfg.innovations);
  spec.seed = cfg.seed;
  spec.time_reversed = cfg.time_reversed;
  const EmpiricalLaw e = simulate_mixing_tau(spec, cfg.T, cfg.n_paths, cfg.n_bins, cfg.threads);
  const double band = uniformity_band(e, cfg.eps);
  const double ks = ks_uniform(normalized_taus(e));
  const double T = cfg.T;
  const auto cond = conditional_uniformity(e, 0.2 * T, 0.3 * T, 0.5 * T, 0.8 * T);
  const double proxy = atom_proxy(e);

  json j = summary_json(e);
  j["band_eps"] = format_double(cfg.eps);
  j["band_statistic"] = format_double(band);
  j["ks_uniform"] = format_double(ks);
  j["conditional"] = {{"a", format_double(0.2 * T)},
                      {"a_prime", format_double(0.3 * T)},
                      {"b_prime", format_double(0.5 * T)},
                      {"b", format_double(0.8 * T)},
                      {"estimate", format_double(cond.estimate)},
                      {"ci_low", format_double(cond.ci_low)},
                      {"ci_high", format_double(cond.ci_high)},
                      {"target", format_double(cond.target)},
                      {"n_condition", cond.n_condition},
                      {"covers_target", cond.covers_target()}};
  j["atom_proxy"] = format_double(proxy);
  o.write("bins.csv", bins_csv(e));
  o.write("summary.json", j);
  out << "band(eps=" << cfg.eps << ") " << format_double(band) << "\nks " << format_double(ks)
      << "\nconditional " << format_double(cond.estimate) << " [" << format_double(cond.ci_low)
      << ", " << format_double(cond.ci_high) << "] target " << format_double(cond.target)
      << "\natom_proxy " << format_double(proxy) << '\n';
  for (const auto &w : e.warnings) out << "warning: " << w << '\n';
  return 0;
}

}  // namespace

int run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  Outputs o(resolve_out_dir(cfg));
  const std::string started = utc_now();
  int status = 2;
  json error = nullptr;
  try {
    if (cfg.subcommand == "validate") status = cmd_validate(cfg, o, out);
    else if (cfg.subcommand == "decompose") status = cmd_decompose(cfg, o, out);
    else if (cfg.subcommand == "build") status = cmd_build(cfg, o, out);
    else if (cfg.subcommand == "law") status = cmd_law(cfg, o, out);
    else if (cfg.subcommand == "approx") status = cmd_approx(cfg, o, out);
    else if (cfg.subcommand == "mix") status = cmd_mix(cfg, o, out);
    else if (cfg.subcommand == "verify") status = cmd_verify(cfg, o, out);
    else throw ArgumentError("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const Error &e) {
    error = {{"code", e.code()}, {"message", e.what()}};
  } catch (const json::exception &e) {
    error = {{"code", "schema_violation"}, {"message", e.what()}};
  } catch (const std::exception &e) {
    error = {{"code", "internal_error"}, {"message", e.what()}};
  }
  try {
    if (!error.is_null()) {
      status = 2;
      o.write("error.json", json{{"schema", kSchemaVersion}, {"error", error}});
      err << "error [" << error["code"].get<std::string>() << "]: "
          << error["message"].get<std::string>() << '\n';
    }
    json manifest = {{"schema", kSchemaVersion},
                     {"tool", "suploc"},
                     {"config", config_json(cfg)},
                     {"outputs", o.names()},
                     {"exit_status", status},
                     {"started", started},
                     {"finished", utc_now()}};
    fs::create_directories(o.dir());
    write_text_file((o.dir() / "manifest.json").string(), manifest.dump(2) + "\n");
  } catch (const std::exception &e) {
    err << "error [io]: " << e.what() << '\n';
    return 2;
  }
  return status;
}

int cli_main(int argc, char **argv) {
  CLI::App app{"Supremum-location laws of stationary processes: validation, exact "
               "construction, exact laws and Monte Carlo checks."};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string mode = "repaired";

  auto common = [&](CLI::App *sub) {
    sub->add_option("--out", cfg.out_dir,
                    std::string("Output directory (default: $") + kOutDirEnv + " or suploc-out)");
    sub->add_option("--mode", mode, "Fill mode for one-sided components")
        ->check(CLI::IsMember({"literal", "repaired"}))
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  };
  auto input = [&](CLI::App *sub, const char *what) {
    sub->add_option("input", cfg.inputs, what)->required()->check(CLI::ExistingFile);
  };
  auto period = [&](CLI::App *sub) {
    sub->add_option("--H", cfg.H, "Period multiplier H as a rational (default: smallest valid)");
  };

  auto *validate = app.add_subcommand("validate", "Check a density against the admissibility conditions");
  input(validate, "Density JSON");
  common(validate);

  auto *decompose = app.add_subcommand("decompose", "Peel a density into a block collection");
  input(decompose, "Density JSON");
  period(decompose);
  common(decompose);

  auto *build = app.add_subcommand("build", "Construct and audit the periodic path");
  input(build, "Density or block collection JSON");
  period(build);
  common(build);

  auto *law = app.add_subcommand("law", "Exact supremum-location law");
  input(law, "Path, density or block collection JSON");
  period(law);
  common(law);
  law->add_option("--window", cfg.window, "Window length T as a rational (required for paths)");
  law->add_option("--target", cfg.target, "Density JSON the interior law is compared with")
      ->check(CLI::ExistingFile);
  law->add_flag("--grid", cfg.grid_check, "Cross-check against the brute-force grid oracle");
  law->add_option("--n-grid", cfg.n_grid, "Grid points per window")->capture_default_str();
  law->add_option("--n-shift", cfg.n_shift, "Shifts per period")->capture_default_str();

  auto *approx = app.add_subcommand("approx", "Step approximation of a cadlag density");
  approx->add_option("input", cfg.inputs, "Optional density JSON instead of a preset")
      ->check(CLI::ExistingFile);
  approx->add_option("--preset", cfg.preset, "ramp | parabola | two_level")->capture_default_str();
  approx->add_option("--n", cfg.ns, "Resolutions n")->capture_default_str();
  approx->add_option("--max-cells", cfg.max_cells, "Mesh size cap")->capture_default_str();
  common(approx);

  auto *mix = app.add_subcommand("mix", "Monte Carlo for the moving-average process");
  mix->set_help_flag("--help", "Print this help message and exit");
  mix->add_option("--T", cfg.T, "Window length")->capture_default_str();
  mix->add_option("--w", cfg.w, "Kernel width")->capture_default_str();
  mix->add_option("--h", cfg.h, "Grid step (at most w/10)")->capture_default_str();
  mix->add_option("--paths", cfg.n_paths, "Number of paths")->capture_default_str();
  mix->add_option("--bins", cfg.n_bins, "Number of bins")->capture_default_str();
  mix->add_option("--innovations", cfg.innovations,
                  "uniform | exponential | normal | rademacher | constant")
      ->capture_default_str();
  mix->add_option("--eps", cfg.eps, "Band fraction for the uniformity statistic")
      ->capture_default_str();
  mix->add_flag("--time-reversed", cfg.time_reversed, "Simulate t -> X(T - t)");
  common(mix);

  auto *verify = app.add_subcommand("verify", "Run the full invariant suite on a density");
  input(verify, "Density JSON");
  period(verify);
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.mode = fill_mode_from_string(mode);
  return run(cfg, std::cout, std::cerr);
}

}  // namespace suploc
