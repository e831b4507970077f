#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "suploc/cli.hpp"
#include "suploc/io.hpp"
#include "test_util.hpp"

namespace suploc {
namespace {

namespace fs = std::filesystem;
using testing::R;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("suploc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string &name, const json &j) {
    const auto p = (dir_ / name).string();
    write_text_file(p, j.dump());
    return p;
  }
  std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  RunConfig config(const std::string &sub, const std::string &input, const std::string &out) {
    RunConfig c;
    c.subcommand = sub;
    if (!input.empty()) c.inputs = {input};
    c.out_dir = (dir_ / out).string();
    return c;
  }
  int run_quiet(const RunConfig &c, std::string *stdout_text = nullptr) {
    std::ostringstream out, err;
    const int status = run(c, out, err);
    if (stdout_text) *stdout_text = out.str() + err.str();
    return status;
  }

  fs::path dir_;
};

TEST(IoTest, DensityRoundTrip) {
  const auto f = testing::e3_density();
  const json j = to_json(f);
  EXPECT_EQ(j["schema"], kSchemaVersion);
  EXPECT_EQ(j["pieces"][0]["until"], "1/2");
  EXPECT_EQ(density_from_json(j), f);
}

TEST(IoTest, DensitySchemaViolations) {
  EXPECT_THROW(density_from_json(json::parse(R"({"pieces": []})")), SchemaError);
  EXPECT_THROW(density_from_json(json::parse(R"({"T": 1, "pieces": [{"until": "1", "value": "1"}]})")),
               SchemaError);
  EXPECT_THROW(density_from_json(json::parse(R"({"T": "1", "pieces": [{"until": "1/2", "value": "1"}]})")),
               SchemaError);
  EXPECT_THROW(
      density_from_json(json::parse(R"({"schema": "other/9", "T": "1", "pieces": [{"until": "1", "value": "1"}]})")),
      SchemaError);
}

TEST(IoTest, BlocksRoundTripAndKindCheck) {
  const auto c = peel_blocks(testing::e3_density(), 2);
  const auto back = blocks_from_json(to_json(c));
  EXPECT_EQ(back.blocks, c.blocks);
  EXPECT_EQ(back.H, c.H);
  const auto bad = json::parse(R"({"T": "1", "H": "2", "blocks": [{"kind": "base", "u": "0", "v": "1/2"}]})");
  EXPECT_THROW(blocks_from_json(bad), SchemaError);
}

TEST(IoTest, PathRoundTrip) {
  const auto path = testing::realize(testing::e3_density());
  const json j = to_json(path);
  EXPECT_EQ(j["knots"][1], json::array({"1/4", "1"}));
  const auto back = path_from_json(j);
  EXPECT_EQ(back.knots, path.knots);
  EXPECT_EQ(back.period, path.period);
  EXPECT_EQ(back.mode, FillMode::repaired);
  const auto objects = json::parse(R"({"period": "2", "knots": [{"pos": "0", "value": "2"}, {"pos": "1", "value": "1"}]})");
  EXPECT_EQ(path_from_json(objects).knots.size(), 2u);
}

TEST(IoTest, LawRoundTrip) {
  const auto law = testing::law_of(testing::e3_density());
  const json j = to_json(law);
  EXPECT_EQ(j["atom0"], "1/8");
  EXPECT_EQ(j["provenance"], "envelope");
  const auto back = law_from_json(j);
  EXPECT_EQ(back.atom0, law.atom0);
  EXPECT_EQ(back.atomT, law.atomT);
  EXPECT_EQ(back.interior, law.interior);
}

TEST(IoTest, NumbersAndCsv) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(0.5), "0.5");
  ConvergenceReport r;
  const std::string csv = convergence_csv(r);
  EXPECT_NE(csv.find("# schema suploc/1\n"), std::string::npos);
  EXPECT_NE(csv.find("n,H,m,d_n,sup_dist,L1_dist,max_lefts_per_component,max_rights_per_component"),
            std::string::npos);
  const std::string law = law_csv(testing::law_of(testing::e1_density()));
  EXPECT_NE(law.find("atom0,0,0,1/4,"), std::string::npos);
}

TEST_F(CliTest, VerifyRepairedPasses) {
  const auto in = write("f.json", to_json(testing::e3_density()));
  std::string text;
  EXPECT_EQ(run_quiet(config("verify", in, "rep"), &text), 0) << text;
  const auto report = read_json_file((dir_ / "rep" / "verify.json").string());
  EXPECT_TRUE(report["ok"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "rep" / "manifest.json"));
}

TEST_F(CliTest, VerifyLiteralNamesDiscrepancy) {
  const auto in = write("f.json", to_json(testing::e3_density()));
  auto c = config("verify", in, "lit");
  c.mode = FillMode::literal;
  std::string text;
  EXPECT_EQ(run_quiet(c, &text), 1);
  EXPECT_NE(text.find("FAIL law_matches_target"), std::string::npos) << text;
  EXPECT_NE(text.find("atom0=1/12 atomT=5/12"), std::string::npos) << text;
}

TEST_F(CliTest, ValidateVariationFailure) {
  const auto in = write("f.json", to_json(testing::step(
                                      1, {{R("1/3"), R("1/2")}, {R("2/3"), R("3/2")}, {1, R("1/2")}})));
  EXPECT_EQ(run_quiet(config("validate", in, "v")), 1);
  const auto report = read_json_file((dir_ / "v" / "density_report.json").string());
  EXPECT_FALSE(report["passes_a"].get<bool>());
}

TEST_F(CliTest, StructuredErrors) {
  EXPECT_EQ(run_quiet(config("validate", (dir_ / "missing.json").string(), "e1")), 2);
  auto err = read_json_file((dir_ / "e1" / "error.json").string());
  EXPECT_EQ(err["error"]["code"], "argument_error");

  const auto bad = write("bad.json", json::parse(R"({"T": "1", "pieces": [{"until": "1", "value": "x"}]})"));
  EXPECT_EQ(run_quiet(config("validate", bad, "e2")), 2);
  err = read_json_file((dir_ / "e2" / "error.json").string());
  EXPECT_EQ(err["error"]["code"], "schema_violation");

  const auto blocks = write("blocks.json", json::parse(R"({"T": "1", "H": "2", "blocks": [{"u": "0", "v": "1/2"}]})"));
  EXPECT_EQ(run_quiet(config("build", blocks, "e3")), 2);
  err = read_json_file((dir_ / "e3" / "error.json").string());
  EXPECT_EQ(err["error"]["code"], "infeasible_collection");
  const auto manifest = read_json_file((dir_ / "e3" / "manifest.json").string());
  EXPECT_EQ(manifest["exit_status"], 2);

  EXPECT_EQ(run_quiet(config("frobnicate", "", "e4")), 2);
}

TEST_F(CliTest, OutputsAreReproducible) {
  const auto in = write("f.json", to_json(testing::e3_density()));
  for (const char *out : {"a", "b"}) {
    EXPECT_EQ(run_quiet(config("law", in, out)), 0);
    EXPECT_EQ(run_quiet(config("build", in, out)), 0);
  }
  for (const char *name : {"law.json", "law.csv", "path.json", "audit.json", "blocks.json"})
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  const auto law = read_json_file((dir_ / "a" / "law.json").string());
  EXPECT_EQ(law["schema"], kSchemaVersion);
  EXPECT_EQ(law["atomT"], "1/8");
}

TEST_F(CliTest, LawOnPathNeedsWindow) {
  const auto p = write("p.json", to_json(testing::realize(testing::e1_density())));
  EXPECT_EQ(run_quiet(config("law", p, "x")), 2);
  auto c = config("law", p, "y");
  c.window = "1";
  c.target = write("t.json", to_json(testing::e1_density()));
  EXPECT_EQ(run_quiet(c), 0);
}

TEST_F(CliTest, DecomposeAndApprox) {
  const auto in = write("f.json", to_json(testing::e3_density()));
  EXPECT_EQ(run_quiet(config("decompose", in, "d")), 0);
  const auto blocks = read_json_file((dir_ / "d" / "blocks.json").string());
  EXPECT_EQ(blocks["d"], "1/4");
  EXPECT_TRUE(blocks["feasibility"]["ok"].get<bool>());

  auto c = config("approx", "", "ap");
  c.ns = {2, 4};
  EXPECT_EQ(run_quiet(c), 0);
  const std::string csv = slurp(dir_ / "ap" / "convergence.csv");
  EXPECT_NE(csv.find("\n4,8,8,1/8,1/4,0.125,0,1\n"), std::string::npos) << csv;
}

TEST_F(CliTest, MixWritesSummary) {
  auto c = config("mix", "", "m");
  c.T = 10;
  c.n_paths = 500;
  c.n_bins = 10;
  EXPECT_EQ(run_quiet(c), 0);
  const auto s = read_json_file((dir_ / "m" / "summary.json").string());
  EXPECT_EQ(s["n_paths"], 500);
  EXPECT_TRUE(s.contains("ks_uniform"));
  EXPECT_TRUE(s.contains("conditional"));
  const std::string bins = slurp(dir_ / "m" / "bins.csv");
  EXPECT_EQ(bins.rfind("# schema suploc/1\nkind,lo,hi,mass,density\n", 0), 0u);
}

TEST_F(CliTest, EnvironmentDefaultsOutputDirectory) {
  RunConfig c;
  EXPECT_EQ(resolve_out_dir(c), std::getenv(kOutDirEnv) ? std::getenv(kOutDirEnv) : "suploc-out");
  setenv(kOutDirEnv, (dir_ / "env").c_str(), 1);
  EXPECT_EQ(resolve_out_dir(c), (dir_ / "env").string());
  c.out_dir = "explicit";
  EXPECT_EQ(resolve_out_dir(c), "explicit");
  unsetenv(kOutDirEnv);
}

TEST_F(CliTest, ParsesCommandLine) {
  const auto in = write("f.json", to_json(testing::e3_density()));
  const std::string out = (dir_ / "argv").string();
  std::vector<std::string> args{"suploc", "verify", in, "--mode", "literal", "--out", out};
  std::vector<char *> argv;
  for (auto &a : args) argv.push_back(a.data());
  ::testing::internal::CaptureStdout();
  const int status = cli_main(static_cast<int>(argv.size()), argv.data());
  ::testing::internal::GetCapturedStdout();
  EXPECT_EQ(status, 1);
  const auto manifest = read_json_file(out + "/manifest.json");
  EXPECT_EQ(manifest["config"]["mode"], "literal");
}

}  // namespace
}  // namespace suploc
