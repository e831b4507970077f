#ifndef SUPLOC_CLI_HPP_
#define SUPLOC_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "suploc/assembly.hpp"

namespace suploc {

/// Environment variable naming the default output directory.
inline constexpr const char *kOutDirEnv = "SUPLOC_OUT_DIR";

/// Fully defaulted: a config holding only a subcommand (and an input where
/// the subcommand needs one) is runnable.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  FillMode mode = FillMode::repaired;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir;  // empty: $SUPLOC_OUT_DIR, else "suploc-out"

  // law / verify
  std::optional<std::string> window;  // window T for a path input
  std::optional<std::string> H;       // period multiplier for peeling
  std::optional<std::string> target;  // density JSON compared against the law
  bool grid_check = false;
  std::size_t n_grid = 10000;
  std::size_t n_shift = 100000;

  // approx
  std::string preset = "ramp";
  std::vector<long> ns = {2, 4, 8, 16};
  std::size_t max_cells = 4096;

  // mix
  double T = 200;
  double w = 1;
  double h = 0.01;
  std::size_t n_paths = 100000;
  std::size_t n_bins = 50;
  std::string innovations = "normal";
  double eps = 0.1;
  bool time_reversed = false;
};

/// Resolved output directory for a config.
std::string resolve_out_dir(const RunConfig &cfg);

/// Runs one subcommand, writing artifacts plus manifest.json into the
/// output directory and a human-readable summary to `out`. Library errors
/// are reported as error.json and on `err`. Returns 0 iff every check the
/// subcommand performs passes, 1 on a failed check, 2 on an error.
int run(const RunConfig &cfg, std::ostream &out, std::ostream &err);

/// Command-line entry point: parses argv into a RunConfig and calls run.
int cli_main(int argc, char **argv);

}  // namespace suploc

#endif  // SUPLOC_CLI_HPP_
