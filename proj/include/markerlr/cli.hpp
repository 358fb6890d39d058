#ifndef MARKERLR_CLI_HPP
#define MARKERLR_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace markerlr {

inline constexpr std::string_view kToolName = "markerlr";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInputError = 2,
  kExitRegimeViolation = 3,
  kExitNoGapFound = 4,
};

struct RunConfig {
  std::string command; ///< score | select | simulate | calibrate | bench
  std::string input;
  std::string layout;
  std::string out_dir = ".";
  std::string statistic = "auto"; ///< lr | ks | auto
  std::string policy = "gap";
  std::string cutoff_scale = "deviance";
  std::uint64_t seed = 0;
  std::size_t replicates = 10000;
  std::string preset = "water-n10";
  bool deterministic = false;
  bool allow_small = false;
  std::size_t top_window = 100;
  std::vector<std::size_t> calibrate_n{3, 5, 8, 10, 15, 20, 30};
  std::vector<double> alphas{0.01, 0.05, 0.10};
  std::vector<std::string> methods{"lr-gap", "welch-bh"};
  std::vector<std::string> bench_presets{"water-n10"};
  std::size_t runs = 50;
  unsigned threads = 1;
};

/// Sorted `key=value` lines covering every field that affects outputs.
std::string canonical_serialization(const RunConfig &config);

/// 16 hex digits of FNV-1a over canonical_serialization().
std::string config_digest(const RunConfig &config);

/// "auto" resolves to lr when min(n1, n2) >= 5, else ks.
std::string resolve_statistic(std::string_view requested, std::size_t n1,
                              std::size_t n2);

/// Parses argv into a RunConfig. Returns false (after printing help or the
/// parse error to `err`) when the program should exit with `exit_code`.
bool parse_command_line(int argc, const char *const *argv, RunConfig &config,
                        int &exit_code, std::ostream &out, std::ostream &err);

/// Executes a command. Errors are reported on `err` as
/// `error category=<Name>: <message>` and mapped to exit codes.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

} // namespace markerlr

#endif // MARKERLR_CLI_HPP
