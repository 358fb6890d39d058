#ifndef MARKERLR_EVAL_HPP
#define MARKERLR_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "markerlr/matrix.hpp"
#include "markerlr/score.hpp"
#include "markerlr/select.hpp"

namespace markerlr {

struct Truth {
  std::vector<std::string> protein_ids;
  std::vector<bool> is_true;
};

struct RunOutcome {
  std::size_t selected = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double sensitivity = 0.0;   ///< TP / n_true (0 when n_true is 0)
  double empirical_fdr = 0.0; ///< FP / max(1, selected)
};

/// Throws TruthMismatch when the selection's universe or ids disagree with
/// `truth`.
RunOutcome score_against_truth(const SelectionResult &result, const Truth &truth);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0; ///< two-sided
};

/// Welch two-sample t-test with Welch-Satterthwaite degrees of freedom.
/// Throws DegenerateData when both groups have zero variance.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Welch test per protein (condition 1 vs 2). Requires n1, n2 >= 2.
std::vector<ProteinScore> ttest_baseline(const ExpressionMatrix &m);

struct CalibrationRow {
  std::size_t per_condition = 0;
  std::size_t proteins = 0;
  double alpha = 0.0;
  double chi2_quantile = 0.0;
  double tail_probability = 0.0;
  double mc_std_error = 0.0;
};

inline const std::vector<double> kCalibrationAlphas{0.01, 0.05, 0.10};

/// Empirical P[2 ln R > chi2_2 upper alpha-quantile] on pure-null proteins
/// simulated from the water-background model, one block of `replicates`
/// proteins per n.
std::vector<CalibrationRow>
convergence_table(std::span<const std::size_t> n_values, std::size_t replicates,
                  std::uint64_t seed,
                  std::span<const double> alphas = kCalibrationAlphas);

/// A statistic plus selection policy, named like "lr-gap" or "welch-bh:0.05".
struct MethodSpec {
  std::string name;
  StatisticKind statistic = StatisticKind::deviance_lr;
  SelectionPolicy policy = GapKnee{};
  /// BH level; when unset, 0.05 for n >= 5 and 0.10 for n < 5.
  std::optional<double> q;
};

/// Accepts lr-gap, ks-gap, lr-bh[:q], ks-bh[:q], welch-bh[:q],
/// lr-fixed:<c>, ks-fixed:<c>. Throws ConfigError.
MethodSpec parse_method(std::string_view text);

double default_fdr_level(std::size_t per_condition) noexcept;

struct BenchmarkConfig {
  std::vector<std::string> methods{"lr-gap", "welch-bh"};
  std::vector<std::string> presets{"water-n10"};
  std::size_t runs = 50;
  std::uint64_t seed = 0;
  std::size_t ks_replicates = 10000;
  unsigned threads = 1;
};

struct BenchRow {
  std::string method;
  std::string preset;
  std::size_t run = 0;
  std::uint64_t run_seed = 0;
  RunOutcome outcome;
  double cutoff_used = 0.0;
  bool flagged = false;
  std::string note;
};

struct BenchSummary {
  std::string method;
  std::string preset;
  std::size_t runs = 0;
  std::size_t flagged_runs = 0;
  double mean_sensitivity = 0.0;
  double mean_fdr = 0.0;
  double mean_selected = 0.0;
};

struct EvalReport {
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summary;
};

/// Full cross of methods x presets, each averaged over `runs` simulations.
/// Run r of preset P uses the simulation seed key(seed, P, r) for every
/// method, so methods are compared on identical matrices. A gap policy that
/// finds no drop falls back to BH and the row is flagged; other per-run
/// failures are recorded as flagged rows with a note.
EvalReport benchmark(const BenchmarkConfig &config);

std::string render_runs_csv(const EvalReport &report);
std::string render_summary_csv(const EvalReport &report);
/// Aligned text table in the layout of a methods x (sensitivity, FDR) table.
std::string render_table_text(const EvalReport &report);

} // namespace markerlr

#endif // MARKERLR_EVAL_HPP
