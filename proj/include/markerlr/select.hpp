#ifndef MARKERLR_SELECT_HPP
#define MARKERLR_SELECT_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "markerlr/score.hpp"

namespace markerlr {

/// Scale on which a fixed cutoff is expressed for deviance scores.
enum class CutoffScale { deviance, ln_r, r };

std::string_view to_string(CutoffScale scale) noexcept;
CutoffScale parse_cutoff_scale(std::string_view text);

struct FixedCutoff {
  double cutoff = 2.5;
  CutoffScale scale = CutoffScale::deviance;
};

/// Sudden-drop detection on the descending sorted statistics.
struct GapKnee {
  std::size_t top_window = 100;
  /// The winning log-ratio must exceed this multiple of the median
  /// log-ratio inside the window.
  double min_prominence = 2.0;
};

struct BhFdr {
  double q = 0.05;
};

using SelectionPolicy = std::variant<FixedCutoff, GapKnee, BhFdr>;

/// Parses "fixed:<c>", "gap", "gap:<window>" or "bh:<q>".
SelectionPolicy parse_policy(std::string_view text,
                             CutoffScale scale = CutoffScale::deviance);
std::string describe(const SelectionPolicy &policy);

struct RankedValue {
  std::size_t index = 0;
  std::string protein_id;
  double value = 0.0;
};

struct SelectionResult {
  std::vector<std::size_t> selected;      ///< protein indices, ascending
  std::vector<std::string> selected_ids;  ///< ids in the same order
  double cutoff_used = 0.0; ///< statistic cutoff, or p-value cutoff for BH
  std::vector<RankedValue> sorted_preview; ///< top values, descending
  SelectionPolicy policy;
  std::size_t universe = 0; ///< number of scored proteins
};

inline constexpr std::size_t kPreviewLength = 100;

/// Value that statistic-based policies rank on: |t| for Welch scores,
/// the raw value otherwise.
double ranking_value(const ProteinScore &score) noexcept;

/// Converts a cutoff on `scale` to the scale of `kind`'s reported value.
double cutoff_on_statistic_scale(const FixedCutoff &policy, StatisticKind kind);

/// Selects every protein whose statistic is >= the cutoff (ties included).
SelectionResult select_fixed(std::span<const ProteinScore> scores,
                             const FixedCutoff &policy);

/// Sorts descending, restricts to the top window and picks the adjacent pair
/// (s_i, s_i+1) with the largest ratio among pairs whose drop is at least
/// 0.1 (s_1 - s_W) / W. The cutoff is s_i. Throws NoGapFound when no pair
/// passes the guard or the best ratio is not prominent (smooth decay).
SelectionResult select_gap(std::span<const ProteinScore> scores,
                           const GapKnee &policy);

/// Benjamini-Hochberg step-up on the p-values.
SelectionResult select_bh(std::span<const ProteinScore> scores,
                          const BhFdr &policy);

SelectionResult select(std::span<const ProteinScore> scores,
                       const SelectionPolicy &policy);

} // namespace markerlr

#endif // MARKERLR_SELECT_HPP
