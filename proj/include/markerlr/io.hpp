#ifndef MARKERLR_IO_HPP
#define MARKERLR_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "markerlr/eval.hpp"
#include "markerlr/matrix.hpp"
#include "markerlr/score.hpp"
#include "markerlr/select.hpp"
#include "markerlr/simgen.hpp"

namespace markerlr {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Matrix CSV: a header `protein_id,<sample>...`, then one row per protein.
/// Lines starting with '#' are comments, except an optional
/// `#layout,<1|2>,...` line that assigns a condition to every sample column.
/// A sidecar layout (CSV `sample,condition`) overrides the inline line.
///
/// Throws ParseError for malformed CSV or duplicate ids, ValueError (with
/// protein and sample named) for non-numeric or non-finite cells and
/// LayoutError when some sample has no condition.
ExpressionMatrix parse_matrix_csv(std::istream &in,
                                  const std::optional<std::vector<Condition>> &layout = {});

/// Reads a `sample,condition` sidecar and orders it by `sample_ids`.
std::vector<Condition> parse_layout_csv(std::istream &in,
                                        std::span<const std::string> sample_ids);

ExpressionMatrix read_matrix_csv(const std::filesystem::path &matrix,
                                 const std::optional<std::filesystem::path> &layout = {});

void write_matrix_csv(std::ostream &out, const ExpressionMatrix &m);
void write_truth_csv(std::ostream &out, const LabeledMatrix &lm);
Truth parse_truth_csv(std::istream &in);

void write_scores_csv(std::ostream &out, const std::vector<ProteinScore> &scores);
void write_selection_csv(std::ostream &out, const SelectionResult &result);
void write_preview_csv(std::ostream &out, const SelectionResult &result);
void write_calibration_csv(std::ostream &out, const std::vector<CalibrationRow> &rows);

} // namespace markerlr

#endif // MARKERLR_IO_HPP
