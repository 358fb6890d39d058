#ifndef MARKERLR_MATRIX_HPP
#define MARKERLR_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace markerlr {

enum class Condition : std::uint8_t { first = 1, second = 2 };

/// Proteins x samples intensity table for a two-condition design.
///
/// Stored row-major with one row per protein. Every sample carries exactly
/// one condition label; both conditions are non-empty and every cell is
/// finite. The constructor enforces all of this and throws ValueError or
/// LayoutError otherwise.
class ExpressionMatrix {
public:
  ExpressionMatrix(std::vector<std::string> protein_ids,
                   std::vector<std::string> sample_ids,
                   std::vector<Condition> layout, std::vector<double> values);

  std::size_t proteins() const noexcept { return protein_ids_.size(); }
  std::size_t samples() const noexcept { return sample_ids_.size(); }
  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return samples() - n1_; }

  const std::vector<std::string> &protein_ids() const noexcept { return protein_ids_; }
  const std::vector<std::string> &sample_ids() const noexcept { return sample_ids_; }
  const std::vector<Condition> &layout() const noexcept { return layout_; }
  const std::vector<double> &values() const noexcept { return values_; }

  /// Intensities of protein `j` in sample-column order.
  std::span<const double> row(std::size_t j) const noexcept {
    return {values_.data() + j * samples(), samples()};
  }

  /// Intensities of protein `j` regrouped as [condition 1 ..., condition 2 ...],
  /// each group in column order. This is the layout the per-protein fitters
  /// expect.
  std::vector<double> grouped_row(std::size_t j) const;

  double at(std::size_t protein, std::size_t sample) const noexcept {
    return values_[protein * samples() + sample];
  }

  /// Same data with condition labels 1 and 2 exchanged.
  ExpressionMatrix with_swapped_labels() const;

  /// Same data with a new layout (used for permutation checks).
  ExpressionMatrix with_layout(std::vector<Condition> layout) const;

private:
  std::vector<std::string> protein_ids_;
  std::vector<std::string> sample_ids_;
  std::vector<Condition> layout_;
  std::vector<double> values_;
  std::size_t n1_ = 0;
};

} // namespace markerlr

#endif // MARKERLR_MATRIX_HPP
