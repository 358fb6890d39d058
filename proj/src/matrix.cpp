#include "markerlr/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "markerlr/error.hpp"

namespace markerlr {

ExpressionMatrix::ExpressionMatrix(std::vector<std::string> protein_ids,
                                   std::vector<std::string> sample_ids,
                                   std::vector<Condition> layout,
                                   std::vector<double> values)
    : protein_ids_(std::move(protein_ids)), sample_ids_(std::move(sample_ids)),
      layout_(std::move(layout)), values_(std::move(values)) {
  if (protein_ids_.empty()) throw ValueError("expression matrix has no proteins");
  if (layout_.size() != sample_ids_.size())
    throw LayoutError("layout covers " + std::to_string(layout_.size()) +
                      " samples but the matrix has " +
                      std::to_string(sample_ids_.size()));
  if (values_.size() != protein_ids_.size() * sample_ids_.size())
    throw ValueError("value count does not match proteins x samples");
  for (Condition c : layout_) {
    if (c != Condition::first && c != Condition::second)
      throw LayoutError("condition labels must be 1 or 2");
  }
  n1_ = static_cast<std::size_t>(std::count(layout_.begin(), layout_.end(), Condition::first));
  if (n1_ == 0 || n1_ == layout_.size())
    throw LayoutError("both conditions need at least one sample");
  for (std::size_t j = 0; j < proteins(); ++j) {
    for (std::size_t k = 0; k < samples(); ++k) {
      if (!std::isfinite(at(j, k)))
        throw ValueError("non-finite intensity at protein '" + protein_ids_[j] +
                         "', sample '" + sample_ids_[k] + "'");
    }
  }
}

std::vector<double> ExpressionMatrix::grouped_row(std::size_t j) const {
  std::vector<double> out;
  out.reserve(samples());
  const auto r = row(j);
  for (std::size_t k = 0; k < samples(); ++k)
    if (layout_[k] == Condition::first) out.push_back(r[k]);
  for (std::size_t k = 0; k < samples(); ++k)
    if (layout_[k] == Condition::second) out.push_back(r[k]);
  return out;
}

ExpressionMatrix ExpressionMatrix::with_swapped_labels() const {
  std::vector<Condition> swapped(layout_);
  for (auto &c : swapped) c = c == Condition::first ? Condition::second : Condition::first;
  return with_layout(std::move(swapped));
}

ExpressionMatrix ExpressionMatrix::with_layout(std::vector<Condition> layout) const {
  return ExpressionMatrix(protein_ids_, sample_ids_, std::move(layout), values_);
}

} // namespace markerlr
