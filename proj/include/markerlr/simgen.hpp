#ifndef MARKERLR_SIMGEN_HPP
#define MARKERLR_SIMGEN_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "markerlr/matrix.hpp"

namespace markerlr {

struct NormalErrors {
  double sigma2 = 0.48;
};

/// Used as stated: the location replaces the zero mean of the normal errors.
struct CauchyErrors {
  double location = 15.0;
  double scale = 2.0;
};

/// Un-centred chi-square errors (mean df).
struct ChiSquareErrors {
  double df = 2.0;
};

using ErrorLaw = std::variant<NormalErrors, CauchyErrors, ChiSquareErrors>;

std::string describe(const ErrorLaw &law);

/// How the subject-within-condition effect S(C) is drawn.
enum class SubjectEffect {
  per_protein, ///< independent draw for every (protein, subject) cell
  shared,      ///< one draw per subject, shared by all proteins
};

/// Mixed-effects simulation X = mu + C_i + S(C)_k(i) + F_j + e.
///
/// Plain proteins use C_1 = C_2 = U with U ~ Uniform[1, 100]. True markers use
/// C_1 = log2(2 * fold_ratio) + U and C_2 = log2(2) + U with U ~ Uniform[1, 10],
/// so the log2 fold change is log2(fold_ratio).
struct SimSpec {
  std::size_t proteins = 1000;
  std::size_t true_markers = 30;
  std::size_t per_condition = 10;
  double grand_mean = 15.0;
  double subject_variance = 27.37;
  double protein_variance = 0.98;
  ErrorLaw errors = NormalErrors{0.48};
  double fold_ratio = 3.0;
  SubjectEffect subject_effect = SubjectEffect::per_protein;
  std::uint64_t seed = 0;
};

/// Throws InvalidSpec.
void validate(const SimSpec &spec);

struct LabeledMatrix {
  ExpressionMatrix matrix;
  std::vector<bool> is_true;
  /// (C_1, C_2) per protein.
  std::vector<std::array<double, 2>> condition_effects;

  std::size_t true_count() const noexcept;
};

/// Deterministic in `spec` (including its seed). Each random ingredient has
/// its own sub-stream keyed by (seed, name, protein), so e.g. changing the
/// error law leaves S, F and U unchanged:
///   "placement" - which proteins are true markers
///   "condition" - U
///   "protein"   - F_j
///   "subject"   - S(C)
///   "error"     - e
LabeledMatrix generate(const SimSpec &spec);

struct NamedPreset {
  std::string name;
  SimSpec spec;
};

/// water-n10, human-n10, water-n3, human-n3, cauchy-n10, chisq-n10,
/// cauchy-n3, chisq-n3.
const std::vector<NamedPreset> &presets();

/// Throws ConfigError for an unknown name.
SimSpec preset(std::string_view name);

} // namespace markerlr

#endif // MARKERLR_SIMGEN_HPP
