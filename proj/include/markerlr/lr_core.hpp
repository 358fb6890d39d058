#ifndef MARKERLR_LR_CORE_HPP
#define MARKERLR_LR_CORE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "markerlr/matrix.hpp"
#include "markerlr/score.hpp"

namespace markerlr {

struct EmOptions {
  double tolerance = 1e-8;          ///< stop when |delta loglik| < tolerance
  std::size_t max_iterations = 500;
  bool check_monotone = false;      ///< throw std::logic_error if loglik decreases
  std::vector<double> *trace = nullptr; ///< receives the winning start's loglik sequence
};

/// Lower bound on component variances: 1e-8 times the sample variance of
/// `x`, or 1e-8 when that variance is zero.
double variance_floor(std::span<const double> x) noexcept;

/// Pooled normal MLE (variance with denominator N).
/// Throws DegenerateData when the MLE variance is below the variance floor.
PooledFit fit_pooled_normal(std::span<const double> x);

/// Starting point for one EM run.
struct MixtureStart {
  double mu1, mu2, sigma21, sigma22;
};

/// Runs EM for the fixed-weight two-component normal mixture from one start.
/// `x` may be in any order; the iteration always works on the sorted values so
/// that results do not depend on column order.
MixtureFit run_em(std::span<const double> x, double w1, MixtureStart start,
                  const EmOptions &options = {});

/// The starts tried by fit_mixture_fixed_weights: condition-wise moments,
/// pooled mean -/+ one SD, and min/max anchored means. For unbalanced designs
/// the last two are also tried with components exchanged.
std::vector<MixtureStart> mixture_starts(std::span<const double> x,
                                         std::size_t n1, std::size_t n2);

/// Fixed-weight mixture MLE. `x` holds the n1 condition-1 values followed by
/// the n2 condition-2 values; the weights are n1/N and n2/N and are never
/// updated. Returns the best of all starts. Non-convergence is reported via
/// `converged == false`, not thrown.
MixtureFit fit_mixture_fixed_weights(std::span<const double> x, std::size_t n1,
                                     std::size_t n2,
                                     const EmOptions &options = {});

/// chi-square(2) survival of a deviance.
double deviance_p_value(double deviance) noexcept;

/// Deviance 2 ln R = 2 (mixture loglik - pooled loglik), clamped at zero.
/// Degenerate input yields value 0 and p-value 1 with `degenerate` set.
ProteinScore deviance_lr(std::span<const double> x, std::size_t n1,
                         std::size_t n2, const EmOptions &options = {});

struct LrScoreOptions {
  bool allow_small_samples = false; ///< score even when n1 or n2 < 5
  bool keep_diagnostics = false;
  unsigned threads = 1;
  EmOptions em;
};

inline constexpr std::size_t kMinLrSamplesPerCondition = 5;

/// One deviance score per protein, in matrix order.
/// Throws RegimeViolation when a condition has fewer than five samples and
/// `allow_small_samples` is off.
std::vector<ProteinScore> score_matrix_lr(const ExpressionMatrix &m,
                                          const LrScoreOptions &options = {});

} // namespace markerlr

#endif // MARKERLR_LR_CORE_HPP
