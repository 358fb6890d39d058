#ifndef MARKERLR_SCORE_HPP
#define MARKERLR_SCORE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace markerlr {

enum class StatisticKind { deviance_lr, ks_d, welch_t };

std::string_view to_string(StatisticKind kind) noexcept;

struct PooledFit {
  double mu = 0.0;
  double sigma2 = 0.0; ///< MLE variance, denominator N
  double loglik = 0.0;
};

struct MixtureFit {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma21 = 0.0;
  double sigma22 = 0.0;
  double w1 = 0.5; ///< n1 / N, fixed by the design
  double w2 = 0.5; ///< n2 / N, fixed by the design
  double loglik = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct LrDiagnostics {
  MixtureFit mixture;
  PooledFit pooled;
};

/// Per-protein result of any scorer.
///
/// `value` is 2 ln R (deviance_lr), D (ks_d) or the signed Welch t (welch_t).
/// `degenerate` marks proteins whose intensities had zero variance; those
/// carry value 0 and p-value 1.
struct ProteinScore {
  std::string protein_id;
  StatisticKind kind = StatisticKind::deviance_lr;
  double value = 0.0;
  double p_value = 1.0;
  bool degenerate = false;
  std::optional<LrDiagnostics> diagnostics;
};

} // namespace markerlr

#endif // MARKERLR_SCORE_HPP
