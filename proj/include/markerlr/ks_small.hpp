#ifndef MARKERLR_KS_SMALL_HPP
#define MARKERLR_KS_SMALL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "markerlr/matrix.hpp"
#include "markerlr/score.hpp"

namespace markerlr {

/// Gaussian kernel estimate over the observed intensities.
struct KernelEstimate {
  std::vector<double> centers;
  double bandwidth = 1.0;
};

/// Gaussian-reference rule h = 1.06 min(s, IQR/1.349) N^(-1/5), with s the
/// N-1 standard deviation and IQR from type-7 quantiles. When the IQR is zero
/// the SD alone is used. Throws DegenerateData when s is zero.
double select_bandwidth(std::span<const double> x);

KernelEstimate make_kernel_estimate(std::span<const double> x);

/// G_h(t) = (1/N) sum_k Phi((t - x_k) / h)
double kernel_cdf(const KernelEstimate &est, double t) noexcept;

struct KsScore {
  double d = 0.0;
  double p_value = 1.0;
  double bandwidth_used = 0.0;
  std::size_t mc_replicates = 0;
};

/// Maximum of |G_h(x_k) - F(x_k)| over the observed points, F being the
/// pooled-normal MLE fit. Fills `d` and `bandwidth_used` only.
KsScore ks_d_statistic(std::span<const double> x);

/// Monte-Carlo null distribution of D for samples of size N drawn from a
/// standard normal, re-running the whole pipeline (bandwidth and normal fit)
/// on each replicate. Replicate r uses the sub-stream
/// (seed, "lilliefors", N, r), so a table is a pure function of
/// (N, replicates, seed).
class LillieforsNullTable {
public:
  LillieforsNullTable(std::size_t sample_size, std::size_t replicates,
                      std::uint64_t seed);

  /// (1 + #{D* >= d}) / (replicates + 1)
  double p_value(double d) const noexcept;

  std::size_t sample_size() const noexcept { return sample_size_; }
  std::size_t replicates() const noexcept { return sorted_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> sorted_statistics() const noexcept { return sorted_; }

private:
  std::size_t sample_size_;
  std::uint64_t seed_;
  std::vector<double> sorted_;
};

inline constexpr std::size_t kMinLillieforsReplicates = 1000;

/// Builds the null table and looks `d` up in it.
double lilliefors_pvalue(double d, std::size_t sample_size,
                         std::size_t replicates, std::uint64_t seed);

struct KsScoreOptions {
  std::size_t replicates = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// One ks_d score per protein. The null table for the matrix's N is built
/// once and shared by every protein. Requires N >= 3.
std::vector<ProteinScore> score_matrix_ks(const ExpressionMatrix &m,
                                          const KsScoreOptions &options = {});

/// Same, with a caller-supplied table (must match the matrix's N).
std::vector<ProteinScore> score_matrix_ks(const ExpressionMatrix &m,
                                          const LillieforsNullTable &table,
                                          unsigned threads = 1);

} // namespace markerlr

#endif // MARKERLR_KS_SMALL_HPP
