#include "markerlr/ks_small.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/normal_distribution.hpp>

#include "markerlr/error.hpp"
#include "markerlr/lr_core.hpp"
#include "markerlr/rng.hpp"
#include "markerlr/stats_math.hpp"
#include "parallel.hpp"

namespace markerlr {

double select_bandwidth(std::span<const double> x) {
  if (x.size() < 3) throw DegenerateData("bandwidth needs at least three observations");
  const double s = std::sqrt(sample_variance(x));
  if (!(s > 0.0)) throw DegenerateData("zero standard deviation");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(s, iqr / 1.349) : s;
  return 1.06 * spread * std::pow(static_cast<double>(x.size()), -0.2);
}

KernelEstimate make_kernel_estimate(std::span<const double> x) {
  return KernelEstimate{std::vector<double>(x.begin(), x.end()), select_bandwidth(x)};
}

double kernel_cdf(const KernelEstimate &est, double t) noexcept {
  double s = 0.0;
  for (double c : est.centers) s += normal_cdf((t - c) / est.bandwidth);
  return s / static_cast<double>(est.centers.size());
}

KsScore ks_d_statistic(std::span<const double> x) {
  const PooledFit normal = fit_pooled_normal(x);
  const KernelEstimate est = make_kernel_estimate(x);
  const double sd = std::sqrt(normal.sigma2);
  KsScore out;
  out.bandwidth_used = est.bandwidth;
  for (double v : x) {
    const double gap = std::abs(kernel_cdf(est, v) - normal_cdf((v - normal.mu) / sd));
    out.d = std::max(out.d, gap);
  }
  out.d = std::min(out.d, 1.0);
  return out;
}

LillieforsNullTable::LillieforsNullTable(std::size_t sample_size, std::size_t replicates,
                                         std::uint64_t seed)
    : sample_size_(sample_size), seed_(seed) {
  if (sample_size < 3) throw RegimeViolation("the D statistic needs N >= 3");
  if (replicates < kMinLillieforsReplicates)
    throw ConfigError("Lilliefors calibration needs at least " +
                      std::to_string(kMinLillieforsReplicates) + " replicates");
  sorted_.reserve(replicates);
  std::vector<double> sample(sample_size);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  const std::uint64_t tag = stream_tag("lilliefors");
  for (std::size_t r = 0; r < replicates; ++r) {
    auto rng = CounterRng::derive(seed, {tag, sample_size, r});
    normal.reset();
    for (auto &v : sample) v = normal(rng);
    sorted_.push_back(ks_d_statistic(sample).d);
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double LillieforsNullTable::p_value(double d) const noexcept {
  const auto first_ge = std::lower_bound(sorted_.begin(), sorted_.end(), d);
  const auto at_least = static_cast<double>(sorted_.end() - first_ge);
  return (1.0 + at_least) / (static_cast<double>(sorted_.size()) + 1.0);
}

double lilliefors_pvalue(double d, std::size_t sample_size, std::size_t replicates,
                         std::uint64_t seed) {
  return LillieforsNullTable(sample_size, replicates, seed).p_value(d);
}

std::vector<ProteinScore> score_matrix_ks(const ExpressionMatrix &m,
                                          const KsScoreOptions &options) {
  if (m.samples() < 3) throw RegimeViolation("the D statistic needs N >= 3");
  const LillieforsNullTable table(m.samples(), options.replicates, options.seed);
  return score_matrix_ks(m, table, options.threads);
}

std::vector<ProteinScore> score_matrix_ks(const ExpressionMatrix &m,
                                          const LillieforsNullTable &table,
                                          unsigned threads) {
  if (table.sample_size() != m.samples())
    throw ConfigError("null table was built for N=" + std::to_string(table.sample_size()) +
                      " but the matrix has N=" + std::to_string(m.samples()));
  std::vector<ProteinScore> out(m.proteins());
  detail::parallel_for(m.proteins(), threads, [&](std::size_t j) {
    ProteinScore s;
    s.protein_id = m.protein_ids()[j];
    s.kind = StatisticKind::ks_d;
    try {
      s.value = ks_d_statistic(m.row(j)).d;
      s.p_value = table.p_value(s.value);
    } catch (const DegenerateData &) {
      s.value = 0.0;
      s.p_value = 1.0;
      s.degenerate = true;
    }
    out[j] = std::move(s);
  });
  return out;
}

} // namespace markerlr
