#include "markerlr/stats_math.hpp"

#include <cmath>

namespace markerlr {

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double log_normal_pdf(double x, double mu, double sigma2) noexcept {
  const double d = x - mu;
  return -0.5 * (kLog2Pi + std::log(sigma2) + d * d / sigma2);
}

double chi2_df2_survival(double x) noexcept {
  if (x <= 0.0) return 1.0;
  return std::exp(-0.5 * x);
}

double chi2_df2_upper_quantile(double alpha) noexcept { return -2.0 * std::log(alpha); }

double mean(std::span<const double> x) noexcept {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sum_squared_deviations(std::span<const double> x, double centre) noexcept {
  double s = 0.0;
  for (double v : x) {
    const double d = v - centre;
    s += d * d;
  }
  return s;
}

double sample_variance(std::span<const double> x) noexcept {
  if (x.size() < 2) return 0.0;
  return sum_squared_deviations(x, mean(x)) / static_cast<double>(x.size() - 1);
}

double sorted_quantile(std::span<const double> sorted, double prob) noexcept {
  if (sorted.empty()) return 0.0;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = lo + 1 < sorted.size() ? lo + 1 : lo;
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace markerlr
