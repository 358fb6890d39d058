#ifndef MARKERLR_STATS_MATH_HPP
#define MARKERLR_STATS_MATH_HPP

#include <span>

namespace markerlr {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

/// Standard normal CDF via erfc (accurate in both tails).
double normal_cdf(double z) noexcept;

/// log N(x; mu, sigma2)
double log_normal_pdf(double x, double mu, double sigma2) noexcept;

/// Survival function of chi-square with 2 degrees of freedom: exp(-x/2).
double chi2_df2_survival(double x) noexcept;

/// Upper alpha-quantile of chi-square with 2 degrees of freedom: -2 ln(alpha).
double chi2_df2_upper_quantile(double alpha) noexcept;

double mean(std::span<const double> x) noexcept;

/// Sum of squared deviations from `centre`.
double sum_squared_deviations(std::span<const double> x, double centre) noexcept;

/// Unbiased (N-1) sample variance. Zero for fewer than two values.
double sample_variance(std::span<const double> x) noexcept;

/// Linear-interpolation quantile of already sorted data (Hyndman-Fan type 7).
double sorted_quantile(std::span<const double> sorted, double prob) noexcept;

} // namespace markerlr

#endif // MARKERLR_STATS_MATH_HPP
