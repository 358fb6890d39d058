#include "markerlr/lr_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "markerlr/error.hpp"
#include "markerlr/stats_math.hpp"
#include "parallel.hpp"

namespace markerlr {

namespace {

constexpr double kFloorFactor = 1e-8;

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

// log(exp(a) + exp(b)), symmetric in its arguments bit for bit.
double log_add(double a, double b) noexcept {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

PooledFit pooled_from_sorted(std::span<const double> xs, double floor) {
  const double n = static_cast<double>(xs.size());
  PooledFit fit;
  fit.mu = mean(xs);
  fit.sigma2 = sum_squared_deviations(xs, fit.mu) / n;
  if (!(fit.sigma2 >= floor) || fit.sigma2 <= 0.0)
    throw DegenerateData("pooled variance is below the variance floor");
  fit.loglik = -0.5 * n * (kLog2Pi + std::log(fit.sigma2) + 1.0);
  return fit;
}

double mixture_loglik(std::span<const double> xs, double lw1, double lw2,
                      const MixtureFit &f) noexcept {
  double ll = 0.0;
  for (double x : xs)
    ll += log_add(lw1 + log_normal_pdf(x, f.mu1, f.sigma21),
                  lw2 + log_normal_pdf(x, f.mu2, f.sigma22));
  return ll;
}

MixtureFit em_sorted(std::span<const double> xs, double w1, MixtureStart start,
                     double floor, const EmOptions &options,
                     std::vector<double> *trace) {
  MixtureFit f;
  f.w1 = w1;
  f.w2 = 1.0 - w1;
  f.mu1 = start.mu1;
  f.mu2 = start.mu2;
  f.sigma21 = std::max(start.sigma21, floor);
  f.sigma22 = std::max(start.sigma22, floor);

  const double lw1 = std::log(f.w1);
  const double lw2 = std::log(f.w2);
  std::vector<double> r1(xs.size()), r2(xs.size());
  double previous = -std::numeric_limits<double>::infinity();

  for (std::size_t it = 0;; ++it) {
    // E-step at the current parameters; its normaliser is the loglik.
    double ll = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double a = lw1 + log_normal_pdf(xs[k], f.mu1, f.sigma21);
      const double b = lw2 + log_normal_pdf(xs[k], f.mu2, f.sigma22);
      const double lse = log_add(a, b);
      r1[k] = std::exp(a - lse);
      r2[k] = std::exp(b - lse);
      ll += lse;
    }
    if (trace) trace->push_back(ll);
    if (options.check_monotone && ll < previous - 1e-9 * std::max(1.0, std::abs(previous)))
      throw std::logic_error("EM log-likelihood decreased");

    f.loglik = ll;
    f.iterations = it;
    if (std::abs(ll - previous) < options.tolerance) {
      f.converged = true;
      return f;
    }
    if (it >= options.max_iterations) return f;
    previous = ll;

    // M-step. A component whose total responsibility underflows keeps its
    // parameters.
    auto update = [&](const std::vector<double> &r, double &mu, double &s2) {
      double sr = 0.0, srx = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        sr += r[k];
        srx += r[k] * xs[k];
      }
      if (!(sr > std::numeric_limits<double>::min())) return;
      const double m = srx / sr;
      double ss = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double d = xs[k] - m;
        ss += r[k] * d * d;
      }
      mu = m;
      s2 = std::max(ss / sr, floor);
    };
    update(r1, f.mu1, f.sigma21);
    update(r2, f.mu2, f.sigma22);
  }
}

void require_design(std::span<const double> x, std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw LayoutError("both conditions need at least one sample");
  if (x.size() != n1 + n2)
    throw LayoutError("sample count does not match n1 + n2");
  if (x.size() < 2) throw DegenerateData("need at least two observations");
  for (double v : x)
    if (!std::isfinite(v)) throw ValueError("non-finite intensity");
}

} // namespace

double variance_floor(std::span<const double> x) noexcept {
  const double v = sample_variance(x);
  return v > 0.0 ? kFloorFactor * v : kFloorFactor;
}

PooledFit fit_pooled_normal(std::span<const double> x) {
  if (x.size() < 2) throw DegenerateData("need at least two observations");
  const auto xs = sorted_copy(x);
  return pooled_from_sorted(xs, variance_floor(xs));
}

MixtureFit run_em(std::span<const double> x, double w1, MixtureStart start,
                  const EmOptions &options) {
  const auto xs = sorted_copy(x);
  return em_sorted(xs, w1, start, variance_floor(xs), options, options.trace);
}

std::vector<MixtureStart> mixture_starts(std::span<const double> x, std::size_t n1,
                                         std::size_t n2) {
  require_design(x, n1, n2);
  const auto c1 = x.first(n1);
  const auto c2 = x.subspan(n1);
  const double m1 = mean(c1);
  const double m2 = mean(c2);
  const double v1 = sum_squared_deviations(c1, m1) / static_cast<double>(n1);
  const double v2 = sum_squared_deviations(c2, m2) / static_cast<double>(n2);

  const auto xs = sorted_copy(x);
  const double mu = mean(xs);
  const double v = sum_squared_deviations(xs, mu) / static_cast<double>(xs.size());
  const double sd = std::sqrt(v);

  std::vector<MixtureStart> starts{
      {m1, m2, v1, v2},
      {mu - sd, mu + sd, v, v},
      {xs.front(), xs.back(), v, v},
  };
  if (n1 != n2) {
    starts.push_back({mu + sd, mu - sd, v, v});
    starts.push_back({xs.back(), xs.front(), v, v});
  }
  return starts;
}

MixtureFit fit_mixture_fixed_weights(std::span<const double> x, std::size_t n1,
                                     std::size_t n2, const EmOptions &options) {
  const auto starts = mixture_starts(x, n1, n2);
  const auto xs = sorted_copy(x);
  const double floor = variance_floor(xs);
  const PooledFit pooled = pooled_from_sorted(xs, floor);
  const double w1 = static_cast<double>(n1) / static_cast<double>(n1 + n2);

  // The nested point (both components equal to the pooled fit) is itself an
  // EM fixed point; keeping it as a candidate guarantees loglik >= pooled.
  MixtureFit best;
  best.w1 = w1;
  best.w2 = 1.0 - w1;
  best.mu1 = best.mu2 = pooled.mu;
  best.sigma21 = best.sigma22 = pooled.sigma2;
  best.loglik = mixture_loglik(xs, std::log(best.w1), std::log(best.w2), best);
  best.converged = true;

  std::vector<double> trace;
  for (const auto &s : starts) {
    std::vector<double> local;
    MixtureFit f = em_sorted(xs, w1, s, floor, options, options.trace ? &local : nullptr);
    if (f.loglik > best.loglik) {
      best = f;
      trace = std::move(local);
    }
  }
  if (options.trace) *options.trace = std::move(trace);
  return best;
}

double deviance_p_value(double deviance) noexcept { return chi2_df2_survival(deviance); }

ProteinScore deviance_lr(std::span<const double> x, std::size_t n1, std::size_t n2,
                         const EmOptions &options) {
  ProteinScore score;
  score.kind = StatisticKind::deviance_lr;
  try {
    const PooledFit pooled = fit_pooled_normal(x);
    const MixtureFit mixture = fit_mixture_fixed_weights(x, n1, n2, options);
    score.value = std::max(0.0, 2.0 * (mixture.loglik - pooled.loglik));
    score.p_value = deviance_p_value(score.value);
    score.diagnostics = LrDiagnostics{mixture, pooled};
  } catch (const DegenerateData &) {
    score.value = 0.0;
    score.p_value = 1.0;
    score.degenerate = true;
  }
  return score;
}

std::vector<ProteinScore> score_matrix_lr(const ExpressionMatrix &m,
                                          const LrScoreOptions &options) {
  if (!options.allow_small_samples &&
      std::min(m.n1(), m.n2()) < kMinLrSamplesPerCondition)
    throw RegimeViolation("the likelihood-ratio statistic needs at least " +
                          std::to_string(kMinLrSamplesPerCondition) +
                          " samples per condition (got n1=" + std::to_string(m.n1()) +
                          ", n2=" + std::to_string(m.n2()) + ")");

  std::vector<ProteinScore> out(m.proteins());
  detail::parallel_for(m.proteins(), options.threads, [&](std::size_t j) {
    const auto x = m.grouped_row(j);
    ProteinScore s = deviance_lr(x, m.n1(), m.n2(), options.em);
    s.protein_id = m.protein_ids()[j];
    if (!options.keep_diagnostics) s.diagnostics.reset();
    out[j] = std::move(s);
  });
  return out;
}

} // namespace markerlr
