#include "markerlr/select.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "markerlr/error.hpp"

namespace markerlr {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

// Indices ordered by descending ranking value; ties by ascending index.
std::vector<std::size_t> descending_order(std::span<const ProteinScore> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranking_value(scores[a]) > ranking_value(scores[b]);
  });
  return order;
}

std::vector<RankedValue> preview(std::span<const ProteinScore> scores,
                                 const std::vector<std::size_t> &order,
                                 std::size_t length) {
  std::vector<RankedValue> out;
  const std::size_t k = std::min(length, order.size());
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    out.push_back({order[i], scores[order[i]].protein_id, ranking_value(scores[order[i]])});
  return out;
}

SelectionResult by_statistic(std::span<const ProteinScore> scores, double cutoff,
                             SelectionPolicy policy, std::size_t preview_length) {
  SelectionResult r;
  r.cutoff_used = cutoff;
  r.policy = std::move(policy);
  r.universe = scores.size();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (ranking_value(scores[j]) >= cutoff) {
      r.selected.push_back(j);
      r.selected_ids.push_back(scores[j].protein_id);
    }
  }
  r.sorted_preview = preview(scores, descending_order(scores), preview_length);
  return r;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::string_view to_string(CutoffScale scale) noexcept {
  switch (scale) {
  case CutoffScale::deviance: return "deviance";
  case CutoffScale::ln_r: return "lnR";
  case CutoffScale::r: return "R";
  }
  return "deviance";
}

CutoffScale parse_cutoff_scale(std::string_view text) {
  if (text == "deviance") return CutoffScale::deviance;
  if (text == "lnR") return CutoffScale::ln_r;
  if (text == "R") return CutoffScale::r;
  throw ConfigError("unknown cutoff scale '" + std::string(text) +
                    "' (expected deviance, lnR or R)");
}

SelectionPolicy parse_policy(std::string_view text, CutoffScale scale) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "fixed") {
    if (arg.empty()) throw ConfigError("fixed policy needs a cutoff, e.g. fixed:2.5");
    const double c = parse_number(arg, "cutoff");
    if (!(c > 0.0)) throw ConfigError("fixed cutoff must be positive");
    return FixedCutoff{c, scale};
  }
  if (head == "gap") {
    GapKnee g;
    if (!arg.empty()) {
      const double w = parse_number(arg, "gap window");
      if (w < 2 || w != std::floor(w)) throw ConfigError("gap window must be an integer >= 2");
      g.top_window = static_cast<std::size_t>(w);
    }
    return g;
  }
  if (head == "bh") {
    const double q = arg.empty() ? 0.05 : parse_number(arg, "FDR level");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("FDR level must lie in (0, 1)");
    return BhFdr{q};
  }
  throw ConfigError("unknown policy '" + std::string(text) +
                    "' (expected fixed:<c>, gap[:<window>] or bh:<q>)");
}

std::string describe(const SelectionPolicy &policy) {
  std::ostringstream os;
  os.precision(17);
  if (const auto *f = std::get_if<FixedCutoff>(&policy))
    os << "fixed:" << f->cutoff << "@" << to_string(f->scale);
  else if (const auto *g = std::get_if<GapKnee>(&policy))
    os << "gap:" << g->top_window;
  else
    os << "bh:" << std::get<BhFdr>(policy).q;
  return os.str();
}

double ranking_value(const ProteinScore &score) noexcept {
  return score.kind == StatisticKind::welch_t ? std::abs(score.value) : score.value;
}

double cutoff_on_statistic_scale(const FixedCutoff &policy, StatisticKind kind) {
  if (kind != StatisticKind::deviance_lr) {
    if (policy.scale != CutoffScale::deviance)
      throw ConfigError("cutoff scales lnR and R only apply to deviance scores");
    return policy.cutoff;
  }
  switch (policy.scale) {
  case CutoffScale::deviance: return policy.cutoff;
  case CutoffScale::ln_r: return 2.0 * policy.cutoff;
  case CutoffScale::r: return 2.0 * std::log(policy.cutoff);
  }
  return policy.cutoff;
}

SelectionResult select_fixed(std::span<const ProteinScore> scores,
                             const FixedCutoff &policy) {
  if (!(policy.cutoff > 0.0)) throw ConfigError("fixed cutoff must be positive");
  const StatisticKind kind = scores.empty() ? StatisticKind::deviance_lr : scores.front().kind;
  return by_statistic(scores, cutoff_on_statistic_scale(policy, kind), policy,
                      kPreviewLength);
}

SelectionResult select_gap(std::span<const ProteinScore> scores, const GapKnee &policy) {
  if (policy.top_window < 2) throw ConfigError("gap window must be at least 2");
  const std::size_t window = std::min(policy.top_window, scores.size());
  if (window < 2) throw NoGapFound("need at least two scores to look for a drop");

  const auto order = descending_order(scores);
  std::vector<double> s(window);
  for (std::size_t i = 0; i < window; ++i) s[i] = ranking_value(scores[order[i]]);

  const double guard = 0.1 * (s.front() - s.back()) / static_cast<double>(window);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> log_ratios;
  log_ratios.reserve(window - 1);
  double best_log_ratio = -kInf;
  std::size_t best = window;
  for (std::size_t i = 0; i + 1 < window; ++i) {
    double lr = 0.0;
    if (s[i + 1] > 0.0) lr = std::log(s[i] / s[i + 1]);
    else if (s[i] > 0.0) lr = kInf;
    log_ratios.push_back(lr);
    const double drop = s[i] - s[i + 1];
    if (drop > 0.0 && drop >= guard && lr > best_log_ratio) {
      best_log_ratio = lr;
      best = i;
    }
  }
  if (best == window)
    throw NoGapFound("no adjacent drop in the top " + std::to_string(window) +
                     " values passes the size guard");
  if (!(best_log_ratio > policy.min_prominence * median(log_ratios)))
    throw NoGapFound("largest drop in the top " + std::to_string(window) +
                     " values is not distinct from the overall decay");

  return by_statistic(scores, s[best], policy, std::max(policy.top_window, kPreviewLength));
}

SelectionResult select_bh(std::span<const ProteinScore> scores, const BhFdr &policy) {
  if (!(policy.q > 0.0 && policy.q < 1.0)) throw ConfigError("FDR level must lie in (0, 1)");
  const std::size_t m = scores.size();
  std::vector<std::size_t> by_p(m);
  std::iota(by_p.begin(), by_p.end(), std::size_t{0});
  std::stable_sort(by_p.begin(), by_p.end(), [&](std::size_t a, std::size_t b) {
    return scores[a].p_value < scores[b].p_value;
  });
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double threshold = static_cast<double>(i + 1) * policy.q / static_cast<double>(m);
    if (scores[by_p[i]].p_value <= threshold) k = i + 1;
  }

  SelectionResult r;
  r.policy = policy;
  r.universe = m;
  r.cutoff_used = k == 0 ? 0.0 : scores[by_p[k - 1]].p_value;
  r.selected.assign(by_p.begin(), by_p.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(r.selected.begin(), r.selected.end());
  for (std::size_t j : r.selected) r.selected_ids.push_back(scores[j].protein_id);
  r.sorted_preview = preview(scores, descending_order(scores), kPreviewLength);
  return r;
}

SelectionResult select(std::span<const ProteinScore> scores, const SelectionPolicy &policy) {
  return std::visit(
      [&](const auto &p) -> SelectionResult {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FixedCutoff>) return select_fixed(scores, p);
        else if constexpr (std::is_same_v<P, GapKnee>) return select_gap(scores, p);
        else return select_bh(scores, p);
      },
      policy);
}

} // namespace markerlr
