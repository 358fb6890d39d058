#include "markerlr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>

#include "markerlr/error.hpp"
#include "markerlr/ks_small.hpp"
#include "markerlr/lr_core.hpp"
#include "markerlr/rng.hpp"
#include "markerlr/simgen.hpp"
#include "markerlr/stats_math.hpp"
#include "parallel.hpp"

namespace markerlr {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

} // namespace

RunOutcome score_against_truth(const SelectionResult &result, const Truth &truth) {
  if (truth.protein_ids.size() != truth.is_true.size())
    throw TruthMismatch("truth ids and flags differ in length");
  if (result.universe != truth.protein_ids.size())
    throw TruthMismatch("selection covers " + std::to_string(result.universe) +
                        " proteins but truth covers " +
                        std::to_string(truth.protein_ids.size()));
  std::unordered_map<std::string_view, bool> flag;
  flag.reserve(truth.protein_ids.size());
  for (std::size_t j = 0; j < truth.protein_ids.size(); ++j)
    flag.emplace(truth.protein_ids[j], truth.is_true[j]);

  RunOutcome out;
  std::unordered_set<std::string_view> seen;
  for (const auto &id : result.selected_ids) {
    const auto it = flag.find(id);
    if (it == flag.end()) throw TruthMismatch("selected protein '" + id + "' has no truth label");
    if (!seen.insert(id).second) continue;
    ++out.selected;
    if (it->second) ++out.true_positives;
    else ++out.false_positives;
  }
  const auto n_true = static_cast<std::size_t>(
      std::count(truth.is_true.begin(), truth.is_true.end(), true));
  out.false_negatives = n_true - out.true_positives;
  out.sensitivity = n_true == 0 ? 0.0
                                : static_cast<double>(out.true_positives) /
                                      static_cast<double>(n_true);
  out.empirical_fdr = static_cast<double>(out.false_positives) /
                      static_cast<double>(std::max<std::size_t>(1, out.selected));
  return out;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw RegimeViolation("Welch test needs at least two samples per group");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na;
  const double vb = sample_variance(b) / nb;
  const double se2 = va + vb;
  if (!(se2 > 0.0)) throw DegenerateData("both groups have zero variance");

  WelchResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const boost::math::students_t_distribution<double> dist(r.df);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

std::vector<ProteinScore> ttest_baseline(const ExpressionMatrix &m) {
  if (m.n1() < 2 || m.n2() < 2)
    throw RegimeViolation("Welch test needs at least two samples per condition");
  std::vector<ProteinScore> out;
  out.reserve(m.proteins());
  for (std::size_t j = 0; j < m.proteins(); ++j) {
    const auto x = m.grouped_row(j);
    const std::span<const double> all(x);
    ProteinScore s;
    s.protein_id = m.protein_ids()[j];
    s.kind = StatisticKind::welch_t;
    try {
      const WelchResult w = welch_t_test(all.first(m.n1()), all.subspan(m.n1()));
      s.value = w.t;
      s.p_value = w.p_value;
    } catch (const DegenerateData &) {
      s.degenerate = true;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CalibrationRow> convergence_table(std::span<const std::size_t> n_values,
                                              std::size_t replicates, std::uint64_t seed,
                                              std::span<const double> alphas) {
  if (replicates == 0) throw ConfigError("calibration needs at least one replicate");
  std::vector<CalibrationRow> rows;
  for (std::size_t n : n_values) {
    if (n < 3) throw ConfigError("calibration needs n >= 3 per condition");
    SimSpec spec = preset("water-n10");
    spec.true_markers = 0;
    spec.proteins = replicates;
    spec.per_condition = n;
    spec.seed = CounterRng::derive(seed, {stream_tag("calibrate"), n}).key();
    const LabeledMatrix null = generate(spec);
    LrScoreOptions options;
    options.allow_small_samples = true;
    const auto scores = score_matrix_lr(null.matrix, options);
    for (double alpha : alphas) {
      CalibrationRow row;
      row.per_condition = n;
      row.proteins = replicates;
      row.alpha = alpha;
      row.chi2_quantile = chi2_df2_upper_quantile(alpha);
      const auto exceed = std::count_if(scores.begin(), scores.end(), [&](const ProteinScore &s) {
        return s.value > row.chi2_quantile;
      });
      row.tail_probability = static_cast<double>(exceed) / static_cast<double>(replicates);
      row.mc_std_error = std::sqrt(row.tail_probability * (1.0 - row.tail_probability) /
                                   static_cast<double>(replicates));
      rows.push_back(row);
    }
  }
  return rows;
}

double default_fdr_level(std::size_t per_condition) noexcept {
  return per_condition < kMinLrSamplesPerCondition ? 0.10 : 0.05;
}

MethodSpec parse_method(std::string_view text) {
  const auto dash = text.find('-');
  if (dash == std::string_view::npos)
    throw ConfigError("method '" + std::string(text) + "' must look like <stat>-<policy>");
  const std::string_view stat = text.substr(0, dash);
  const std::string_view policy = text.substr(dash + 1);

  MethodSpec m;
  m.name = std::string(text);
  if (stat == "lr") m.statistic = StatisticKind::deviance_lr;
  else if (stat == "ks") m.statistic = StatisticKind::ks_d;
  else if (stat == "welch") m.statistic = StatisticKind::welch_t;
  else throw ConfigError("unknown statistic '" + std::string(stat) + "' in method");

  m.policy = parse_policy(policy);
  if (const auto *bh = std::get_if<BhFdr>(&m.policy)) {
    if (policy.find(':') != std::string_view::npos) m.q = bh->q;
  } else if (m.statistic == StatisticKind::welch_t) {
    throw ConfigError("the Welch baseline only supports BH selection");
  }
  return m;
}

EvalReport benchmark(const BenchmarkConfig &config) {
  if (config.runs == 0) throw ConfigError("benchmark needs at least one run");
  std::vector<MethodSpec> methods;
  for (const auto &m : config.methods) methods.push_back(parse_method(m));
  std::vector<SimSpec> specs;
  for (const auto &p : config.presets) specs.push_back(preset(p));

  // One Lilliefors table per sample size, shared by every run.
  std::map<std::size_t, LillieforsNullTable> tables;
  const bool needs_ks = std::any_of(methods.begin(), methods.end(), [](const MethodSpec &m) {
    return m.statistic == StatisticKind::ks_d;
  });
  const std::uint64_t ks_seed = CounterRng::derive(config.seed, {stream_tag("ks-null")}).key();
  if (needs_ks) {
    for (const auto &s : specs)
      if (!tables.count(2 * s.per_condition))
        tables.emplace(2 * s.per_condition,
                       LillieforsNullTable(2 * s.per_condition, config.ks_replicates, ks_seed));
  }

  EvalReport report;
  report.seed = config.seed;
  for (std::size_t p = 0; p < specs.size(); ++p) {
    const std::string &preset_name = config.presets[p];
    std::vector<std::vector<BenchRow>> per_run(config.runs);

    detail::parallel_for(config.runs, config.threads, [&](std::size_t run) {
      SimSpec spec = specs[p];
      spec.seed = CounterRng::derive(config.seed, {stream_tag(preset_name), run}).key();
      const LabeledMatrix lm = generate(spec);
      const Truth truth{lm.matrix.protein_ids(), lm.is_true};
      const double default_q = default_fdr_level(spec.per_condition);

      std::map<StatisticKind, std::vector<ProteinScore>> cache;
      auto scores_for = [&](StatisticKind kind) -> const std::vector<ProteinScore> & {
        auto it = cache.find(kind);
        if (it != cache.end()) return it->second;
        std::vector<ProteinScore> s;
        if (kind == StatisticKind::deviance_lr) {
          LrScoreOptions o;
          o.allow_small_samples = true;
          s = score_matrix_lr(lm.matrix, o);
        } else if (kind == StatisticKind::ks_d) {
          s = score_matrix_ks(lm.matrix, tables.at(lm.matrix.samples()));
        } else {
          s = ttest_baseline(lm.matrix);
        }
        return cache.emplace(kind, std::move(s)).first->second;
      };

      for (const auto &method : methods) {
        BenchRow row;
        row.method = method.name;
        row.preset = preset_name;
        row.run = run;
        row.run_seed = spec.seed;
        try {
          const auto &scores = scores_for(method.statistic);
          SelectionPolicy policy = method.policy;
          if (auto *bh = std::get_if<BhFdr>(&policy)) bh->q = method.q.value_or(default_q);
          SelectionResult sel;
          try {
            sel = select(scores, policy);
          } catch (const NoGapFound &) {
            sel = select_bh(scores, BhFdr{method.q.value_or(default_q)});
            row.flagged = true;
            row.note = "no-gap:bh-fallback";
          }
          row.outcome = score_against_truth(sel, truth);
          row.cutoff_used = sel.cutoff_used;
        } catch (const Error &e) {
          row.flagged = true;
          row.note = std::string(e.category());
        }
        per_run[run].push_back(std::move(row));
      }
    });

    for (auto &rows : per_run)
      for (auto &r : rows) report.rows.push_back(std::move(r));
  }

  for (const auto &preset_name : config.presets) {
    for (const auto &method : methods) {
      BenchSummary s;
      s.method = method.name;
      s.preset = preset_name;
      for (const auto &r : report.rows) {
        if (r.method != method.name || r.preset != preset_name) continue;
        ++s.runs;
        if (r.flagged) ++s.flagged_runs;
        s.mean_sensitivity += r.outcome.sensitivity;
        s.mean_fdr += r.outcome.empirical_fdr;
        s.mean_selected += static_cast<double>(r.outcome.selected);
      }
      if (s.runs > 0) {
        const double n = static_cast<double>(s.runs);
        s.mean_sensitivity /= n;
        s.mean_fdr /= n;
        s.mean_selected /= n;
      }
      report.summary.push_back(s);
    }
  }
  return report;
}

std::string render_runs_csv(const EvalReport &report) {
  std::ostringstream os;
  os << "method,preset,run,run_seed,selected,true_positives,false_positives,"
        "false_negatives,sensitivity,empirical_fdr,cutoff_used,flagged,note\n";
  for (const auto &r : report.rows) {
    os << r.method << ',' << r.preset << ',' << r.run << ',' << r.run_seed << ','
       << r.outcome.selected << ',' << r.outcome.true_positives << ','
       << r.outcome.false_positives << ',' << r.outcome.false_negatives << ','
       << fixed(r.outcome.sensitivity, 6) << ',' << fixed(r.outcome.empirical_fdr, 6) << ','
       << fixed(r.cutoff_used, 6) << ',' << (r.flagged ? 1 : 0) << ',' << r.note << '\n';
  }
  return os.str();
}

std::string render_summary_csv(const EvalReport &report) {
  std::ostringstream os;
  os << "method,preset,runs,flagged_runs,mean_sensitivity,mean_fdr,mean_selected\n";
  for (const auto &s : report.summary) {
    os << s.method << ',' << s.preset << ',' << s.runs << ',' << s.flagged_runs << ','
       << fixed(s.mean_sensitivity, 6) << ',' << fixed(s.mean_fdr, 6) << ','
       << fixed(s.mean_selected, 3) << '\n';
  }
  return os.str();
}

std::string render_table_text(const EvalReport &report) {
  std::vector<std::string> presets_seen, methods_seen;
  for (const auto &s : report.summary) {
    if (std::find(presets_seen.begin(), presets_seen.end(), s.preset) == presets_seen.end())
      presets_seen.push_back(s.preset);
    if (std::find(methods_seen.begin(), methods_seen.end(), s.method) == methods_seen.end())
      methods_seen.push_back(s.method);
  }
  constexpr std::size_t kLabel = 14, kCell = 12;
  std::ostringstream os;
  os << pad_right("", kLabel);
  for (const auto &p : presets_seen) os << "| " << pad_right(p, 2 * kCell);
  os << '\n' << pad_right("", kLabel);
  for (std::size_t i = 0; i < presets_seen.size(); ++i)
    os << "| " << pad_right("Sensitivity", kCell) << pad_right("Emp. FDR", kCell);
  os << '\n' << std::string(kLabel + presets_seen.size() * (2 * kCell + 2), '-') << '\n';
  for (const auto &m : methods_seen) {
    os << pad_right(m, kLabel);
    for (const auto &p : presets_seen) {
      const auto it = std::find_if(report.summary.begin(), report.summary.end(),
                                   [&](const BenchSummary &s) {
                                     return s.method == m && s.preset == p;
                                   });
      os << "| " << pad_right(fixed(it->mean_sensitivity, 2), kCell)
         << pad_right(fixed(it->mean_fdr, 2), kCell);
    }
    os << '\n';
  }
  os << "Not reimplemented: LIMMA, RP, SAM, PCA, PLR, PLS-DA, SVM\n";
  return os.str();
}

} // namespace markerlr
