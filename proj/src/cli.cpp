#include "markerlr/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "markerlr/error.hpp"
#include "markerlr/eval.hpp"
#include "markerlr/io.hpp"
#include "markerlr/ks_small.hpp"
#include "markerlr/lr_core.hpp"
#include "markerlr/rng.hpp"
#include "markerlr/select.hpp"
#include "markerlr/simgen.hpp"

namespace markerlr {

namespace fs = std::filesystem;

namespace {

template <typename T> std::string join(const std::vector<T> &v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class ArtifactWriter {
public:
  ArtifactWriter(const RunConfig &config) : config_(config) {
    header_ = "# " + std::string(kToolName) + " " + std::string(kToolVersion) + "\n" +
              "# command=" + config.command + " seed=" + std::to_string(config.seed) +
              " config_digest=" + config_digest(config) + "\n";
    if (!config.deterministic) header_ += "# generated=" + utc_timestamp() + "\n";
  }

  template <typename Fn> fs::path write(const std::string &name, Fn &&body) const {
    const fs::path path = fs::path(config_.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << header_;
    body(out);
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
    return path;
  }

private:
  const RunConfig &config_;
  std::string header_;
};

ExpressionMatrix load_input(const RunConfig &config) {
  std::optional<fs::path> layout;
  if (!config.layout.empty()) layout = config.layout;
  return read_matrix_csv(config.input, layout);
}

void validate_paths(const RunConfig &config) {
  const bool needs_input = config.command == "score" || config.command == "select";
  if (needs_input) {
    if (config.input.empty()) throw ConfigError("--input is required for " + config.command);
    if (!fs::is_regular_file(config.input))
      throw ConfigError("input file '" + config.input + "' does not exist");
    if (!config.layout.empty() && !fs::is_regular_file(config.layout))
      throw ConfigError("layout file '" + config.layout + "' does not exist");
  }
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (!fs::is_directory(config.out_dir))
    throw ConfigError("cannot create output directory '" + config.out_dir + "'");
}

std::vector<ProteinScore> score_input(const RunConfig &config, const ExpressionMatrix &m,
                                      std::ostream &err) {
  const std::string stat = resolve_statistic(config.statistic, m.n1(), m.n2());
  if (stat == "lr") {
    LrScoreOptions o;
    o.allow_small_samples = config.allow_small;
    o.threads = config.threads;
    if (config.allow_small && std::min(m.n1(), m.n2()) < kMinLrSamplesPerCondition)
      err << "warning: scoring with the likelihood-ratio statistic below 5 samples per "
             "condition; its chi-square calibration does not hold there\n";
    return score_matrix_lr(m, o);
  }
  if (m.n1() != m.n2() || std::min(m.n1(), m.n2()) >= kMinLrSamplesPerCondition)
    err << "note: the D statistic is intended for balanced designs with fewer than 5 "
           "samples per condition\n";
  KsScoreOptions o;
  o.replicates = config.replicates;
  o.seed = CounterRng::derive(config.seed, {stream_tag("ks-null")}).key();
  o.threads = config.threads;
  return score_matrix_ks(m, o);
}

int execute(const RunConfig &config, std::ostream &out, std::ostream &err) {
  validate_paths(config);
  const ArtifactWriter writer(config);

  if (config.command == "score" || config.command == "select") {
    const ExpressionMatrix m = load_input(config);
    const auto scores = score_input(config, m, err);
    writer.write("scores.csv", [&](std::ostream &o) { write_scores_csv(o, scores); });
    out << "scored " << scores.size() << " proteins (n1=" << m.n1() << ", n2=" << m.n2()
        << ", statistic=" << to_string(scores.front().kind) << ")\n";
    if (config.command == "score") return kExitOk;

    SelectionPolicy policy = parse_policy(config.policy, parse_cutoff_scale(config.cutoff_scale));
    if (auto *g = std::get_if<GapKnee>(&policy); g && config.policy == "gap")
      g->top_window = config.top_window;
    const SelectionResult sel = select(scores, policy);
    writer.write("selected.csv", [&](std::ostream &o) { write_selection_csv(o, sel); });
    writer.write("sorted_preview.csv", [&](std::ostream &o) { write_preview_csv(o, sel); });
    out << "selected " << sel.selected.size() << " of " << sel.universe
        << " proteins (policy " << describe(sel.policy)
        << ", cutoff " << format_double(sel.cutoff_used) << ")\n";
    return kExitOk;
  }

  if (config.command == "simulate") {
    SimSpec spec = preset(config.preset);
    spec.seed = config.seed;
    const LabeledMatrix lm = generate(spec);
    writer.write("matrix.csv", [&](std::ostream &o) { write_matrix_csv(o, lm.matrix); });
    writer.write("truth.csv", [&](std::ostream &o) { write_truth_csv(o, lm); });
    out << "simulated " << lm.matrix.proteins() << " proteins, " << lm.true_count()
        << " true markers, n=" << spec.per_condition << " per condition ("
        << config.preset << ", " << describe(spec.errors) << ")\n";
    return kExitOk;
  }

  if (config.command == "calibrate") {
    const auto rows = convergence_table(config.calibrate_n, config.replicates, config.seed,
                                        config.alphas);
    writer.write("calibration.csv", [&](std::ostream &o) { write_calibration_csv(o, rows); });
    out << "n     alpha   P[2lnR > q]   (MC s.e.)\n";
    for (const auto &r : rows)
      out << std::left << std::setw(6) << r.per_condition << std::setw(8) << r.alpha
          << std::fixed << std::setprecision(4) << r.tail_probability << "        ("
          << r.mc_std_error << ")\n"
          << std::defaultfloat;
    return kExitOk;
  }

  if (config.command == "bench") {
    BenchmarkConfig bc;
    bc.methods = config.methods;
    bc.presets = config.bench_presets;
    bc.runs = config.runs;
    bc.seed = config.seed;
    bc.ks_replicates = config.replicates;
    bc.threads = config.threads;
    const EvalReport report = benchmark(bc);
    writer.write("bench_runs.csv", [&](std::ostream &o) { o << render_runs_csv(report); });
    writer.write("bench_summary.csv", [&](std::ostream &o) { o << render_summary_csv(report); });
    const std::string table = render_table_text(report);
    writer.write("bench_table.txt", [&](std::ostream &o) { o << table; });
    out << table;
    return kExitOk;
  }

  throw ConfigError("unknown command '" + config.command + "'");
}

int exit_code_for(const Error &e) {
  const auto c = e.category();
  if (c == "RegimeViolation") return kExitRegimeViolation;
  if (c == "NoGapFound") return kExitNoGapFound;
  if (c == "ParseError" || c == "LayoutError" || c == "ValueError" || c == "ConfigError" ||
      c == "TruthMismatch" || c == "InvalidSpec")
    return kExitInputError;
  return kExitFailure;
}

} // namespace

std::string canonical_serialization(const RunConfig &c) {
  // Keys in lexicographic order. out_dir and threads do not affect results.
  std::ostringstream os;
  os.precision(17);
  os << "allow_small=" << (c.allow_small ? 1 : 0) << '\n'
     << "alphas=" << join(c.alphas) << '\n'
     << "bench_presets=" << join(c.bench_presets) << '\n'
     << "calibrate_n=" << join(c.calibrate_n) << '\n'
     << "command=" << c.command << '\n'
     << "cutoff_scale=" << c.cutoff_scale << '\n'
     << "input=" << c.input << '\n'
     << "layout=" << c.layout << '\n'
     << "methods=" << join(c.methods) << '\n'
     << "policy=" << c.policy << '\n'
     << "preset=" << c.preset << '\n'
     << "replicates=" << c.replicates << '\n'
     << "runs=" << c.runs << '\n'
     << "seed=" << c.seed << '\n'
     << "statistic=" << c.statistic << '\n'
     << "top_window=" << c.top_window << '\n';
  return os.str();
}

std::string config_digest(const RunConfig &config) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0')
     << fnv1a64(canonical_serialization(config));
  return os.str();
}

std::string resolve_statistic(std::string_view requested, std::size_t n1, std::size_t n2) {
  if (requested == "lr" || requested == "ks") return std::string(requested);
  if (requested == "auto")
    return std::min(n1, n2) >= kMinLrSamplesPerCondition ? "lr" : "ks";
  throw ConfigError("unknown statistic '" + std::string(requested) + "' (expected lr, ks or auto)");
}

bool parse_command_line(int argc, const char *const *argv, RunConfig &config, int &exit_code,
                        std::ostream &out, std::ostream &err) {
  CLI::App app{"Marker discovery with likelihood-ratio and kernel KS statistics",
               std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto common = [&](CLI::App *sub) {
    sub->add_option("--seed", config.seed, "Seed for every random stream");
    sub->add_option("--out-dir", config.out_dir, "Directory for output artifacts");
    sub->add_flag("--deterministic", config.deterministic,
                  "Omit the timestamp from artifact headers");
    sub->add_option("--threads", config.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  };
  auto scoring = [&](CLI::App *sub) {
    sub->add_option("--input", config.input, "Matrix CSV (protein_id,<samples>...)")->required();
    sub->add_option("--layout", config.layout, "Sidecar CSV mapping sample to condition 1|2");
    sub->add_option("--stat", config.statistic, "Statistic")
        ->check(CLI::IsMember({"lr", "ks", "auto"}));
    sub->add_option("--replicates", config.replicates,
                    "Monte-Carlo replicates for the D statistic's null table");
    sub->add_flag("--allow-small", config.allow_small,
                  "Allow the likelihood-ratio statistic below 5 samples per condition");
  };

  auto *score = app.add_subcommand("score", "Score every protein");
  scoring(score);
  common(score);

  auto *sel = app.add_subcommand("select", "Score and select markers");
  scoring(sel);
  common(sel);
  sel->add_option("--policy", config.policy, "fixed:<c> | gap[:<window>] | bh:<q>");
  sel->add_option("--cutoff-scale", config.cutoff_scale, "Scale of a fixed cutoff")
      ->check(CLI::IsMember({"deviance", "lnR", "R"}));
  sel->add_option("--window", config.top_window, "Top-window size for gap detection");

  auto *sim = app.add_subcommand("simulate", "Write a simulated matrix and its truth labels");
  sim->add_option("--preset", config.preset, "Simulation preset");
  common(sim);

  auto *cal = app.add_subcommand("calibrate", "Null tail probabilities of the deviance");
  cal->add_option("--n", config.calibrate_n, "Samples per condition")->delimiter(',');
  cal->add_option("--alpha", config.alphas, "Levels")->delimiter(',');
  cal->add_option("--replicates", config.replicates, "Null proteins per n");
  common(cal);

  auto *bench = app.add_subcommand("bench", "Sensitivity and FDR over seeded simulations");
  bench->add_option("--methods", config.methods, "e.g. lr-gap,ks-gap,welch-bh")->delimiter(',');
  bench->add_option("--presets", config.bench_presets, "Simulation presets")->delimiter(',');
  bench->add_option("--preset", config.bench_presets, "Alias of --presets")->delimiter(',');
  bench->add_option("--runs", config.runs, "Seeded runs per preset");
  bench->add_option("--replicates", config.replicates, "Null-table replicates for ks methods");
  common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    exit_code = app.exit(e, out, err);
    if (exit_code != 0) exit_code = kExitInputError;
    return false;
  }
  config.command = app.get_subcommands().front()->get_name();
  return true;
}

int run(const RunConfig &config, std::ostream &out, std::ostream &err) {
  try {
    return execute(config, out, err);
  } catch (const Error &e) {
    err << "error category=" << e.category() << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception &e) {
    err << "error category=Internal: " << e.what() << '\n';
    return kExitFailure;
  }
}

} // namespace markerlr
