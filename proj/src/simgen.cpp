#include "markerlr/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <boost/random/cauchy_distribution.hpp>
#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "markerlr/error.hpp"
#include "markerlr/rng.hpp"

namespace markerlr {

namespace {

std::string padded(std::string_view prefix, std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, value);
  return std::string(prefix) + buf;
}

int digits(std::size_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

std::vector<bool> place_markers(const SimSpec &spec) {
  std::vector<std::size_t> idx(spec.proteins);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto rng = CounterRng::derive(spec.seed, {stream_tag("placement")});
  for (std::size_t i = 0; i < spec.true_markers; ++i) {
    boost::random::uniform_int_distribution<std::size_t> pick(i, spec.proteins - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<bool> is_true(spec.proteins, false);
  for (std::size_t i = 0; i < spec.true_markers; ++i) is_true[idx[i]] = true;
  return is_true;
}

class ErrorSampler {
public:
  explicit ErrorSampler(const ErrorLaw &law) : law_(law) {}

  double operator()(CounterRng &rng) {
    return std::visit(
        [&](const auto &l) -> double {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, NormalErrors>)
            return boost::random::normal_distribution<double>(0.0, std::sqrt(l.sigma2))(rng);
          else if constexpr (std::is_same_v<L, CauchyErrors>)
            return boost::random::cauchy_distribution<double>(l.location, l.scale)(rng);
          else
            return boost::random::chi_squared_distribution<double>(l.df)(rng);
        },
        law_);
  }

private:
  const ErrorLaw &law_;
};

} // namespace

std::string describe(const ErrorLaw &law) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto &l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, NormalErrors>) os << "normal(" << l.sigma2 << ")";
        else if constexpr (std::is_same_v<L, CauchyErrors>)
          os << "cauchy(" << l.location << "," << l.scale << ")";
        else os << "chisq(" << l.df << ")";
      },
      law);
  return os.str();
}

void validate(const SimSpec &spec) {
  if (spec.proteins == 0) throw InvalidSpec("protein count must be positive");
  if (spec.true_markers > spec.proteins)
    throw InvalidSpec("true-marker count exceeds protein count");
  if (spec.per_condition == 0) throw InvalidSpec("need at least one sample per condition");
  if (!(spec.subject_variance > 0.0) || !(spec.protein_variance > 0.0))
    throw InvalidSpec("subject and protein variances must be positive");
  if (!(spec.fold_ratio > 0.0)) throw InvalidSpec("fold ratio must be positive");
  if (!std::isfinite(spec.grand_mean)) throw InvalidSpec("grand mean must be finite");
  std::visit(
      [](const auto &l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, NormalErrors>) {
          if (!(l.sigma2 > 0.0)) throw InvalidSpec("error variance must be positive");
        } else if constexpr (std::is_same_v<L, CauchyErrors>) {
          if (!(l.scale > 0.0)) throw InvalidSpec("Cauchy scale must be positive");
        } else {
          if (!(l.df > 0.0)) throw InvalidSpec("chi-square df must be positive");
        }
      },
      spec.errors);
}

std::size_t LabeledMatrix::true_count() const noexcept {
  return static_cast<std::size_t>(std::count(is_true.begin(), is_true.end(), true));
}

LabeledMatrix generate(const SimSpec &spec) {
  validate(spec);
  const std::size_t n = spec.per_condition;
  const std::size_t samples = 2 * n;

  std::vector<std::string> sample_ids;
  std::vector<Condition> layout;
  for (int c = 1; c <= 2; ++c) {
    for (std::size_t k = 0; k < n; ++k) {
      sample_ids.push_back(padded("c" + std::to_string(c) + "_s", k + 1, digits(n)));
      layout.push_back(c == 1 ? Condition::first : Condition::second);
    }
  }

  const std::uint64_t tag_condition = stream_tag("condition");
  const std::uint64_t tag_protein = stream_tag("protein");
  const std::uint64_t tag_subject = stream_tag("subject");
  const std::uint64_t tag_error = stream_tag("error");

  const double sd_subject = std::sqrt(spec.subject_variance);
  const double sd_protein = std::sqrt(spec.protein_variance);

  std::vector<double> shared_subject;
  if (spec.subject_effect == SubjectEffect::shared) {
    auto rng = CounterRng::derive(spec.seed, {tag_subject});
    boost::random::normal_distribution<double> s(0.0, sd_subject);
    for (std::size_t k = 0; k < samples; ++k) shared_subject.push_back(s(rng));
  }

  const std::vector<bool> is_true = place_markers(spec);
  std::vector<std::array<double, 2>> effects(spec.proteins);

  std::vector<std::string> protein_ids;
  protein_ids.reserve(spec.proteins);
  std::vector<double> values(spec.proteins * samples);
  ErrorSampler error(spec.errors);
  const int width = digits(spec.proteins);

  for (std::size_t j = 0; j < spec.proteins; ++j) {
    protein_ids.push_back(padded("prot_", j + 1, width));

    auto rng_c = CounterRng::derive(spec.seed, {tag_condition, j});
    std::array<double, 2> c{};
    if (is_true[j]) {
      const double u = boost::random::uniform_real_distribution<double>(1.0, 10.0)(rng_c);
      c = {std::log2(2.0 * spec.fold_ratio) + u, std::log2(2.0) + u};
    } else {
      const double u = boost::random::uniform_real_distribution<double>(1.0, 100.0)(rng_c);
      c = {u, u};
    }
    effects[j] = c;

    auto rng_f = CounterRng::derive(spec.seed, {tag_protein, j});
    const double f = boost::random::normal_distribution<double>(0.0, sd_protein)(rng_f);

    auto rng_s = CounterRng::derive(spec.seed, {tag_subject, j});
    boost::random::normal_distribution<double> subject(0.0, sd_subject);
    auto rng_e = CounterRng::derive(spec.seed, {tag_error, j});

    for (std::size_t k = 0; k < samples; ++k) {
      const double s = spec.subject_effect == SubjectEffect::shared ? shared_subject[k]
                                                                    : subject(rng_s);
      values[j * samples + k] = spec.grand_mean + c[k < n ? 0 : 1] + s + f + error(rng_e);
    }
  }

  return LabeledMatrix{ExpressionMatrix(std::move(protein_ids), std::move(sample_ids),
                                       std::move(layout), std::move(values)),
                      is_true, std::move(effects)};
}

const std::vector<NamedPreset> &presets() {
  static const std::vector<NamedPreset> all = [] {
    auto make = [](std::size_t n, ErrorLaw law) {
      SimSpec s;
      s.proteins = 1000;
      s.true_markers = 30;
      s.per_condition = n;
      s.grand_mean = 15.0;
      s.subject_variance = 27.37;
      s.protein_variance = 0.98;
      s.fold_ratio = 3.0;
      s.errors = law;
      return s;
    };
    return std::vector<NamedPreset>{
        {"water-n10", make(10, NormalErrors{0.48})},
        {"human-n10", make(10, NormalErrors{2.23})},
        {"water-n3", make(3, NormalErrors{0.48})},
        {"human-n3", make(3, NormalErrors{2.23})},
        {"cauchy-n10", make(10, CauchyErrors{15.0, 2.0})},
        {"chisq-n10", make(10, ChiSquareErrors{2.0})},
        {"cauchy-n3", make(3, CauchyErrors{15.0, 2.0})},
        {"chisq-n3", make(3, ChiSquareErrors{2.0})},
    };
  }();
  return all;
}

SimSpec preset(std::string_view name) {
  for (const auto &p : presets())
    if (p.name == name) return p.spec;
  std::string known;
  for (const auto &p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

} // namespace markerlr
