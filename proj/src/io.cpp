#include "markerlr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "markerlr/error.hpp"

namespace markerlr {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits one CSV line. Double-quoted fields may contain commas; "" is an
// escaped quote.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
  cells.emplace_back(trim(cur));
  return cells;
}

bool parse_double(std::string_view text, double &out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

Condition parse_condition(std::string_view text, const std::string &where) {
  if (text == "1") return Condition::first;
  if (text == "2") return Condition::second;
  throw LayoutError(where + ": condition must be 1 or 2, got '" + std::string(text) + "'");
}

std::ifstream open_or_throw(const std::filesystem::path &p) {
  std::ifstream in(p);
  if (!in) throw ParseError("cannot open '" + p.string() + "'");
  return in;
}

} // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

ExpressionMatrix parse_matrix_csv(std::istream &in,
                                  const std::optional<std::vector<Condition>> &layout) {
  std::vector<std::string> header;
  std::vector<std::string> inline_layout;
  std::size_t layout_line = 0;
  std::vector<std::string> protein_ids;
  std::set<std::string> seen_ids;
  std::vector<double> values;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (t.starts_with("#layout")) {
        auto cells = split_csv(t, line_no);
        inline_layout.assign(cells.begin() + 1, cells.end());
        layout_line = line_no;
      }
      continue;
    }
    auto cells = split_csv(t, line_no);
    if (header.empty()) {
      if (cells.front() != "protein_id")
        throw ParseError("line " + std::to_string(line_no) +
                         ": header must start with 'protein_id'");
      if (cells.size() < 3) throw ParseError("header needs at least two sample columns");
      header.assign(cells.begin() + 1, cells.end());
      std::set<std::string> uniq(header.begin(), header.end());
      if (uniq.size() != header.size()) throw ParseError("duplicate sample column names");
      continue;
    }
    if (cells.size() != header.size() + 1)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size() + 1) + " cells, found " +
                       std::to_string(cells.size()));
    const std::string &id = cells.front();
    if (id.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty protein id");
    if (!seen_ids.insert(id).second)
      throw ParseError("line " + std::to_string(line_no) + ": duplicate protein id '" + id + "'");
    for (std::size_t k = 0; k < header.size(); ++k) {
      double v = 0.0;
      if (!parse_double(cells[k + 1], v) || !std::isfinite(v))
        throw ValueError("protein '" + id + "', sample '" + header[k] +
                         "' (line " + std::to_string(line_no) + ", column " +
                         std::to_string(k + 2) + "): invalid intensity '" + cells[k + 1] + "'");
      values.push_back(v);
    }
    protein_ids.push_back(id);
  }
  if (header.empty()) throw ParseError("matrix file has no header row");
  if (protein_ids.empty()) throw ParseError("matrix file has no protein rows");

  std::vector<Condition> conditions;
  if (layout) {
    conditions = *layout;
  } else if (!inline_layout.empty()) {
    if (inline_layout.size() != header.size())
      throw LayoutError("layout line " + std::to_string(layout_line) + " has " +
                        std::to_string(inline_layout.size()) + " entries for " +
                        std::to_string(header.size()) + " samples");
    for (std::size_t k = 0; k < header.size(); ++k)
      conditions.push_back(parse_condition(inline_layout[k], "sample '" + header[k] + "'"));
  } else {
    throw LayoutError("no condition layout: pass a layout file or add a #layout line");
  }
  return ExpressionMatrix(std::move(protein_ids), std::move(header), std::move(conditions),
                          std::move(values));
}

std::vector<Condition> parse_layout_csv(std::istream &in,
                                        std::span<const std::string> sample_ids) {
  std::map<std::string, Condition> by_sample;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cells = split_csv(t, line_no);
    if (cells.size() != 2)
      throw LayoutError("layout line " + std::to_string(line_no) + ": expected sample,condition");
    if (first) {
      first = false;
      if (cells[1] != "1" && cells[1] != "2") continue; // header row
    }
    const Condition c = parse_condition(cells[1], "layout line " + std::to_string(line_no));
    if (!by_sample.emplace(cells[0], c).second)
      throw LayoutError("sample '" + cells[0] + "' listed twice in layout");
  }
  std::vector<Condition> out;
  for (const auto &s : sample_ids) {
    const auto it = by_sample.find(s);
    if (it == by_sample.end()) throw LayoutError("sample '" + s + "' has no condition in layout");
    out.push_back(it->second);
    by_sample.erase(it);
  }
  if (!by_sample.empty())
    throw LayoutError("layout names unknown sample '" + by_sample.begin()->first + "'");
  return out;
}

ExpressionMatrix read_matrix_csv(const std::filesystem::path &matrix,
                                 const std::optional<std::filesystem::path> &layout) {
  auto in = open_or_throw(matrix);
  if (!layout) return parse_matrix_csv(in);
  // Parse once without a layout to learn the sample order.
  std::vector<std::string> samples;
  {
    std::string line;
    while (std::getline(in, line)) {
      const std::string_view t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      auto cells = split_csv(t, 1);
      samples.assign(cells.begin() + 1, cells.end());
      break;
    }
  }
  auto lin = open_or_throw(*layout);
  const auto conditions = parse_layout_csv(lin, samples);
  in.clear();
  in.seekg(0);
  return parse_matrix_csv(in, conditions);
}

void write_matrix_csv(std::ostream &out, const ExpressionMatrix &m) {
  out << "protein_id";
  for (const auto &s : m.sample_ids()) out << ',' << s;
  out << "\n#layout";
  for (Condition c : m.layout()) out << ',' << static_cast<int>(c);
  out << '\n';
  for (std::size_t j = 0; j < m.proteins(); ++j) {
    out << m.protein_ids()[j];
    for (double v : m.row(j)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_truth_csv(std::ostream &out, const LabeledMatrix &lm) {
  out << "protein_id,is_true\n";
  for (std::size_t j = 0; j < lm.matrix.proteins(); ++j)
    out << lm.matrix.protein_ids()[j] << ',' << (lm.is_true[j] ? 1 : 0) << '\n';
}

Truth parse_truth_csv(std::istream &in) {
  Truth t;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto cells = split_csv(s, line_no);
    if (header) {
      header = false;
      continue;
    }
    if (cells.size() != 2 || (cells[1] != "0" && cells[1] != "1"))
      throw ParseError("truth line " + std::to_string(line_no) + ": expected protein_id,0|1");
    t.protein_ids.push_back(cells[0]);
    t.is_true.push_back(cells[1] == "1");
  }
  return t;
}

void write_scores_csv(std::ostream &out, const std::vector<ProteinScore> &scores) {
  out << "protein_id,statistic,value,p_value,degenerate\n";
  for (const auto &s : scores)
    out << s.protein_id << ',' << to_string(s.kind) << ',' << format_double(s.value) << ','
        << format_double(s.p_value) << ',' << (s.degenerate ? 1 : 0) << '\n';
}

void write_selection_csv(std::ostream &out, const SelectionResult &result) {
  out << "# policy=" << describe(result.policy)
      << " cutoff_used=" << format_double(result.cutoff_used)
      << " selected=" << result.selected.size() << " of " << result.universe << '\n';
  out << "protein_id\n";
  for (const auto &id : result.selected_ids) out << id << '\n';
}

void write_preview_csv(std::ostream &out, const SelectionResult &result) {
  out << "rank,value,protein_id\n";
  for (std::size_t i = 0; i < result.sorted_preview.size(); ++i) {
    const auto &r = result.sorted_preview[i];
    out << i + 1 << ',' << format_double(r.value) << ',' << r.protein_id << '\n';
  }
}

void write_calibration_csv(std::ostream &out, const std::vector<CalibrationRow> &rows) {
  out << "n,proteins,alpha,chi2_quantile,tail_probability,mc_std_error\n";
  for (const auto &r : rows)
    out << r.per_condition << ',' << r.proteins << ',' << format_double(r.alpha) << ','
        << format_double(r.chi2_quantile) << ',' << format_double(r.tail_probability) << ','
        << format_double(r.mc_std_error) << '\n';
}

} // namespace markerlr
