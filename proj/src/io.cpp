#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "almostdom/cli.hpp"
#include "almostdom/error.hpp"

namespace almostdom {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && end == text.data() + text.size() && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

// Numeric rows of a CSV file, each with its 1-based line number.
struct Table {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
};

Table read_table(const std::string& path, std::size_t columns, bool nonnegative,
                 std::size_t first_checked_col) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open '" + path + "'");
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    std::vector<double> row(cells.size());
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_number(cells[c], row[c]) && bad_col == 0) bad_col = c + 1;
    }
    if (first) {
      first = false;
      if (bad_col != 0) continue;  // header
    }
    if (cells.size() != columns) {
      throw ParseError(line_no, std::min(cells.size(), columns) + 1,
                       "expected " + std::to_string(columns) + " column(s), found " +
                           std::to_string(cells.size()));
    }
    if (bad_col != 0) {
      throw ParseError(line_no, bad_col,
                       "not a finite number: '" + std::string(cells[bad_col - 1]) + "'");
    }
    if (nonnegative) {
      for (std::size_t c = first_checked_col; c < columns; ++c) {
        if (row[c] < 0.0) throw NegativeValueError(line_no, row[c]);
      }
    }
    table.rows.push_back(std::move(row));
    table.line_numbers.push_back(line_no);
  }
  if (table.rows.empty()) throw Error(ErrorKind::EmptySample, "'" + path + "' has no data rows");
  return table;
}

void split_groups(const Table& table, std::vector<double>& one, std::vector<double>& two) {
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double g = table.rows[i][0];
    if (g == 1.0) {
      one.push_back(table.rows[i][1]);
    } else if (g == 2.0) {
      two.push_back(table.rows[i][1]);
    } else {
      throw ParseError(table.line_numbers[i], 1, "group must be 1 or 2");
    }
  }
}

}  // namespace

TwoSample load_csv(const std::string& path, SamplingScheme scheme, bool nonnegative) {
  if (scheme == SamplingScheme::MatchedPairs) {
    const Table table = read_table(path, 2, nonnegative, 0);
    PairedSample pairs;
    for (const auto& row : table.rows) {
      pairs.first.push_back(row[0]);
      pairs.second.push_back(row[1]);
    }
    return TwoSample::matched(std::move(pairs));
  }
  const Table table = read_table(path, 2, nonnegative, 1);
  Sample one{{}, "1"};
  Sample two{{}, "2"};
  split_groups(table, one.values, two.values);
  if (one.values.empty() || two.values.empty()) {
    throw Error(ErrorKind::EmptySample, "'" + path + "' must contain rows for groups 1 and 2");
  }
  return TwoSample::independent(std::move(one), std::move(two));
}

TwoSample load_csv(const std::string& path1, const std::string& path2, bool nonnegative) {
  return TwoSample::independent(load_single(path1, nonnegative), load_single(path2, nonnegative));
}

Sample load_single(const std::string& path, bool nonnegative, int group) {
  Sample out;
  out.label = path;
  if (group == 0) {
    for (const auto& row : read_table(path, 1, nonnegative, 0).rows) out.values.push_back(row[0]);
    return out;
  }
  std::vector<double> one;
  std::vector<double> two;
  split_groups(read_table(path, 2, nonnegative, 1), one, two);
  out.values = group == 1 ? std::move(one) : std::move(two);
  if (out.values.empty()) {
    throw Error(ErrorKind::EmptySample, "no rows for group " + std::to_string(group));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report records

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_json(const ReportRecord& r) {
  nlohmann::ordered_json j;
  j["family"] = r.family;
  j["m"] = r.m;
  j["direction"] = r.direction;
  j["scheme"] = r.scheme;
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["c_hat"] = r.c_hat;
  j["ci_lo"] = r.ci_lo;
  j["ci_hi"] = r.ci_hi;
  j["t_n"] = r.t_n;
  j["xi0"] = r.xi0;
  j["alpha"] = r.alpha;
  j["n_boot"] = r.n_boot;
  j["seed"] = r.seed;
  j["boundary_flag"] = r.boundary_flag;
  j["runtime_ms"] = r.runtime_ms;
  return j.dump(2);
}

ReportRecord record_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ReportRecord r;
    j.at("family").get_to(r.family);
    j.at("m").get_to(r.m);
    j.at("direction").get_to(r.direction);
    j.at("scheme").get_to(r.scheme);
    j.at("n1").get_to(r.n1);
    j.at("n2").get_to(r.n2);
    j.at("c_hat").get_to(r.c_hat);
    j.at("ci_lo").get_to(r.ci_lo);
    j.at("ci_hi").get_to(r.ci_hi);
    j.at("t_n").get_to(r.t_n);
    j.at("xi0").get_to(r.xi0);
    j.at("alpha").get_to(r.alpha);
    j.at("n_boot").get_to(r.n_boot);
    j.at("seed").get_to(r.seed);
    j.at("boundary_flag").get_to(r.boundary_flag);
    j.at("runtime_ms").get_to(r.runtime_ms);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, 0, e.what());
  }
}

std::string csv_header(const ReportRecord&) {
  return "family,m,direction,scheme,n1,n2,c_hat,ci_lo,ci_hi,t_n,xi0,alpha,n_boot,seed,"
         "boundary_flag,runtime_ms";
}

std::string to_csv(const ReportRecord& r) {
  std::ostringstream out;
  out << r.family << ',' << r.m << ',' << r.direction << ',' << r.scheme << ',' << r.n1 << ','
      << r.n2 << ',' << format_double(r.c_hat) << ',' << format_double(r.ci_lo) << ','
      << format_double(r.ci_hi) << ',' << format_double(r.t_n) << ',' << format_double(r.xi0)
      << ',' << format_double(r.alpha) << ',' << r.n_boot << ',' << r.seed << ','
      << (r.boundary_flag ? "true" : "false") << ',' << format_double(r.runtime_ms);
  return out.str();
}

ReportRecord record_from_csv(const std::string& header, const std::string& row) {
  const auto names = split(header);
  const auto cells = split(row);
  if (names.size() != cells.size()) {
    throw ParseError(2, std::min(names.size(), cells.size()) + 1, "header/row width mismatch");
  }
  ReportRecord r;
  for (std::size_t c = 0; c < names.size(); ++c) {
    const std::string_view name = names[c];
    const std::string cell(cells[c]);
    double num = 0.0;
    const bool numeric = parse_number(cell, num);
    const auto need = [&] {
      if (!numeric) throw ParseError(2, c + 1, "expected a number for " + std::string(name));
      return num;
    };
    if (name == "family") r.family = cell;
    else if (name == "direction") r.direction = cell;
    else if (name == "scheme") r.scheme = cell;
    else if (name == "m") r.m = static_cast<int>(need());
    else if (name == "n1") r.n1 = static_cast<std::size_t>(need());
    else if (name == "n2") r.n2 = static_cast<std::size_t>(need());
    else if (name == "c_hat") r.c_hat = need();
    else if (name == "ci_lo") r.ci_lo = need();
    else if (name == "ci_hi") r.ci_hi = need();
    else if (name == "t_n") r.t_n = need();
    else if (name == "xi0") r.xi0 = need();
    else if (name == "alpha") r.alpha = need();
    else if (name == "n_boot") r.n_boot = static_cast<std::size_t>(need());
    else if (name == "seed") r.seed = std::stoull(cell);
    else if (name == "boundary_flag") r.boundary_flag = cell == "true";
    else if (name == "runtime_ms") r.runtime_ms = need();
    else throw ParseError(1, c + 1, "unknown column " + std::string(name));
  }
  return r;
}

}  // namespace almostdom
