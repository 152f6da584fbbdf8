#pragma once

// CSV ingestion, report records and the command-line front end.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "almostdom/coefficients.hpp"
#include "almostdom/empirical.hpp"

namespace almostdom {

/// Reads samples from CSV.
///   independent, one file:   columns group,value with group in {1, 2}
///   independent, two files:  one value per row in each file
///   matched:                 columns x1,x2
/// A non-numeric first row is treated as a header. Blank lines are
/// skipped. Rows and columns in errors are 1-based file positions.
/// Throws FileNotFound, ParseError, NegativeValueError (only when
/// `nonnegative` is set), EmptySample.
TwoSample load_csv(const std::string& path, SamplingScheme scheme, bool nonnegative);
TwoSample load_csv(const std::string& path1, const std::string& path2, bool nonnegative);
/// A single column of values (or the value column of group,value rows for
/// `group`).
Sample load_single(const std::string& path, bool nonnegative, int group = 0);

struct ReportRecord {
  std::string family;
  int m = 1;
  std::string direction;
  std::string scheme;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double c_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double t_n = 0.0;
  double xi0 = 0.0;
  double alpha = 0.0;
  std::size_t n_boot = 0;
  std::uint64_t seed = 0;
  bool boundary_flag = false;
  double runtime_ms = 0.0;

  bool operator==(const ReportRecord&) const = default;
};

std::string to_json(const ReportRecord& record);
/// Throws ParseError on malformed input.
ReportRecord record_from_json(const std::string& text);
std::string csv_header(const ReportRecord&);
std::string to_csv(const ReportRecord& record);
ReportRecord record_from_csv(const std::string& header, const std::string& row);

/// Formats with 17 significant digits.
std::string format_double(double value);

/// Runs the command line. Exit codes: 0 success, 1 usage or other error,
/// 2 degenerate curves, 3 boundary estimate under --strict.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace almostdom
