#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace momatch::harness {

// One result value. `degree` is the polynomial degree for learn, the moment
// order k for sandwich/fool/moments, and 0 where no order applies.
struct Cell {
  std::uint64_t seed = 0;
  int degree = 0;
  std::string metric;
  double parameter = 0.0;
  double value = 0.0;
};

struct Report {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> echo;
  std::vector<Cell> cells;  // sorted by (seed, degree, metric, parameter)
  std::vector<std::pair<std::string, std::string>> summary;
  double wall_seconds = 0.0;  // not written to report.csv or summary.txt
  std::string version;

  // Cells matching metric (and degree, when given).
  std::vector<Cell> select(const std::string& metric, int degree = -1) const;
};

void sort_cells(std::vector<Cell>& cells);

// Per (metric, degree): count, mean, min and max over cells.
std::vector<std::pair<std::string, std::string>> summarize(const std::vector<Cell>& cells);

// Header `seed,degree,metric,parameter,value`; reals with 17 significant digits.
std::string report_csv(const Report& report);

// `key = value` lines: version, kind, config.<key> echoes, then summary.
std::string report_summary(const Report& report);

// Writes report.csv and summary.txt, creating `dir` if needed.
void write_report(const Report& report, const std::filesystem::path& dir);

}  // namespace momatch::harness
