#include "harness/report.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "momatch/kahan.hpp"
#include "momatch/text_io.hpp"

namespace momatch::harness {

std::vector<Cell> Report::select(const std::string& metric, int degree) const {
  std::vector<Cell> out;
  for (const auto& c : cells) {
    if (c.metric == metric && (degree < 0 || c.degree == degree)) out.push_back(c);
  }
  return out;
}

void sort_cells(std::vector<Cell>& cells) {
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.seed, a.degree, a.metric, a.parameter) <
           std::tie(b.seed, b.degree, b.metric, b.parameter);
  });
}

std::vector<std::pair<std::string, std::string>> summarize(const std::vector<Cell>& cells) {
  struct Acc {
    std::size_t count = 0;
    KahanSum sum;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
  };
  std::map<std::pair<std::string, int>, Acc> acc;
  for (const auto& c : cells) {
    auto& a = acc[{c.metric, c.degree}];
    ++a.count;
    a.sum.add(c.value);
    a.lo = std::min(a.lo, c.value);
    a.hi = std::max(a.hi, c.value);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, a] : acc) {
    const std::string stem = key.first + ".d" + std::to_string(key.second);
    out.emplace_back(stem + ".count", std::to_string(a.count));
    out.emplace_back(stem + ".mean", format_double(a.sum.value() / static_cast<double>(a.count)));
    out.emplace_back(stem + ".min", format_double(a.lo));
    out.emplace_back(stem + ".max", format_double(a.hi));
  }
  return out;
}

std::string report_csv(const Report& report) {
  std::ostringstream os;
  os << "seed,degree,metric,parameter,value\n";
  for (const auto& c : report.cells) {
    os << c.seed << ',' << c.degree << ',' << c.metric << ',' << format_double(c.parameter) << ','
       << format_double(c.value) << '\n';
  }
  return os.str();
}

std::string report_summary(const Report& report) {
  std::ostringstream os;
  os << "version = " << report.version << '\n';
  os << "kind = " << report.kind << '\n';
  for (const auto& [k, v] : report.echo) os << "config." << k << " = " << v << '\n';
  os << "cells = " << report.cells.size() << '\n';
  for (const auto& [k, v] : report.summary) os << k << " = " << v << '\n';
  return os.str();
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto put = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  put("report.csv", report_csv(report));
  put("summary.txt", report_summary(report));
}

}  // namespace momatch::harness
