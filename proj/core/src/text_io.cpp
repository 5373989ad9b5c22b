#include "momatch/text_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace momatch {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string next_line(std::istream& is, const char* what) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw std::invalid_argument(std::string(what) + ": unexpected end of input");
}

long long parse_int(std::string_view text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("text_io: bad integer '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_size(std::string_view text) {
  const long long v = parse_int(text);
  if (v < 0) throw std::invalid_argument("text_io: negative count '" + std::string(text) + "'");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> expect_record(const std::string& line, std::string_view tag,
                                       std::size_t fields) {
  const auto parts = split(line, ',');
  if (parts.front() != tag || (fields != 0 && parts.size() != fields)) {
    throw std::invalid_argument("text_io: expected '" + std::string(tag) + "' record, got '" +
                                line + "'");
  }
  return {parts.begin(), parts.end()};
}

std::pair<MultiIndex, double> read_term(const std::string& line, std::size_t n) {
  const auto parts = split(line, ',');
  if (parts.size() != n + 1) {
    throw std::invalid_argument("text_io: term line has the wrong width: '" + line + "'");
  }
  std::vector<int> exps(n);
  for (std::size_t j = 0; j < n; ++j) exps[j] = static_cast<int>(parse_int(parts[j]));
  return {MultiIndex(std::move(exps)), parse_double(parts[n])};
}

void write_term(std::ostream& os, const MultiIndex& idx, double value) {
  for (int e : idx.exponents()) os << e << ',';
  os << format_double(value) << '\n';
}

const char* relation_tag(lp::Relation r) { return lp::to_string(r); }

lp::Relation parse_relation(std::string_view s) {
  for (auto r : {lp::Relation::kLessEqual, lp::Relation::kEqual, lp::Relation::kGreaterEqual}) {
    if (s == lp::to_string(r)) return r;
  }
  throw std::invalid_argument("text_io: bad relation '" + std::string(s) + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("bad number '" + std::string(text) + "'");
  }
  return v;
}

void write_polynomial(std::ostream& os, const Polynomial& p) {
  os << "polynomial," << p.dimension() << ',' << p.num_terms() << '\n';
  for (const auto& [idx, coef] : p.terms()) write_term(os, idx, coef);
}

Polynomial read_polynomial(std::istream& is) {
  const auto header = next_line(is, "read_polynomial");
  const auto parts = expect_record(header, "polynomial", 3);
  const std::size_t n = parse_size(parts[1]);
  const std::size_t terms = parse_size(parts[2]);
  Polynomial::Terms map;
  for (std::size_t t = 0; t < terms; ++t) {
    auto [idx, coef] = read_term(next_line(is, "read_polynomial"), n);
    if (!map.emplace(std::move(idx), coef).second) {
      throw std::invalid_argument("read_polynomial: duplicate term");
    }
  }
  return Polynomial(n, std::move(map));
}

void write_halfspace_function(std::ostream& os, const HalfspaceFunction& f) {
  os << "halfspace_function," << f.dimension() << ',' << f.num_halfspaces() << '\n';
  for (const auto& h : f.halfspaces()) {
    os << "halfspace";
    for (double w : h.normal()) os << ',' << format_double(w);
    os << ',' << format_double(h.threshold()) << '\n';
  }
  os << "truth_table";
  for (int v : f.truth_table()) os << ',' << v;
  os << '\n';
}

HalfspaceFunction read_halfspace_function(std::istream& is) {
  const auto parts = expect_record(next_line(is, "read_halfspace_function"),
                                   "halfspace_function", 3);
  const std::size_t n = parse_size(parts[1]);
  const std::size_t m = parse_size(parts[2]);
  std::vector<Halfspace> hs;
  for (std::size_t r = 0; r < m; ++r) {
    const auto line = next_line(is, "read_halfspace_function");
    const auto f = expect_record(line, "halfspace", n + 2);
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = parse_double(f[j + 1]);
    hs.emplace_back(std::move(w), parse_double(f[n + 1]));
  }
  const auto line = next_line(is, "read_halfspace_function");
  const auto t = expect_record(line, "truth_table", 0);
  std::vector<int> table;
  for (std::size_t i = 1; i < t.size(); ++i) table.push_back(static_cast<int>(parse_int(t[i])));
  return HalfspaceFunction(std::move(hs), std::move(table));
}

void write_hypothesis(std::ostream& os, const Hypothesis& h) {
  os << "hypothesis\n";
  write_polynomial(os, h.polynomial);
  os << "threshold," << format_double(h.threshold) << '\n';
}

Hypothesis read_hypothesis(std::istream& is) {
  expect_record(next_line(is, "read_hypothesis"), "hypothesis", 1);
  Polynomial p = read_polynomial(is);
  const auto t = expect_record(next_line(is, "read_hypothesis"), "threshold", 2);
  return Hypothesis{std::move(p), parse_double(t[1])};
}

void write_moments(std::ostream& os, const MomentVector& m) {
  os << "moments," << m.dimension() << ',' << m.order() << ',' << m.size() << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) write_term(os, m.indices()[i], m.values()[i]);
}

MomentVector read_moments(std::istream& is) {
  const auto parts = expect_record(next_line(is, "read_moments"), "moments", 4);
  const std::size_t n = parse_size(parts[1]);
  const int k = static_cast<int>(parse_int(parts[2]));
  const std::size_t size = parse_size(parts[3]);
  std::vector<MultiIndex> indices;
  std::vector<double> values;
  for (std::size_t i = 0; i < size; ++i) {
    auto [idx, v] = read_term(next_line(is, "read_moments"), n);
    indices.push_back(std::move(idx));
    values.push_back(v);
  }
  return MomentVector(n, k, std::move(indices), std::move(values));
}

void write_finite_distribution(std::ostream& os, const FiniteDistribution& d) {
  os << "n=" << d.dimension() << " size=" << d.size() << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (double v : d.support()[i]) os << format_double(v) << ' ';
    os << format_double(d.probs()[i]) << '\n';
  }
}

FiniteDistribution read_finite_distribution(std::istream& is) {
  const auto header = next_line(is, "read_finite_distribution");
  const auto parts = split_spaces(header);
  if (parts.size() != 2 || parts[0].substr(0, 2) != "n=" || parts[1].substr(0, 5) != "size=") {
    throw std::invalid_argument("read_finite_distribution: bad header '" + header + "'");
  }
  const std::size_t n = parse_size(parts[0].substr(2));
  const std::size_t size = parse_size(parts[1].substr(5));
  std::vector<Point> support;
  std::vector<double> probs;
  for (std::size_t i = 0; i < size; ++i) {
    const auto line = next_line(is, "read_finite_distribution");
    const auto f = split_spaces(line);
    if (f.size() != n + 1) {
      throw std::invalid_argument("read_finite_distribution: bad atom line '" + line + "'");
    }
    Point x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = parse_double(f[j]);
    support.push_back(std::move(x));
    probs.push_back(parse_double(f[n]));
  }
  return FiniteDistribution(std::move(support), std::move(probs));
}

void write_lp(std::ostream& os, const lp::LinearProgram& program) {
  os << "lp," << (program.sense() == lp::Sense::kMinimize ? "min" : "max") << ','
     << program.num_variables() << ',' << program.num_constraints() << '\n';
  os << "objective";
  for (double c : program.objective()) os << ',' << format_double(c);
  os << '\n';
  for (std::size_t i = 0; i < program.num_constraints(); ++i) {
    os << "row," << relation_tag(program.relation(i)) << ',' << format_double(program.rhs(i));
    for (double a : program.row(i)) os << ',' << format_double(a);
    os << '\n';
  }
  for (std::size_t j = 0; j < program.num_variables(); ++j) {
    os << "bounds," << format_double(program.lower(j)) << ',' << format_double(program.upper(j))
       << '\n';
  }
}

lp::LinearProgram read_lp(std::istream& is) {
  const auto head = expect_record(next_line(is, "read_lp"), "lp", 4);
  lp::Sense sense;
  if (head[1] == "min") {
    sense = lp::Sense::kMinimize;
  } else if (head[1] == "max") {
    sense = lp::Sense::kMaximize;
  } else {
    throw std::invalid_argument("read_lp: bad sense");
  }
  const std::size_t vars = parse_size(head[2]);
  const std::size_t rows = parse_size(head[3]);
  const auto obj = expect_record(next_line(is, "read_lp"), "objective", vars + 1);
  std::vector<double> c(vars);
  for (std::size_t j = 0; j < vars; ++j) c[j] = parse_double(obj[j + 1]);
  lp::LinearProgram program(sense, std::move(c));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto r = expect_record(next_line(is, "read_lp"), "row", vars + 3);
    std::vector<double> a(vars);
    for (std::size_t j = 0; j < vars; ++j) a[j] = parse_double(r[j + 3]);
    program.add_constraint(std::move(a), parse_relation(r[1]), parse_double(r[2]));
  }
  for (std::size_t j = 0; j < vars; ++j) {
    const auto b = expect_record(next_line(is, "read_lp"), "bounds", 3);
    program.set_bounds(j, parse_double(b[1]), parse_double(b[2]));
  }
  return program;
}

}  // namespace momatch
