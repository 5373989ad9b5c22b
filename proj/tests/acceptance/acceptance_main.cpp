// Runs every acceptance criterion against the checked-in configs and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "harness/config.hpp"
#include "harness/experiments.hpp"
#include "harness/report.hpp"

using namespace momatch::harness;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path g_configs;

Report run_config(const std::string& name) { return run(load_config(g_configs / name)); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::map<std::uint64_t, std::vector<Cell>> by_seed(const std::vector<Cell>& cells) {
  std::map<std::uint64_t, std::vector<Cell>> out;
  for (const auto& c : cells) out[c.seed].push_back(c);
  return out;
}

Outcome count_at_most(const Report& r, const std::string& metric, double limit,
                      std::size_t needed) {
  const auto cells = r.select(metric);
  std::size_t good = 0;
  double worst = 0.0;
  for (const auto& c : cells) {
    if (c.value <= limit) ++good;
    worst = std::max(worst, c.value);
  }
  return {good >= needed && cells.size() >= needed,
          std::to_string(good) + "/" + std::to_string(cells.size()) + " trials with " + metric +
              " <= " + fmt(limit) + " (need " + std::to_string(needed) + ", worst " + fmt(worst) +
              ")"};
}

Outcome criterion1() {
  const auto r = run_config("01_pac_halfspace.cfg");
  auto out = count_at_most(r, "test_error", 0.03, 9);
  const double per_seed = r.wall_seconds / static_cast<double>(std::max<std::size_t>(1, by_seed(r.cells).size()));
  out.pass = out.pass && per_seed < 60.0;
  out.detail += ", " + fmt(per_seed) + " s per seed (limit 60)";
  return out;
}

Outcome criterion2() {
  const auto r = run_config("02_intersection_ball.cfg");
  auto out = count_at_most(r, "best_test_error", 0.05, 8);
  std::size_t monotone_breaks = 0;
  for (const auto& [seed, cells] : by_seed(r.select("train_l1"))) {
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i].value > cells[i - 1].value + 1e-6) ++monotone_breaks;
    }
  }
  out.pass = out.pass && monotone_breaks == 0;
  out.detail += ", " + std::to_string(monotone_breaks) + " increases of train L1 in degree";
  return out;
}

Outcome criterion3() { return count_at_most(run_config("03_agnostic_noise.cfg"), "test_error", 0.15, 9); }

Outcome criterion4() { return count_at_most(run_config("04_smoothed_cube.cfg"), "best_test_error", 0.07, 8); }

Outcome criterion5() {
  const auto r = run_config("05_duality.cfg");
  std::size_t good = 0;
  double gap = 0.0, slack = 0.0, mismatch = 0.0;
  const auto seeds = by_seed(r.cells);
  for (const auto& [seed, cells] : seeds) {
    std::map<std::string, double> m;
    for (const auto& c : cells) m[c.metric] = c.value;
    const double g = std::max(m.at("rel_gap_max"), m.at("rel_gap_min"));
    const double s = std::min(m.at("upper_slack"), m.at("lower_slack"));
    const double x = m.at("excess_mismatch");
    gap = std::max(gap, g);
    slack = std::min(slack, s);
    mismatch = std::max(mismatch, x);
    if (g <= 1e-6 && s >= -1e-8 && x <= 1e-6) ++good;
  }
  return {good == seeds.size() && seeds.size() == 50,
          std::to_string(good) + "/" + std::to_string(seeds.size()) +
              " instances agree; max rel gap " + fmt(gap) + ", min slack " + fmt(slack) +
              ", max excess mismatch " + fmt(mismatch)};
}

Outcome criterion6() {
  const auto a = run_config("06a_fool_x1x2.cfg");
  const auto k1 = a.select("worst_gap", 1);
  const auto k2 = a.select("worst_gap", 2);
  bool pass = k1.size() == 1 && k2.size() == 1 && std::abs(k1[0].value - 0.5) <= 1e-9 &&
              k2[0].value <= 1e-9;
  std::string detail = "x1*x2 gap k=1 " + (k1.empty() ? "?" : fmt(k1[0].value)) + ", k=2 " +
                       (k2.empty() ? "?" : fmt(k2[0].value));

  const auto cfg = load_config(g_configs / "06b_fool_random.cfg");
  const auto b = run(cfg);
  const int n = static_cast<int>(cfg.dimension);
  std::size_t bad = 0;
  double worst_reg = 0.0, worst_full = 0.0;
  for (const auto& [seed, cells] : by_seed(b.cells)) {
    std::map<int, double> worst;
    double reg = 0.0;
    for (const auto& c : cells) {
      if (c.metric == "worst_gap") worst[c.degree] = c.value;
      if (c.metric == "regularity") reg = c.value;
    }
    worst_reg = std::max(worst_reg, reg);
    bool ok = reg <= cfg.max_regularity && worst.count(n) == 1 && worst[n] <= 1e-9;
    for (int k = 2; k <= 4; ++k) ok = ok && worst.count(k) && worst[k] <= worst[k - 1] + 1e-12;
    if (worst.count(n)) worst_full = std::max(worst_full, worst[n]);
    if (!ok) ++bad;
  }
  pass = pass && bad == 0 && !b.cells.empty();
  detail += "; random quadratics: " + std::to_string(bad) + " failures, max regularity " +
            fmt(worst_reg) + ", max gap at k=n " + fmt(worst_full);
  return {pass, detail};
}

Outcome criterion7() {
  const auto cfg = load_config(g_configs / "07a_anticoncentration_pointmass.cfg");
  const auto a = run(cfg);
  const double sigma = std::sqrt(cfg.noise_variance);
  const double n = static_cast<double>(cfg.sample_size);
  bool pass = true;
  std::string detail;
  for (const auto& c : a.select("window_mass")) {
    const double p = c.value;
    const double bound = 0.40 * c.parameter / sigma + 3.0 * std::sqrt(p * (1.0 - p) / n);
    pass = pass && p <= bound;
    detail += "alpha " + fmt(c.parameter) + ": " + fmt(p) + " <= " + fmt(bound) + "; ";
  }
  const auto g = run_config("07b_anticoncentration_gaussian.cfg").select("window_mass");
  const bool gauss_ok = g.size() == 1 && std::abs(g[0].value - 0.0399) <= 0.005;
  detail += "gaussian window " + (g.empty() ? std::string("?") : fmt(g[0].value)) +
            " vs 0.0399 +- 0.005";
  return {pass && gauss_ok && !a.cells.empty(), detail};
}

Outcome criterion8() {
  const auto r = run_config("08_hypercontractivity.cfg");
  double failures = 0.0, checked = 0.0, ratio = 0.0;
  for (const auto& c : r.select("failures")) failures += c.value;
  for (const auto& c : r.select("checked")) checked += c.value;
  for (const auto& c : r.select("max_ratio")) ratio = std::max(ratio, c.value);
  return {failures == 0.0 && checked > 0.0,
          fmt(failures) + " failures over " + fmt(checked) + " polynomials, max lhs/rhs " +
              fmt(ratio)};
}

Outcome criterion9() {
  const auto start = std::chrono::steady_clock::now();
  const auto g = run_config("09a_beta_gaussian.cfg");
  const auto l = run_config("09b_beta_laplace.cfg");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto beta_at = [](const Report& r, int j) {
    const auto cells = r.select("beta", j);
    return cells.empty() ? std::nan("") : cells.front().value;
  };
  const double g16 = beta_at(g, 16);
  const double ratio = beta_at(l, 16) / beta_at(l, 4);
  return {g16 >= 4.0 && ratio <= 2.5 && seconds < 1.0,
          "gaussian beta16 " + fmt(g16) + " >= 4, laplace beta16/beta4 " + fmt(ratio) +
              " <= 2.5, " + fmt(seconds) + " s"};
}

Outcome criterion10() {
  const auto r = run_config("10_moment_bounds.cfg");
  bool pass = !r.cells.empty();
  std::string detail = "min margin by order:";
  for (const auto& c : r.select("min_margin")) {
    pass = pass && c.value >= 10.0;
    detail += " r=" + fmt(c.parameter) + " " + fmt(c.value);
  }
  return {pass, detail + " (need >= 10)"};
}

Outcome criterion11() {
  const auto r = run_config("11_sign_patterns.cfg");
  double violations = 0.0, tested = 0.0;
  for (const auto& c : r.select("violations")) violations += c.value;
  for (const auto& c : r.select("tested")) tested += c.value;
  return {violations == 0.0 && tested > 0.0 && by_seed(r.cells).size() == 200,
          fmt(violations) + " violations over " + fmt(tested) + " sign patterns in " +
              std::to_string(by_seed(r.cells).size()) + " trials"};
}

}  // namespace

int main(int argc, char** argv) {
  g_configs = argc > 1 ? fs::path(argv[1]) : fs::path("configs");
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::stoi(argv[i]));

  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
