#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "harness/config.hpp"
#include "harness/experiments.hpp"
#include "harness/expression.hpp"
#include "harness/report.hpp"

using namespace momatch;
using namespace momatch::harness;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("momatch_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MOMATCH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesKeyValuesWithComments) {
  const auto c = parse_config(
      "# comment\n"
      "kind = learn   # trailing\n"
      "seed = 5\n"
      "\n"
      "degrees = 1, 2,3\n"
      "noise_rate = 0.25\n");
  EXPECT_EQ(c.kind, Kind::kLearn);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.degrees, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(c.noise_rate, 0.25);
  EXPECT_EQ(c.echo.size(), 4u);
}

TEST(Config, ValidationNamesTheField) {
  EXPECT_EQ(field_of("kind = learn\nseed = 1\nnoise_rate = 1.5\n"), "noise_rate");
  EXPECT_EQ(field_of("kind = learn\n"), "seed");
  EXPECT_EQ(field_of("kind = learn\nseed = 1\nbogus = 3\n"), "bogus");
  EXPECT_EQ(field_of("kind = teach\nseed = 1\n"), "kind");
  EXPECT_EQ(field_of("kind = learn\nseed = -4\n"), "seed");
  EXPECT_EQ(field_of("kind = learn\nseed = 1\nseed = 2\n"), "seed");
  EXPECT_EQ(field_of("kind = learn\nseed = 1\nsmoothing_sigma = 1\n"), "smoothing_sigma");
  EXPECT_EQ(field_of("kind = fool\nseed = 1\ndimension = 3\norders = 4\n"), "orders");
  EXPECT_EQ(field_of("kind = probe\nseed = 1\nprobe = magic\n"), "probe");
  EXPECT_EQ(field_of("kind = learn\nseed = 1\ndistribution = cauchy\n"), "distribution");
  EXPECT_EQ(field_of("kind = learn\nseed = 1\njust text\n"), "line 3");
}

TEST(Expression, ParsesSumsOfMonomials) {
  const auto p = parse_polynomial_expression("0.5*x1*x2 - x3^2 + 2 + x1 * x2", 3);
  EXPECT_EQ(p.coefficient(MultiIndex({1, 1, 0})), 1.5);
  EXPECT_EQ(p.coefficient(MultiIndex({0, 0, 2})), -1.0);
  EXPECT_EQ(p.coefficient(MultiIndex({0, 0, 0})), 2.0);
  EXPECT_EQ(parse_polynomial_expression("-1e-1*x2", 2).coefficient(MultiIndex({0, 1})), -0.1);
  EXPECT_THROW(parse_polynomial_expression("x4", 3), std::invalid_argument);
  EXPECT_THROW(parse_polynomial_expression("x1 x2", 3), std::invalid_argument);
  EXPECT_THROW(parse_polynomial_expression("", 3), std::invalid_argument);
}

TEST(Run, LearnReportsAreByteIdenticalAcrossRunsAndWorkers) {
  const std::string text =
      "kind = learn\nseed = 9\ntrials = 3\ndistribution = gaussian\ndimension = 2\n"
      "degrees = 1,2\ntrain_size = 200\ntest_size = 200\nnoise_rate = 0.1\n";
  auto c = parse_config(text);
  const auto a = run(c);
  const auto b = run(c);
  c.workers = 3;
  const auto threaded = run(c);
  EXPECT_EQ(report_csv(a), report_csv(b));
  EXPECT_EQ(report_summary(a), report_summary(b));
  EXPECT_EQ(report_csv(a), report_csv(threaded));
  EXPECT_FALSE(a.select("best_test_error").empty());
  EXPECT_EQ(report_csv(a).substr(0, 34), "seed,degree,metric,parameter,value");
  for (std::size_t i = 1; i < a.cells.size(); ++i) {
    const auto& p = a.cells[i - 1];
    const auto& q = a.cells[i];
    EXPECT_LE(std::tie(p.seed, p.degree, p.metric), std::tie(q.seed, q.degree, q.metric));
  }
}

TEST(Run, FoolProductOfTwoBitsGaps) {
  const auto r = run(parse_config("kind = fool\nseed = 1\ndimension = 2\npolynomial = x1*x2\norders = 1,2\n"));
  const auto k1 = r.select("worst_gap", 1);
  const auto k2 = r.select("worst_gap", 2);
  ASSERT_EQ(k1.size(), 1u);
  ASSERT_EQ(k2.size(), 1u);
  EXPECT_NEAR(k1[0].value, 0.5, 1e-9);
  EXPECT_LE(k2[0].value, 1e-9);
  EXPECT_NE(report_csv(r).find(",1,worst_gap,0,0.5"), std::string::npos);
}

TEST(Run, EveryCheckedInConfigParses) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(MOMATCH_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 11u);
}

TEST(Run, MakeDistributionHonoursSmoothing) {
  auto c = parse_config("kind = probe\nseed = 1\ndistribution = pointmass\ndimension = 1\n"
                        "smoothing_sigma = 0.5\nnoise_variance = 0.25\n");
  EXPECT_NEAR(make_distribution(c).covariance()(0, 0), 0.25, 1e-15);
}

TEST(Run, RandomQuadraticRespectsRegularity) {
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto p = random_quadratic(6, 0.5, rng);
    EXPECT_LE(regularity(p), 0.5);
    EXPECT_EQ(p.degree(), 2);
  }
}

TEST(Cli, ExitCodesAndOutputs) {
  const auto dir = temp_dir("cli");
  {
    std::ofstream(dir / "bad.cfg") << "seed = 1\nnoise_rate = 1.5\n";
    std::ofstream(dir / "fool.cfg") << "seed = 1\ndimension = 2\npolynomial = x1*x2\norders = 1,2\n";
    std::ofstream(dir / "broken.cfg") << "seed = 1\ndimension = 2\npolynomial = x1*x9\n";
  }
  EXPECT_EQ(run_cli("learn --config " + (dir / "bad.cfg").string()), 2);
  EXPECT_EQ(run_cli("fool --config " + (dir / "broken.cfg").string() + " --out " + (dir / "b").string()), 2);
  {
    std::ofstream(dir / "kinded.cfg") << "kind = fool\nseed = 1\ndimension = 2\npolynomial = x1*x2\n";
  }
  EXPECT_EQ(run_cli("learn --config " + (dir / "kinded.cfg").string()), 2);
  EXPECT_EQ(run_cli("fool --config " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(run_cli("--config x"), 2);
  const auto out1 = dir / "o1";
  const auto out2 = dir / "o2";
  EXPECT_EQ(run_cli("fool --config " + (dir / "fool.cfg").string() + " --out " + out1.string()), 0);
  EXPECT_EQ(run_cli("fool --config " + (dir / "fool.cfg").string() + " --seed 1 --out " + out2.string()), 0);
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(out1 / "report.csv"), slurp(out2 / "report.csv"));
  EXPECT_EQ(slurp(out1 / "summary.txt"), slurp(out2 / "summary.txt"));
  EXPECT_NE(slurp(out1 / "summary.txt").find("config.polynomial = x1*x2"), std::string::npos);
}
