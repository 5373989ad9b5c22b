#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "harness/config.hpp"
#include "harness/experiments.hpp"
#include "harness/report.hpp"

namespace {

using namespace momatch::harness;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The subcommand fixes the kind; --seed replaces the file's seed.
ExperimentConfig resolve(const std::string& text, const std::string& kind,
                         std::optional<std::uint64_t> seed) {
  KeyValues kv = parse_key_values(text);
  if (const auto* k = kv.find("kind"); k != nullptr && *k != kind) {
    throw ConfigError("kind", "config is for '" + *k + "' but the subcommand is '" + kind + "'");
  }
  if (kv.find("kind") == nullptr) kv.entries.insert(kv.entries.begin(), {"kind", kind});
  if (seed) {
    bool replaced = false;
    for (auto& [key, value] : kv.entries) {
      if (key == "seed") {
        value = std::to_string(*seed);
        replaced = true;
      }
    }
    if (!replaced) kv.entries.emplace_back("seed", std::to_string(*seed));
  }
  std::string rebuilt;
  for (const auto& [key, value] : kv.entries) rebuilt += key + " = " + value + "\n";
  return parse_config(rebuilt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment-matching and polynomial-regression experiment harness"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  app.add_option("--config", config_path, "Experiment config (key = value lines)")->required();
  app.add_option("--seed", seed, "Master seed; overrides the config");
  app.add_option("--out", out_dir, "Output directory for report.csv and summary.txt");
  app.fallthrough();
  for (const char* name : {"learn", "sandwich", "fool", "probe", "moments"}) {
    app.add_subcommand(name, std::string("Run a ") + name + " experiment");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string kind = app.get_subcommands().front()->get_name();
    const auto config = resolve(read_file(config_path), kind, seed);
    const std::string dir =
        !out_dir.empty() ? out_dir : (!config.output_dir.empty() ? config.output_dir : "momatch_out");
    const auto report = run(config);
    write_report(report, dir);
    std::cerr << kind << ": " << report.cells.size() << " cells written to " << dir << " in "
              << report.wall_seconds << " s\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
