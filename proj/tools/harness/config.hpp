#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace momatch::harness {

// Invalid configuration; `field` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Kind { kLearn, kSandwich, kFool, kProbe, kMoments };

const char* to_string(Kind kind);
Kind parse_kind(const std::string& text);

// `key = value` lines; `#` starts a comment; blank lines ignored. Keys are
// kept in file order for echoing.
struct KeyValues {
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
};

KeyValues parse_key_values(const std::string& text);

struct ExperimentConfig {
  Kind kind = Kind::kLearn;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::size_t workers = 1;
  std::string output_dir;

  // Distribution.
  std::string distribution = "gaussian";  // gaussian|ball|cube|laplace|rademacher|pointmass
  std::size_t dimension = 2;
  double laplace_scale = 1.0;
  double smoothing_sigma = 0.0;  // 0: no smoothing
  double noise_variance = 0.0;   // 0: default noise covariance sigma * cov

  // Target concept (learn).
  std::string target = "intersection";  // intersection|single|random
  std::size_t halfspaces = 1;
  double threshold = 0.0;

  // learn
  std::vector<int> degrees{1};
  std::size_t train_size = 1000;
  std::size_t test_size = 1000;
  double noise_rate = 0.0;
  std::size_t basis_cap = 5000;

  // sandwich
  std::size_t max_support = 16;
  std::size_t max_dimension = 2;
  int max_order = 2;

  // fool
  std::string polynomial;  // expression such as "x1*x2 + 0.5*x3"
  std::vector<int> orders{1, 2};
  bool include_full_order = false;
  double max_regularity = 0.0;  // 0: no rejection

  // probe
  std::string probe = "anticoncentration";
  std::size_t sample_size = 10000;
  std::vector<double> alphas{0.1};
  std::vector<int> moment_orders{2, 4};
  std::size_t directions = 1;
  std::size_t max_atoms = 4;

  // moments
  std::string route = "exact";  // exact|empirical
  int order = 2;
  int beta_order = 0;  // 0: no profile

  // Echo of the parsed file, in order, after command-line overrides.
  std::vector<std::pair<std::string, std::string>> echo;
};

// Parses and validates; throws ConfigError naming the field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies cross-field checks after overrides (e.g. --seed).
void validate(const ExperimentConfig& config);

}  // namespace momatch::harness
