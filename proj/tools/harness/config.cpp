#include "harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "momatch/text_io.hpp"

namespace momatch::harness {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t to_u64(const std::string& field, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(field, "expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

long long to_int(const std::string& field, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  }
  return out;
}

double to_real(const std::string& field, const std::string& v) {
  try {
    const double d = parse_double(v);
    if (!std::isfinite(d)) throw std::invalid_argument("non-finite");
    return d;
  } catch (const std::invalid_argument&) {
    throw ConfigError(field, "expected a finite number, got '" + v + "'");
  }
}

bool to_bool(const std::string& field, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(field, "expected true or false, got '" + v + "'");
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

template <class T>
void require_one_of(const T& value, std::initializer_list<T> allowed,
                    const std::string& field) {
  if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw ConfigError(field, "must be one of " + list);
  }
}

}  // namespace

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::kLearn: return "learn";
    case Kind::kSandwich: return "sandwich";
    case Kind::kFool: return "fool";
    case Kind::kProbe: return "probe";
    case Kind::kMoments: return "moments";
  }
  return "?";
}

Kind parse_kind(const std::string& text) {
  for (auto k : {Kind::kLearn, Kind::kSandwich, Kind::kFool, Kind::kProbe, Kind::kMoments}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("kind", "unknown experiment kind '" + text + "'");
}

const std::string* KeyValues::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(number), "empty key");
    if (out.find(key) != nullptr) throw ConfigError(key, "duplicate key");
    out.entries.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  const KeyValues kv = parse_key_values(text);
  ExperimentConfig c;
  bool has_seed = false;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const auto size_setter = [](std::size_t& slot) {
    return Setter([&slot](const std::string& f, const std::string& v) {
      slot = static_cast<std::size_t>(to_u64(f, v));
    });
  };
  const auto real_setter = [](double& slot) {
    return Setter([&slot](const std::string& f, const std::string& v) { slot = to_real(f, v); });
  };
  const auto int_setter = [](int& slot) {
    return Setter([&slot](const std::string& f, const std::string& v) {
      slot = static_cast<int>(to_int(f, v));
    });
  };
  const auto text_setter = [](std::string& slot) {
    return Setter([&slot](const std::string&, const std::string& v) { slot = v; });
  };
  const auto int_list_setter = [](std::vector<int>& slot) {
    return Setter([&slot](const std::string& f, const std::string& v) {
      slot.clear();
      for (const auto& item : split_list(v)) slot.push_back(static_cast<int>(to_int(f, item)));
      if (slot.empty()) throw ConfigError(f, "empty list");
    });
  };

  const std::map<std::string, Setter> setters{
      {"kind", [&](const std::string&, const std::string& v) { c.kind = parse_kind(v); }},
      {"seed",
       [&](const std::string& f, const std::string& v) {
         c.seed = to_u64(f, v);
         has_seed = true;
       }},
      {"trials", size_setter(c.trials)},
      {"workers", size_setter(c.workers)},
      {"output_dir", text_setter(c.output_dir)},
      {"distribution", text_setter(c.distribution)},
      {"dimension", size_setter(c.dimension)},
      {"laplace_scale", real_setter(c.laplace_scale)},
      {"smoothing_sigma", real_setter(c.smoothing_sigma)},
      {"noise_variance", real_setter(c.noise_variance)},
      {"target", text_setter(c.target)},
      {"halfspaces", size_setter(c.halfspaces)},
      {"threshold", real_setter(c.threshold)},
      {"degrees", int_list_setter(c.degrees)},
      {"train_size", size_setter(c.train_size)},
      {"test_size", size_setter(c.test_size)},
      {"noise_rate", real_setter(c.noise_rate)},
      {"basis_cap", size_setter(c.basis_cap)},
      {"max_support", size_setter(c.max_support)},
      {"max_dimension", size_setter(c.max_dimension)},
      {"max_order", int_setter(c.max_order)},
      {"polynomial", text_setter(c.polynomial)},
      {"orders", int_list_setter(c.orders)},
      {"include_full_order",
       [&](const std::string& f, const std::string& v) { c.include_full_order = to_bool(f, v); }},
      {"max_regularity", real_setter(c.max_regularity)},
      {"probe", text_setter(c.probe)},
      {"sample_size", size_setter(c.sample_size)},
      {"alphas",
       [&](const std::string& f, const std::string& v) {
         c.alphas.clear();
         for (const auto& item : split_list(v)) c.alphas.push_back(to_real(f, item));
         if (c.alphas.empty()) throw ConfigError(f, "empty list");
       }},
      {"moment_orders", int_list_setter(c.moment_orders)},
      {"directions", size_setter(c.directions)},
      {"max_atoms", size_setter(c.max_atoms)},
      {"route", text_setter(c.route)},
      {"order", int_setter(c.order)},
      {"beta_order", int_setter(c.beta_order)},
  };

  for (const auto& [key, value] : kv.entries) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key");
    it->second(key, value);
  }
  if (!has_seed) throw ConfigError("seed", "an explicit seed is required");
  c.echo = kv.entries;
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& c) {
  require(c.trials >= 1, "trials", "must be >= 1");
  require(c.workers >= 1, "workers", "must be >= 1");
  require(c.dimension >= 1, "dimension", "must be >= 1");
  require_one_of<std::string>(c.distribution,
                              {"gaussian", "ball", "cube", "laplace", "rademacher", "pointmass"},
                              "distribution");
  require(c.laplace_scale > 0.0, "laplace_scale", "must be > 0");
  require(c.smoothing_sigma == 0.0 || (c.smoothing_sigma > 0.0 && c.smoothing_sigma < 1.0),
          "smoothing_sigma", "must lie in (0, 1), or 0 for no smoothing");
  require(c.noise_variance >= 0.0, "noise_variance", "must be >= 0");
  require(c.noise_variance == 0.0 || c.smoothing_sigma > 0.0, "noise_variance",
          "requires smoothing_sigma");
  require(c.distribution != "pointmass" || c.noise_variance > 0.0 ||
              c.kind == Kind::kSandwich || c.kind == Kind::kFool,
          "noise_variance", "a point mass needs an explicit noise variance");

  switch (c.kind) {
    case Kind::kLearn:
      require_one_of<std::string>(c.target, {"intersection", "single", "random"}, "target");
      require(c.halfspaces >= 1 && c.halfspaces <= 20, "halfspaces", "must lie in [1, 20]");
      require(c.target != "single" || c.halfspaces == 1, "halfspaces",
              "must be 1 for a single halfspace");
      for (int d : c.degrees) require(d >= 0, "degrees", "must be >= 0");
      require(c.train_size >= 1, "train_size", "must be >= 1");
      require(c.test_size >= 1, "test_size", "must be >= 1");
      require(c.noise_rate >= 0.0 && c.noise_rate <= 0.5, "noise_rate",
              "must lie in [0, 0.5]");
      require(c.basis_cap >= 1, "basis_cap", "must be >= 1");
      break;
    case Kind::kSandwich:
      require(c.max_support >= 1, "max_support", "must be >= 1");
      require(c.max_dimension >= 1, "max_dimension", "must be >= 1");
      require(c.max_order >= 0, "max_order", "must be >= 0");
      break;
    case Kind::kFool:
      require(c.dimension <= 12, "dimension", "must be <= 12 for exact enumeration");
      for (int k : c.orders) {
        require(k >= 0 && static_cast<std::size_t>(k) <= c.dimension, "orders",
                "must lie in [0, dimension]");
      }
      require(c.max_regularity >= 0.0, "max_regularity", "must be >= 0");
      break;
    case Kind::kProbe:
      require_one_of<std::string>(c.probe,
                                  {"anticoncentration", "directional_moment",
                                   "hypercontractivity", "sign_patterns", "distances"},
                                  "probe");
      require(c.sample_size >= 1, "sample_size", "must be >= 1");
      for (double a : c.alphas) require(a > 0.0, "alphas", "must be > 0");
      for (int r : c.moment_orders) require(r >= 1 && r <= 12, "moment_orders", "must lie in [1, 12]");
      require(c.directions >= 1, "directions", "must be >= 1");
      require(c.max_atoms >= 1, "max_atoms", "must be >= 1");
      require(c.probe != "hypercontractivity" || c.max_dimension <= 6, "max_dimension",
              "must be <= 6 for the exhaustive hypercontractivity sweep");
      break;
    case Kind::kMoments:
      require_one_of<std::string>(c.route, {"exact", "empirical"}, "route");
      require(c.order >= 0, "order", "must be >= 0");
      require(c.beta_order >= 0, "beta_order", "must be >= 0");
      require(c.route == "exact" || c.beta_order <= 20, "beta_order",
              "must be <= 20 on the empirical route");
      require(c.directions >= 1, "directions", "must be >= 1");
      require(c.sample_size >= 1, "sample_size", "must be >= 1");
      break;
  }
}

}  // namespace momatch::harness
