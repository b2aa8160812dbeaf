#include "osgood/lab/config.hpp"

#include <fstream>
#include <iterator>
#include <limits>

namespace osgood::lab {

namespace {

void apply(ExperimentConfig& cfg, const Json& j, const std::string& origin) {
  if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand") {
      if (!value.is_string()) throw ConfigError(origin + ": subcommand must be a string");
      cfg.subcommand = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
        throw ConfigError(origin + ": seed must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "threads") {
      if (!value.is_number_integer()) throw ConfigError(origin + ": threads must be an integer");
      cfg.threads = value.get<int>();
    } else if (key == "out") {
      if (!value.is_string()) throw ConfigError(origin + ": out must be a string");
      cfg.out = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) throw ConfigError(origin + ": params must be an object");
      cfg.params.merge_patch(value);
    } else {
      throw ConfigError(origin + ": unknown key '" + key + "'");
    }
  }
}

[[noreturn]] void wrong_type(const std::string& key, const char* expected) {
  throw ConfigError("parameter '" + key + "' must be " + expected);
}

}  // namespace

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw ConfigError("config " + path.string() + " is empty");
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  ExperimentConfig cfg;
  apply(cfg, j, path.string());
  return cfg;
}

ExperimentConfig merge_config(ExperimentConfig base, const Json& flags) {
  apply(base, flags, "command line");
  return base;
}

double get_double(const Json& p, const std::string& key, double fallback) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (!v.is_number()) wrong_type(key, "a number");
  return v.get<double>();
}

int get_int(const Json& p, const std::string& key, int fallback) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (!v.is_number_integer()) wrong_type(key, "an integer");
  const long long x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    wrong_type(key, "a 32-bit integer");
  return static_cast<int>(x);
}

std::string get_string(const Json& p, const std::string& key, const std::string& fallback) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (!v.is_string()) wrong_type(key, "a string");
  return v.get<std::string>();
}

bool get_bool(const Json& p, const std::string& key, bool fallback) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (!v.is_boolean()) wrong_type(key, "a boolean");
  return v.get<bool>();
}

std::vector<double> get_doubles(const Json& p, const std::string& key,
                                const std::vector<double>& fallback) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) wrong_type(key, "a number or an array of numbers");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) wrong_type(key, "an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> get_strings(const Json& p, const std::string& key,
                                     const std::vector<std::string>& fallback) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) wrong_type(key, "a string or an array of strings");
  std::vector<std::string> out;
  for (const Json& x : v) {
    if (!x.is_string()) wrong_type(key, "an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace osgood::lab
