#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace osgood::lab {

using Json = nlohmann::json;

/// Exit statuses of osgood-lab.
enum ExitStatus : int {
  kPass = 0,
  kAuditFailed = 1,
  kParseError = 2,
  kValidationError = 3,
  kIoError = 4,
};

/// Malformed or missing configuration (status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed configuration that violates a module precondition (status 3).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure to write an artifact (status 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char* const kSubcommands[] = {"modulus", "acm", "flow", "interp", "euler"};

struct ExperimentConfig {
  std::string subcommand;
  Json params = Json::object();  // per-subcommand table, snake_case keys
  std::filesystem::path out = "osgood-out";
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Reads a JSON config file:
///   {"subcommand": "...", "seed": 1, "threads": 1, "out": "dir", "params": {...}}
/// Every key is optional. ConfigError on unreadable, empty or malformed input.
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Overlays `flags` onto `base`; flag values win. Same layout as the file.
ExperimentConfig merge_config(ExperimentConfig base, const Json& flags);

/// Typed accessors on a params table. A present value of the wrong JSON type
/// is a ConfigError; absent keys take the default.
double get_double(const Json& params, const std::string& key, double fallback);
int get_int(const Json& params, const std::string& key, int fallback);
std::string get_string(const Json& params, const std::string& key, const std::string& fallback);
bool get_bool(const Json& params, const std::string& key, bool fallback);
std::vector<double> get_doubles(const Json& params, const std::string& key,
                                const std::vector<double>& fallback);
std::vector<std::string> get_strings(const Json& params, const std::string& key,
                                     const std::vector<std::string>& fallback);

/// ValidationError with `message` unless `ok`.
void require(bool ok, const std::string& message);

}  // namespace osgood::lab
