#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "osgood/lab/config.hpp"

namespace osgood::lab {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct Report {
  std::vector<Table> tables;
  Json verdicts = Json::object();
  Json resolved = Json::object();  // parameters after defaults
  bool pass = true;
};

/// Shortest decimal that round-trips, so reruns are byte-identical.
std::string format_cell(const Cell& cell);
std::string to_csv(const Table& table);

struct ManifestContext {
  std::string subcommand;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string started_utc;
  double wall_time_s = 0.0;
};

Json make_manifest(const Report& report, const ManifestContext& ctx);

/// Writes <out>/<table>.csv for every table and <out>/manifest.json.
/// IoError when the directory or a file cannot be written.
void emit_report(const Report& report, const ManifestContext& ctx,
                 const std::filesystem::path& out);

}  // namespace osgood::lab
