#include "osgood/lab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#ifndef OSGOOD_VERSION
#define OSGOOD_VERSION "unknown"
#endif

namespace osgood::lab {

void Table::add(std::vector<Cell> row) {
  if (row.size() != header.size()) throw std::logic_error("Table " + name + ": row width mismatch");
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string q = "\"";
    for (char c : *s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  const double x = std::get<double>(cell);
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

Json make_manifest(const Report& report, const ManifestContext& ctx) {
  Json m;
  m["tool"] = "osgood-lab";
  m["versions"] = {{"osgood", OSGOOD_VERSION}, {"compiler", __VERSION__}};
  m["subcommand"] = ctx.subcommand;
  m["seed"] = ctx.seed;
  m["threads"] = ctx.threads;
  m["config"] = report.resolved;
  Json outputs = Json::array();
  for (const Table& t : report.tables) outputs.push_back(t.name + ".csv");
  m["outputs"] = outputs;
  m["verdicts"] = report.verdicts;
  m["pass"] = report.pass;
  m["timestamp"] = {{"started_utc", ctx.started_utc}, {"wall_time_s", ctx.wall_time_s}};
  return m;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void emit_report(const Report& report, const ManifestContext& ctx,
                 const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out))
    throw IoError("cannot create output directory " + out.string());
  for (const Table& t : report.tables) write_file(out / (t.name + ".csv"), to_csv(t));
  write_file(out / "manifest.json", make_manifest(report, ctx).dump(2) + "\n");
}

}  // namespace osgood::lab
