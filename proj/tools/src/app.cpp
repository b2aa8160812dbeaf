#include "osgood/lab/app.hpp"

#include <chrono>
#include <ctime>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "osgood/lab/commands.hpp"

namespace osgood::lab {

namespace {

enum class Kind { real, integer, text, reals, texts };

struct FlagSpec {
  std::string flag;  // without leading dashes
  std::string key;
  Kind kind;
  std::string help;
};

const std::map<std::string, std::vector<FlagSpec>>& flag_table() {
  static const std::map<std::string, std::vector<FlagSpec>> table{
      {"modulus",
       {{"kind", "kind", Kind::text, "lipschitz | log_lipschitz | log_n | power | associated"},
        {"n", "n", Kind::integer, "order of log_n"},
        {"alpha", "alpha", Kind::real, "exponent of the power modulus"},
        {"theta", "theta", Kind::text, "growth function of the associated modulus (log1 .. log4)"},
        {"check", "check", Kind::text, "closed-form | fixed-point | table"},
        {"points", "points", Kind::integer, "number of log-spaced radii"},
        {"r-min", "r_min", Kind::real, "smallest radius"},
        {"r-max", "r_max", Kind::real, "largest radius"},
        {"J", "J", Kind::reals, "accumulated seminorms for the fixed-point check"},
        {"tol", "tol", Kind::real, "relative tolerance"}}},
      {"acm",
       {{"theta", "theta", Kind::text, "growth function (log1 .. log4)"},
        {"N", "N", Kind::integer, "number of cells"},
        {"d", "d", Kind::integer, "dimension"},
        {"sigma", "sigma", Kind::real, "initial Sobolev index"},
        {"condition", "condition", Kind::text,
         "sum_lambda | grad_lp | init_sobolev | blowup | condition2"},
        {"p", "p", Kind::real, "Lebesgue exponent"},
        {"s", "s", Kind::real, "Sobolev index of the blow-up series"},
        {"t", "t", Kind::real, "time of the blow-up series"},
        {"c", "c", Kind::real, "mixing rate constant"},
        {"bound-constant", "bound_constant", Kind::real, "C in C p Theta(p)"}}},
      {"flow",
       {{"field", "field", Kind::text, "log_lipschitz_1d | rotation | shear | zero"},
        {"tol", "tol", Kind::real, "integrator tolerance"},
        {"pairs", "pairs", Kind::integer, "stratified pairs in the separation audit"},
        {"t-final", "t_final", Kind::real, "final time"},
        {"J", "J", Kind::real, "declared accumulated seminorm"},
        {"x0", "x0", Kind::reals, "trajectory starts, flattened"},
        {"roundtrip-samples", "roundtrip_samples", Kind::integer, "forward-backward samples"}}},
      {"interp",
       {{"fields", "fields", Kind::integer, "number of random fields"},
        {"n-grid", "n_grid", Kind::integer, "grid points per side"},
        {"kmax", "kmax", Kind::integer, "largest band limit"},
        {"eps", "eps", Kind::reals, "epsilon values"},
        {"mu", "mu", Kind::texts, "r | sqrt | inverse_log_squared"},
        {"ratio-limit", "ratio_limit", Kind::real, "allowed max/min implied constant"}}},
      {"euler",
       {{"n-grid", "n_grid", Kind::integer, "grid points per side"},
        {"t-final", "t_final", Kind::real, "final time"},
        {"dt", "dt", Kind::real, "time step"},
        {"profile", "profile", Kind::text, "smooth_blob | patch_mollified | log_singular"},
        {"amplitude", "amplitude", Kind::real, "core amplitude"},
        {"radius", "radius", Kind::real, "core radius"},
        {"smoothing", "smoothing", Kind::real, "patch edge width"},
        {"order", "order", Kind::integer, "order n of the growth envelope"},
        {"depth", "depth", Kind::integer, "log_singular truncation depth"},
        {"offsets", "offsets", Kind::reals, "second-run centre shifts"},
        {"s", "s", Kind::real, "exponent s of the bound"},
        {"C", "C", Kind::real, "prefactor"},
        {"C1", "C1", Kind::real, "velocity modulus constant C1"},
        {"C2", "C2", Kind::real, "velocity modulus constant C2"},
        {"M", "M", Kind::real, "rate constant"},
        {"gamma", "gamma", Kind::real, "negative exponent of the epsilon choice"},
        {"output-interval", "output_interval", Kind::real, "record spacing"},
        {"conservation-tol", "conservation_tol", Kind::real, "allowed relative drift"}}},
  };
  return table;
}

Json convert(const FlagSpec& spec, const std::vector<std::string>& raw) {
  try {
    switch (spec.kind) {
      case Kind::real:
        return std::stod(raw.front());
      case Kind::integer: {
        std::size_t used = 0;
        const long long v = std::stoll(raw.front(), &used);
        if (used != raw.front().size()) throw std::invalid_argument(raw.front());
        return v;
      }
      case Kind::text:
        return raw.front();
      case Kind::reals: {
        Json a = Json::array();
        for (const auto& s : raw) a.push_back(std::stod(s));
        return a;
      }
      case Kind::texts:
        return Json(raw);
    }
  } catch (const std::logic_error&) {
    throw ConfigError("--" + spec.flag + ": cannot parse '" + raw.front() + "'");
  }
  return nullptr;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"osgood-lab: modulus-of-continuity experiments for transport and 2D Euler"};
  app.name("osgood-lab");
  std::optional<std::string> config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--threads", threads, "worker threads");
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::map<std::string, std::map<std::string, std::vector<std::string>>> raw;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, specs] : flag_table()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    subs[name] = sub;
    for (const FlagSpec& spec : specs) {
      auto* opt = sub->add_option("--" + spec.flag, raw[name][spec.key], spec.help);
      if (spec.kind == Kind::reals || spec.kind == Kind::texts)
        opt->delimiter(',');
      else
        opt->expected(1);
    }
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();  // program name
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  ExperimentConfig cfg;
  Command command;
  Json resolved;
  try {
    if (config_path) cfg = load_config_file(*config_path);
    Json flags = Json::object();
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      flags["subcommand"] = name;
      Json params = Json::object();
      for (const FlagSpec& spec : flag_table().at(name))
        if (sub->count("--" + spec.flag) > 0) params[spec.key] = convert(spec, raw[name][spec.key]);
      flags["params"] = params;
    }
    if (out_dir) flags["out"] = *out_dir;
    if (seed) flags["seed"] = *seed;
    if (threads) flags["threads"] = *threads;
    cfg = merge_config(std::move(cfg), flags);
    if (cfg.subcommand.empty()) throw ConfigError("no subcommand given");
    command = command_for(cfg.subcommand);
    require(cfg.threads >= 1, "threads must be >= 1");
    resolved = command.plan(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "osgood-lab: config error: " << e.what() << '\n';
    return kParseError;
  } catch (const ValidationError& e) {
    std::cerr << "osgood-lab: invalid configuration: " << e.what() << '\n';
    return kValidationError;
  }

  ManifestContext ctx{cfg.subcommand, cfg.seed, cfg.threads, utc_now(), 0.0};
  const auto start = std::chrono::steady_clock::now();
  Report report;
  try {
    report = command.run(cfg, resolved);
  } catch (const std::exception& e) {
    std::cerr << "osgood-lab: " << cfg.subcommand << " failed: " << e.what() << '\n';
    return kAuditFailed;
  }
  ctx.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    emit_report(report, ctx, cfg.out);
  } catch (const IoError& e) {
    std::cerr << "osgood-lab: " << e.what() << '\n';
    return kIoError;
  }
  std::cout << cfg.subcommand << ": " << (report.pass ? "PASS" : "FAIL") << " ("
            << (cfg.out / "manifest.json").string() << ")\n";
  return report.pass ? kPass : kAuditFailed;
}

}  // namespace osgood::lab
