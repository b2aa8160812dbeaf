#include <cmath>

#include "osgood/fields.hpp"
#include "osgood/interp.hpp"
#include "osgood/lab/commands.hpp"
#include "osgood/rng.hpp"

namespace osgood::lab {

namespace {

RadialFn build_mu(const std::string& name) {
  if (name == "r") return [](double r) { return r; };
  if (name == "sqrt") return [](double r) { return std::sqrt(r); };
  if (name == "inverse_log_squared") return inverse_log_squared_modulus;
  throw ValidationError("mu: expected r, sqrt or inverse_log_squared, got '" + name + "'");
}

Json plan(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  Json r;
  r["fields"] = get_int(p, "fields", 50);
  r["n_grid"] = get_int(p, "n_grid", 32);
  r["kmax"] = get_int(p, "kmax", 8);
  r["eps"] = get_doubles(p, "eps", {0.25, 1.0 / 16, 1.0 / 64});
  r["mu"] = get_strings(p, "mu", {"r", "sqrt", "inverse_log_squared"});
  r["ratio_limit"] = get_double(p, "ratio_limit", 1e3);

  const int n = r["n_grid"];
  require(n >= 4 && (n & (n - 1)) == 0, "n_grid must be a power of two >= 4");
  require(r["fields"].get<int>() >= 1, "fields must be >= 1");
  require(r["kmax"].get<int>() >= 1 && 2 * r["kmax"].get<int>() < n, "need 1 <= kmax < n_grid / 2");
  for (double e : r["eps"].get<std::vector<double>>()) require(e > 0.0 && e < 1.0, "eps values must lie in (0, 1)");
  for (const std::string& m : r["mu"].get<std::vector<std::string>>()) build_mu(m);
  require(r["ratio_limit"].get<double>() >= 1.0, "ratio_limit must be >= 1");
  return r;
}

Report run(const ExperimentConfig& cfg, const Json& r) {
  const int count = r["fields"], n = r["n_grid"], kmax = r["kmax"];
  const auto eps = r["eps"].get<std::vector<double>>();
  const auto mus = r["mu"].get<std::vector<std::string>>();
  std::vector<std::vector<InterpReport>> results(static_cast<std::size_t>(count));
  parallel_for_index(results.size(), cfg.threads, [&](std::size_t i) {
    CounterRng rng(cfg.seed, 0x1000 + i);
    const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(kmax));
    const GridField f = random_band_limited(2, n, 1.0, k, rng);
    for (const std::string& m : mus) {
      const RadialFn mu = build_mu(m);
      for (double e : eps) results[i].push_back(interpolation_sides(f, mu, e));
    }
  });

  Report rep;
  rep.resolved = r;
  Table t{"interp", {"field", "eps", "mu", "lhs", "term_besov", "term_log", "implied_C"}, {}};
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::size_t j = 0;
    for (const std::string& m : mus)
      for (double e : eps) {
        const InterpReport& x = results[i][j++];
        t.add({static_cast<long long>(i), e, m, x.lhs, x.term_besov, x.term_log, x.implied_C});
        lo = std::min(lo, x.implied_C);
        hi = std::max(hi, x.implied_C);
      }
  }
  long long violations = 0;
  for (const auto& row : results)
    for (const InterpReport& x : row)
      if (x.lhs > hi * (x.term_besov + x.term_log) * (1.0 + 1e-12)) ++violations;
  rep.tables = {t};
  rep.verdicts["implied_C_min"] = lo;
  rep.verdicts["implied_C_max"] = hi;
  rep.verdicts["implied_C_ratio"] = hi / lo;
  rep.verdicts["uniform_constant_violations"] = violations;
  rep.pass = hi / lo <= r["ratio_limit"].get<double>() && violations == 0;
  return rep;
}

}  // namespace

Command interp_command() { return {plan, run}; }

}  // namespace osgood::lab
