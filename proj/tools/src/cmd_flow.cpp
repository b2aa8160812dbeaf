#include <cmath>

#include "osgood/flow.hpp"
#include "osgood/lab/commands.hpp"
#include "osgood/rng.hpp"

namespace osgood::lab {

namespace {

VelocityField build_field(const std::string& name) {
  if (name == "log_lipschitz_1d") return log_lipschitz_1d();
  if (name == "rotation") return rotation_field(0.5, 0.5);
  if (name == "shear") return shear_field(1.0, 1.0);
  if (name == "zero") return zero_field(2);
  throw ValidationError("field: expected log_lipschitz_1d, rotation, shear or zero");
}

std::vector<double> default_starts(const std::string& field) {
  if (field == "log_lipschitz_1d") return {std::exp(-4.0), std::exp(-8.0)};
  return {0.75, 0.5, 0.3, 0.2};
}

Json plan(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  Json r;
  r["field"] = get_string(p, "field", "log_lipschitz_1d");
  const VelocityField u = build_field(r["field"]);
  r["tol"] = get_double(p, "tol", 1e-10);
  r["pairs"] = get_int(p, "pairs", 1000);
  r["t_final"] = get_double(p, "t_final", 1.0);
  r["J"] = get_double(p, "J", u.declared_seminorm * r["t_final"].get<double>());
  r["x0"] = get_doubles(p, "x0", default_starts(r["field"]));
  r["roundtrip_samples"] = get_int(p, "roundtrip_samples", 100);

  require(r["tol"].get<double>() > 0.0, "tol must be positive");
  require(r["t_final"].get<double>() >= 0.0, "t_final must be >= 0");
  require(r["pairs"].get<int>() >= 1, "pairs must be >= 1");
  require(r["J"].get<double>() >= 0.0, "J must be >= 0");
  require(r["roundtrip_samples"].get<int>() >= 0, "roundtrip_samples must be >= 0");
  const auto x0 = r["x0"].get<std::vector<double>>();
  require(!x0.empty() && x0.size() % static_cast<std::size_t>(u.d) == 0,
          "x0 must hold a whole number of " + std::to_string(u.d) + "-vectors");
  if (r["field"] == "log_lipschitz_1d")
    for (double x : x0) require(x > 0.0 && x < 1.0, "x0 must lie in (0, 1) for log_lipschitz_1d");
  return r;
}

Report run(const ExperimentConfig& cfg, const Json& r) {
  const VelocityField u = build_field(r["field"]);
  const double tol = r["tol"], t1 = r["t_final"], J = r["J"];
  const int d = u.d;
  const auto starts = r["x0"].get<std::vector<double>>();
  const bool closed_form = r["field"] == "log_lipschitz_1d";
  Report rep;
  rep.resolved = r;

  double worst_traj = 0.0;
  for (std::size_t k = 0; k * d < starts.size(); ++k) {
    Vec x0{};
    for (int i = 0; i < d; ++i) x0[i] = starts[k * d + i];
    const FlowTrace tr = integrate_flow(u, x0, t1, tol);
    Table t{"trajectory_" + std::to_string(k + 1), {"t"}, {}};
    for (int i = 1; i <= d; ++i) t.header.push_back("x" + std::to_string(i));
    t.header.push_back("err");
    for (std::size_t s = 0; s < tr.times.size(); ++s) {
      std::vector<Cell> row{tr.times[s]};
      for (int i = 0; i < d; ++i) row.emplace_back(tr.positions[s][i]);
      row.emplace_back(tr.errors[s]);
      t.add(std::move(row));
    }
    rep.tables.push_back(std::move(t));
    if (closed_form) {
      const double exact = std::exp(-std::exp(-t1) * std::log(1.0 / x0[0]));
      worst_traj = std::max(worst_traj, std::abs(tr.final_position()[0] - exact));
    }
  }

  Table rt{"roundtrip", {"sample", "error"}, {}};
  CounterRng rng(cfg.seed, 0xF10);
  double worst_rt = 0.0;
  for (int k = 0; k < r["roundtrip_samples"].get<int>(); ++k) {
    Vec x{};
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(u.box_lo[i], u.box_hi[i]);
    if (closed_form && x[0] == 0.0) x[0] = 0.5 * u.box_hi[0];
    const Vec y = integrate_flow(u, x, t1, tol).final_position();
    const Vec back = back_to_label(u, y, t1, tol);
    double e = 0.0;
    for (int i = 0; i < d; ++i) e = std::max(e, std::abs(back[i] - x[i]));
    worst_rt = std::max(worst_rt, e);
    rt.add({static_cast<long long>(k), e});
  }
  rep.tables.push_back(std::move(rt));

  const Modulus phi = u.modulus.value_or(Modulus::lipschitz());
  const SeparationReport sep = separation_audit(u, phi, J, t1, r["pairs"], tol, cfg.seed);
  const double lower = empirical_seminorm(u, phi, 0.0, r["pairs"], cfg.seed);
  Table st{"separation",
           {"J", "t", "pairs", "violations", "max_violation", "empirical_seminorm"}, {}};
  st.add({J, t1, static_cast<long long>(sep.pairs), static_cast<long long>(sep.violations),
          sep.max_violation, lower});
  rep.tables.push_back(std::move(st));

  rep.verdicts["separation_pass"] = sep.pass;
  rep.verdicts["separation_max_violation"] = sep.max_violation;
  rep.verdicts["empirical_seminorm_lower_bound"] = lower;
  rep.verdicts["declared_J"] = J;
  rep.verdicts["roundtrip_max_error"] = worst_rt;
  rep.verdicts["roundtrip_pass"] = worst_rt <= 20.0 * tol;
  rep.pass = sep.pass && worst_rt <= 20.0 * tol;
  if (closed_form) {
    rep.verdicts["trajectory_max_error"] = worst_traj;
    rep.verdicts["trajectory_pass"] = worst_traj <= 10.0 * tol;
    rep.pass = rep.pass && worst_traj <= 10.0 * tol;
  }
  return rep;
}

}  // namespace

Command flow_command() { return {plan, run}; }

}  // namespace osgood::lab
