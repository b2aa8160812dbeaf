#include <cmath>

#include "osgood/errors.hpp"
#include "osgood/euler.hpp"
#include "osgood/lab/commands.hpp"

namespace osgood::lab {

namespace {

ProfileKind profile_kind(const std::string& name) {
  if (name == "smooth_blob") return ProfileKind::smooth_blob;
  if (name == "patch_mollified") return ProfileKind::patch_mollified;
  if (name == "log_singular") return ProfileKind::log_singular;
  throw ValidationError("profile: expected smooth_blob, patch_mollified or log_singular");
}

ProfileParams profile(const Json& r, double shift) {
  ProfileParams pp;
  pp.kind = profile_kind(r["profile"]);
  pp.amplitude = r["amplitude"];
  pp.radius = r["radius"];
  pp.smoothing = r["smoothing"];
  pp.order = r["order"];
  pp.depth = r["depth"];
  pp.cx = 0.5 + shift;
  return pp;
}

StabilityParams stability_params(const Json& r) {
  StabilityParams q;
  q.order = r["order"];
  q.s = r["s"];
  q.C = r["C"];
  q.C1 = r["C1"];
  q.C2 = r["C2"];
  q.M = r["M"];
  q.gamma = r["gamma"];
  q.output_interval = r["output_interval"];
  return q;
}

Json plan(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  Json r;
  r["n_grid"] = get_int(p, "n_grid", 64);
  r["t_final"] = get_double(p, "t_final", 1.0);
  r["dt"] = get_double(p, "dt", 0.005);
  r["profile"] = get_string(p, "profile", "smooth_blob");
  r["amplitude"] = get_double(p, "amplitude", 1.0);
  r["radius"] = get_double(p, "radius", 0.05);
  r["smoothing"] = get_double(p, "smoothing", 0.01);
  r["order"] = get_int(p, "order", r["profile"] == "log_singular" ? 2 : 1);
  r["depth"] = get_int(p, "depth", 8);
  r["offsets"] = get_doubles(p, "offsets", {1.0 / r["n_grid"].get<int>()});
  r["s"] = get_double(p, "s", 0.5);
  r["C"] = get_double(p, "C", 1.0);
  r["C1"] = get_double(p, "C1", 1.0);
  r["C2"] = get_double(p, "C2", 1.0);
  r["M"] = get_double(p, "M", 1.0);
  r["gamma"] = get_double(p, "gamma", -1.0 / (2.0 * r["C"].get<double>()));
  r["output_interval"] = get_double(p, "output_interval", 0.1);
  r["conservation_tol"] = get_double(p, "conservation_tol", 1e-6);

  const int n = r["n_grid"];
  require(n >= 4 && (n & (n - 1)) == 0, "n_grid must be a power of two >= 4");
  require(r["t_final"].get<double>() >= 0.0, "t_final must be >= 0");
  require(r["dt"].get<double>() > 0.0, "dt must be positive");
  require(r["s"].get<double>() > 0.0 && r["s"].get<double>() <= 1.0, "s must be in (0, 1]");
  require(r["gamma"].get<double>() < 0.0, "gamma must be negative");
  require(r["C"].get<double>() > 0.0 && r["C1"].get<double>() > 0.0 && r["C2"].get<double>() > 0.0,
          "C, C1, C2 must be positive");
  require(r["M"].get<double>() >= 0.0, "M must be >= 0");
  require(r["output_interval"].get<double>() > 0.0, "output_interval must be positive");
  require(r["order"].get<int>() >= 1, "order must be >= 1");
  require(!r["offsets"].empty(), "offsets must not be empty");
  for (double o : r["offsets"].get<std::vector<double>>())
    require(std::abs(o) < 0.25, "offsets must be below a quarter of the box");
  try {
    for (double o : r["offsets"].get<std::vector<double>>()) make_initial_vorticity(profile(r, o), n);
    make_initial_vorticity(profile(r, 0.0), n);
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  return r;
}

Report run(const ExperimentConfig& cfg, const Json& r) {
  const int n = r["n_grid"];
  const auto offsets = r["offsets"].get<std::vector<double>>();
  const StabilityParams q = stability_params(r);
  const GridField base = make_initial_vorticity(profile(r, 0.0), n);
  std::vector<StabilityRecord> runs(offsets.size());
  parallel_for_index(runs.size(), cfg.threads, [&](std::size_t i) {
    runs[i] = stability_experiment(base, make_initial_vorticity(profile(r, offsets[i]), n),
                                   r["t_final"], r["dt"], q);
  });

  Report rep;
  rep.resolved = r;
  Table t{"stability",
          {"offset", "t", "dist_w2", "dist_u2", "bound_rhs", "E1", "E2", "Z1", "Z2"}, {}};
  double drift = 0.0;
  Json per_run = Json::array();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const StabilityRecord& s = runs[k];
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      t.add({offsets[k], s.times[i], s.vorticity_dist_sq[i], s.velocity_dist_sq[i], s.bound_rhs[i],
             s.energy1[i], s.energy2[i], s.enstrophy1[i], s.enstrophy2[i]});
      for (const auto* series : {&s.energy1, &s.energy2, &s.enstrophy1, &s.enstrophy2})
        drift = std::max(drift, std::abs((*series)[i] / (*series)[0] - 1.0));
    }
    per_run.push_back({{"offset", offsets[k]},
                       {"initial_velocity_dist_sq", s.initial_velocity_dist_sq},
                       {"rate", s.rate},
                       {"max_initial_l2_sq", s.max_initial_l2_sq}});
  }
  const double fitted = fit_stability_constant(runs, q);
  rep.tables = {t};
  rep.verdicts["runs"] = per_run;
  rep.verdicts["fitted_C"] = std::isfinite(fitted) ? Json(fitted) : Json(nullptr);
  rep.verdicts["max_conservation_drift"] = drift;
  rep.verdicts["conservation_pass"] = drift <= r["conservation_tol"].get<double>();
  rep.verdicts["bound_holds_with_declared_C"] = fitted <= q.C;
  rep.pass = std::isfinite(fitted) && drift <= r["conservation_tol"].get<double>();
  return rep;
}

}  // namespace

Command euler_command() { return {plan, run}; }

}  // namespace osgood::lab
