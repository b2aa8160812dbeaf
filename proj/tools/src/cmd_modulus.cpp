#include <cmath>

#include "osgood/errors.hpp"
#include "osgood/lab/commands.hpp"
#include "osgood/modulus.hpp"
#include "osgood/numerics.hpp"
#include "parse_growth.hpp"

namespace osgood::lab {

namespace {

Modulus build_modulus(const Json& r) {
  const std::string kind = r.at("kind");
  if (kind == "lipschitz") return Modulus::lipschitz();
  if (kind == "log_lipschitz") return Modulus::log_lipschitz();
  if (kind == "log_n") return Modulus::log_n(r.at("n").get<int>());
  if (kind == "power") return Modulus::power(r.at("alpha").get<double>());
  if (kind == "associated") return Modulus::associated(parse_growth(r.at("theta")));
  throw ValidationError("kind: unknown modulus '" + kind + "'");
}

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Json plan(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  Json r;
  r["kind"] = get_string(p, "kind", "log_lipschitz");
  r["n"] = get_int(p, "n", 2);
  r["alpha"] = get_double(p, "alpha", 0.5);
  r["theta"] = get_string(p, "theta", "log1");
  r["check"] = get_string(p, "check", "closed-form");
  r["points"] = get_int(p, "points", 100);
  r["r_min"] = get_double(p, "r_min", 1e-12);
  r["J"] = get_doubles(p, "J", {0.0, 0.5, 1.0, 2.0});

  Modulus phi = Modulus::lipschitz();
  try {
    phi = build_modulus(r);
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  const std::string check = r["check"];
  require(check == "closed-form" || check == "fixed-point" || check == "table",
          "check: expected closed-form, fixed-point or table");
  if (check == "closed-form")
    require(phi.has_closed_form(), "check closed-form: kind '" + r["kind"].get<std::string>() +
                                       "' has no closed form");
  r["r_max"] = get_double(p, "r_max", 0.5 * phi.cutoff());
  r["tol"] = get_double(p, "tol", check == "fixed-point" ? 1e-8 : 1e-6);
  require(r["points"].get<int>() >= 1, "points must be >= 1");
  const double rmin = r["r_min"], rmax = r["r_max"];
  require(rmin > 0.0 && rmin <= rmax, "need 0 < r_min <= r_max");
  require(rmax <= phi.domain_max(), "r_max exceeds the modulus domain");
  require(r["tol"].get<double>() > 0.0, "tol must be positive");
  for (double J : r["J"].get<std::vector<double>>()) require(J >= 0.0, "J values must be >= 0");
  return r;
}

Report run(const ExperimentConfig&, const Json& r) {
  const Modulus phi = build_modulus(r);
  const std::vector<double> grid =
      numerics::log_spaced(r["r_min"].get<double>(), r["r_max"].get<double>(), r["points"].get<int>());
  const double tol = r["tol"];
  const std::string check = r["check"];
  Report rep;
  rep.resolved = r;

  if (check == "closed-form") {
    Table fwd{"modulus", {"r", "R_pipeline", "R_closed", "rel_err"}, {}};
    Table inv{"modulus_inverse", {"y", "R_inverse_pipeline", "R_inverse_closed", "rel_err"}, {}};
    double worst = 0.0;
    for (double x : grid) {
      const double pipe = R_of(phi, x);
      const double closed = *closed_form_R(phi, x);
      const double e1 = rel_err(pipe, closed);
      fwd.add({x, pipe, closed, e1});
      const double back = R_inverse(phi, closed);
      const double back_closed = *closed_form_R_inverse(phi, closed);
      const double e2 = rel_err(back, back_closed);
      inv.add({closed, back, back_closed, e2});
      worst = std::max({worst, e1, e2});
    }
    rep.tables = {fwd, inv};
    rep.verdicts["max_rel_err"] = worst;
    rep.pass = worst <= tol;
  } else if (check == "fixed-point") {
    Table t{"fixed_point", {"J", "r", "R_of_mu", "eJ_R", "rel_err"}, {}};
    double worst = 0.0;
    long long skipped = 0;
    for (double J : r["J"].get<std::vector<double>>()) {
      for (double x : grid) {
        try {
          const double lhs = R_of(phi, propagated_modulus(phi, {J}, x));
          const double rhs = std::exp(J) * R_of(phi, x);
          const double e = rel_err(lhs, rhs);
          worst = std::max(worst, e);
          t.add({J, x, lhs, rhs, e});
        } catch (const RangeError&) {
          ++skipped;
        }
      }
    }
    rep.tables = {t};
    rep.verdicts["max_rel_err"] = worst;
    rep.verdicts["out_of_range_points"] = skipped;
    rep.pass = worst <= tol;
  } else {
    Table t{"modulus_table", {"r", "phi", "M", "R"}, {}};
    for (double x : grid) t.add({x, phi(x), osgood_M(phi, x), R_of(phi, x)});
    rep.tables = {t};
    rep.verdicts["osgood"] = phi.is_osgood();
  }
  rep.verdicts["check"] = check;
  return rep;
}

}  // namespace

Command modulus_command() { return {plan, run}; }

}  // namespace osgood::lab
