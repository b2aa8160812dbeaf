#include <cmath>

#include "osgood/acm.hpp"
#include "osgood/errors.hpp"
#include "osgood/lab/commands.hpp"
#include "parse_growth.hpp"

namespace osgood::lab {

namespace {

SeriesKind series_kind(const std::string& name) {
  if (name == "sum_lambda") return SeriesKind::sum_lambda;
  if (name == "grad_lp") return SeriesKind::grad_lp;
  if (name == "init_sobolev") return SeriesKind::init_sobolev;
  if (name == "blowup") return SeriesKind::blowup;
  throw ValidationError("condition: unknown '" + name + "'");
}

Json plan(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  Json r;
  r["theta"] = get_string(p, "theta", "log1");
  r["N"] = get_int(p, "N", 8);
  r["d"] = get_int(p, "d", 2);
  r["sigma"] = get_double(p, "sigma", 0.5);
  r["condition"] = get_string(p, "condition", "sum_lambda");
  r["p"] = get_double(p, "p", 2.0);
  r["s"] = get_double(p, "s", 0.5);
  r["t"] = get_double(p, "t", 0.1);
  r["c"] = get_double(p, "c", 1.0);
  r["bound_constant"] = get_double(p, "bound_constant", 1.0);

  parse_growth(r["theta"]);
  try {
    make_cells(parse_growth(r["theta"]), r["N"], r["d"], r["sigma"]);
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  const std::string cond = r["condition"];
  if (cond != "condition2") series_kind(cond);
  require(r["p"].get<double>() >= 1.0, "p must be >= 1");
  if (cond == "blowup") {
    const double s = r["s"], t = r["t"], c = r["c"];
    require(s > 0.0 && s < 1.0, "s must be in (0, 1)");
    require(t > 0.0 && c > 0.0, "t and c must be positive");
  }
  return r;
}

Report run(const ExperimentConfig&, const Json& r) {
  const GrowthFunction theta = parse_growth(r["theta"]);
  const std::string cond = r["condition"];
  Report rep;
  rep.resolved = r;
  rep.verdicts["condition"] = cond;

  if (cond == "condition2") {
    const Condition2Report c2 = condition2_bound(theta, r["p"], r["d"]);
    Table t{"condition2", {"n", "F_e_n", "partial_sum"}, {}};
    double sum = 0.0;
    for (int n = 1; n <= 50; ++n) {
      const double f = condition2_F(theta, r["p"], r["d"], std::exp(static_cast<double>(n)));
      sum += f;
      t.add({static_cast<long long>(n), f, sum});
    }
    rep.tables = {t};
    rep.verdicts["integrable"] = c2.integrable;
    rep.verdicts["series_sum"] = c2.series_sum;
    rep.verdicts["total_bound"] = c2.total_bound;
    rep.verdicts["F_max_ratio"] = c2.F_max_ratio;
    rep.verdicts["verdict"] = c2.series_within_bound ? "bounded_by" : "exceeds_bound";
    rep.pass = c2.integrable && c2.series_within_bound;
    return rep;
  }

  const CellFamily cells = make_cells(theta, r["N"], r["d"], r["sigma"]);
  SeriesQuery q;
  q.kind = series_kind(cond);
  q.p = r["p"];
  q.s = r["s"];
  q.t = r["t"];
  q.c = r["c"];
  q.bound_constant = r["bound_constant"];
  const SeriesReport s = series_condition(cells, q);

  const bool blowup = q.kind == SeriesKind::blowup;
  Table t{"series", {"n", "log_term", "log_partial_sum", "partial_sum"}, {}};
  if (blowup) {
    t.header.push_back("display_log_term");
    t.header.push_back("display_log_partial_sum");
  }
  for (std::size_t i = 0; i < s.log_terms.size(); ++i) {
    std::vector<Cell> row{static_cast<long long>(i + 1), s.log_terms[i], s.log_partial_sums[i],
                          s.partial_sums[i]};
    if (blowup) {
      row.emplace_back(s.display_log_terms[i]);
      row.emplace_back(s.display_log_partial_sums[i]);
    }
    t.add(std::move(row));
  }
  rep.tables = {t};
  rep.verdicts["verdict"] = to_string(s.verdict);
  rep.verdicts["first_divergent_n"] = s.first_divergent_n;
  rep.verdicts["bound"] = std::isinf(s.bound) ? Json(nullptr) : Json(s.bound);
  rep.verdicts["divergence_threshold"] = kDivergenceThreshold;
  if (blowup) {
    rep.verdicts["display_verdict"] = to_string(s.display_verdict);
    rep.verdicts["display_first_divergent_n"] = s.display_first_divergent_n;
    rep.verdicts["expected"] = "diverging";
    rep.pass = s.verdict == Verdict::diverging;
  } else {
    rep.verdicts["expected"] = "bounded_by";
    rep.pass = s.verdict == Verdict::bounded_by;
  }
  return rep;
}

}  // namespace

Command acm_command() { return {plan, run}; }

}  // namespace osgood::lab
