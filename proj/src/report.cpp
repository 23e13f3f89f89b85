#include "survdom/report.hpp"

#include "survdom/errors.hpp"

namespace survdom {

std::string to_string(Denominator d) { return d == Denominator::Empirical ? "empirical" : "reverse-km"; }

Denominator parse_denominator(std::string_view name) {
  if (name == "empirical") return Denominator::Empirical;
  if (name == "reverse-km") return Denominator::ReverseKm;
  throw DomainError("denominator must be 'empirical' or 'reverse-km'");
}

std::string to_string(SupWindow w) { return w == SupWindow::AfterFirstEvents ? "after-first-events" : "full"; }

SupWindow parse_window(std::string_view name) {
  if (name == "after-first-events") return SupWindow::AfterFirstEvents;
  if (name == "full") return SupWindow::FullGrid;
  throw DomainError("window must be 'after-first-events' or 'full'");
}

nlohmann::ordered_json config_json(const DominanceConfig& config) {
  nlohmann::ordered_json j;
  j["grid"] = config.grid_size;
  j["seed"] = config.seed;
  j["accuracy"] = config.mvn.abs_tolerance;
  j["max_evaluations"] = config.mvn.max_evaluations;
  j["mvn_shifts"] = config.mvn.shifts;
  j["bandwidth"] = config.bandwidth ? nlohmann::ordered_json(*config.bandwidth) : nlohmann::ordered_json("auto");
  j["tau"] = config.tau ? nlohmann::ordered_json(*config.tau) : nlohmann::ordered_json("auto");
  j["denominator"] = to_string(config.integral.denominator);
  j["refine"] = config.integral.refine;
  j["denominator_floor"] = config.integral.denom_floor;
  j["window"] = to_string(config.window);
  return j;
}

nlohmann::ordered_json to_json(const DominanceResult& r) {
  nlohmann::ordered_json j;
  j["delta"] = r.delta;
  j["p_upper"] = r.p_upper;
  j["p_error"] = r.p_error;
  j["tau"] = r.tau;
  j["grid_size"] = r.grid_size;
  j["points_used"] = r.points_used;
  j["window_start"] = r.window_start;
  j["lambda"] = r.lambda;
  j["n_t"] = r.n_t;
  j["n_u"] = r.n_u;
  j["bandwidth_t"] = r.bandwidth_t;
  j["bandwidth_u"] = r.bandwidth_u;
  nlohmann::ordered_json diag;
  diag["delta_event_sup"] = r.delta_event_sup;
  diag["mvn_evaluations"] = r.mvn_evaluations;
  diag["mvn_budget_exhausted"] = r.mvn_budget_exhausted;
  diag["min_eigenvalue"] = r.covariance.min_eigenvalue;
  diag["jitter"] = r.covariance.jitter;
  diag["dropped_points"] = r.covariance.dropped;
  diag["notes"] = r.notes;
  j["diagnostics"] = std::move(diag);
  return j;
}

nlohmann::ordered_json to_json(const WLRResult& r) {
  nlohmann::ordered_json j;
  j["test"] = std::string(to_string(r.variant));
  j["statistic"] = r.statistic;
  j["p_value"] = r.p;
  j["score"] = r.score;
  j["variance"] = r.variance;
  j["observed"] = r.observed;
  j["expected"] = r.expected;
  return j;
}

nlohmann::ordered_json to_json(const RejectionTable& t) {
  nlohmann::ordered_json j;
  j["replications"] = t.replications;
  j["seed"] = t.seed;
  j["alphas"] = t.alphas;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    r["label"] = row.scenario.label;
    r["n"] = row.scenario.n;
    r["censor"] = std::string(to_string(row.scenario.censor));
    r["rates"] = row.rates;
    r["completed"] = row.completed;
    r["failed"] = row.failed;
    r["censored_fraction"] = row.censored_fraction;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace survdom
