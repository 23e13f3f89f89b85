// survdom: command-line front end for the survival dominance toolkit.
//
//   survdom km --data lung.csv [--plot-out curves.csv]
//   survdom dominance --data lung.csv --t-group male --u-group female
//   survdom classical --data kidney.csv --all
//   survdom simulate --scenarios cases.csv --replications 500
//
// Results go to stdout as one JSON document (CSV for simulate); --table adds
// a human-readable view on stderr. Exit codes: 0 ok, 2 usage, 3 data,
// 4 numerical failure.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "survdom/classical.hpp"
#include "survdom/dominance.hpp"
#include "survdom/errors.hpp"
#include "survdom/io.hpp"
#include "survdom/report.hpp"
#include "survdom/simulation.hpp"

namespace {

using nlohmann::ordered_json;
using namespace survdom;

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

struct DataOptions {
  std::string path;
  CsvColumns columns;
  std::string t_group;
  std::string u_group;
};

void add_data_options(CLI::App* cmd, DataOptions& opt) {
  cmd->add_option("--data", opt.path, "CSV file with time,status,group columns")->required();
  cmd->add_option("--time-col", opt.columns.time, "Name of the time column");
  cmd->add_option("--status-col", opt.columns.status, "Name of the status column");
  cmd->add_option("--group-col", opt.columns.group, "Name of the group column");
  cmd->add_option("--status-event-value", opt.columns.event_value, "Status code marking an event");
  cmd->add_option("--status-censor-value", opt.columns.censor_value,
                  "Status code marking censoring (default 0, or 1 when the event code is 2)");
  cmd->add_option("--t-group", opt.t_group, "Group playing the role of T");
  cmd->add_option("--u-group", opt.u_group, "Group playing the role of U");
}

ordered_json data_echo(const DataOptions& opt, const SurvivalSample& t, const SurvivalSample& u) {
  ordered_json j;
  j["data"] = opt.path;
  j["t_group"] = t.label();
  j["u_group"] = u.label();
  j["n_t"] = t.size();
  j["n_u"] = u.size();
  j["events_t"] = t.event_count();
  j["events_u"] = u.event_count();
  return j;
}

std::optional<double> real_or_auto(const std::string& s, const char* flag) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !(v > 0.0)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected a positive number or 'auto'");
  }
}

int run_km(const DataOptions& opt, const std::string& plot_out, bool table) {
  const Dataset data = read_dataset(opt.path, opt.columns);
  ordered_json doc;
  doc["command"] = "km";
  doc["data"] = opt.path;
  std::vector<std::pair<std::string, StepCurve>> curves;
  auto groups = ordered_json::array();
  for (const auto& g : data.groups) {
    const SurvivalSample s = data.sample(g);
    StepCurve km = km_fit(s);
    ordered_json jg;
    jg["group"] = g;
    jg["n"] = s.size();
    jg["events"] = s.event_count();
    jg["times"] = std::vector<double>(km.jump_times().begin(), km.jump_times().end());
    jg["survival"] = std::vector<double>(km.values().begin(), km.values().end());
    groups.push_back(std::move(jg));
    if (table) {
      std::cerr << "group " << g << " (n=" << s.size() << ", events=" << s.event_count() << ")\n";
      for (std::size_t i = 0; i < km.jump_count(); ++i)
        std::cerr << "  " << std::setw(10) << km.jump_times()[i] << "  " << std::fixed << std::setprecision(4)
                  << km.values()[i] << std::defaultfloat << '\n';
    }
    curves.emplace_back(g, std::move(km));
  }
  doc["groups"] = std::move(groups);
  if (!plot_out.empty()) {
    std::ofstream out(plot_out);
    if (!out) throw DataError("cannot write '" + plot_out + "'");
    write_step_csv(out, curves);
    doc["plot_out"] = plot_out;
  }
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

int run_dominance(const DataOptions& opt, const DominanceConfig& config, double alpha, bool table) {
  const auto [t, u] = two_samples(read_dataset(opt.path, opt.columns), opt.t_group, opt.u_group);
  const DominanceResult r = dominance_test(t, u, config);
  ordered_json doc;
  doc["command"] = "dominance";
  doc["input"] = data_echo(opt, t, u);
  doc["config"] = config_json(config);
  doc["config"]["alpha"] = alpha;
  doc["result"] = to_json(r);
  const bool reject = r.p_upper <= alpha;
  doc["decision"] = reject ? "reject H0: survival of T exceeds U somewhere on (0, tau)"
                           : "no evidence against H0: S_T <= S_U on (0, tau)";
  doc["reject"] = reject;
  if (table) {
    std::cerr << "T = " << t.label() << " (n=" << t.size() << "), U = " << u.label() << " (n=" << u.size() << ")\n"
              << "tau      " << r.tau << "\n"
              << "delta    " << std::fixed << std::setprecision(4) << r.delta << "\n"
              << "p_upper  " << r.p_upper << " (+/- " << std::setprecision(5) << r.p_error << ")\n"
              << std::defaultfloat << (reject ? "reject H0" : "do not reject H0") << " at alpha = " << alpha << '\n';
  }
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

int run_classical(const DataOptions& opt, const std::vector<std::string>& tests, bool table) {
  const auto [t, u] = two_samples(read_dataset(opt.path, opt.columns), opt.t_group, opt.u_group);
  std::vector<WlrVariant> variants;
  if (tests.empty()) {
    variants.assign(kAllWlrVariants.begin(), kAllWlrVariants.end());
  } else {
    for (const auto& name : tests) variants.push_back(parse_wlr_variant(name));
  }
  ordered_json doc;
  doc["command"] = "classical";
  doc["input"] = data_echo(opt, t, u);
  auto rows = ordered_json::array();
  if (table) std::cerr << std::left << std::setw(22) << "test" << std::right << std::setw(12) << "statistic"
                       << std::setw(12) << "p-value" << '\n';
  for (WlrVariant v : variants) {
    const WLRResult r = weighted_logrank(t, u, v);
    rows.push_back(to_json(r));
    if (table)
      std::cerr << std::left << std::setw(22) << to_string(v) << std::right << std::fixed << std::setprecision(4)
                << std::setw(12) << r.statistic << std::setw(12) << r.p << std::defaultfloat << '\n';
  }
  doc["tests"] = std::move(rows);
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

int run_simulate(const std::string& scenario_path, std::size_t replications, std::uint64_t seed,
                 const std::vector<double>& alphas, unsigned threads, const DominanceConfig& config,
                 const std::string& out_path, bool table) {
  std::ifstream in(scenario_path);
  if (!in) throw DataError("cannot open '" + scenario_path + "'");
  const std::vector<Scenario> scenarios = read_scenarios(in);
  const RejectionTable result = rejection_table(scenarios, replications, seed, alphas, config, threads);
  if (out_path.empty()) {
    write_rejection_csv(std::cout, result);
  } else {
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write '" + out_path + "'");
    write_rejection_csv(out, result);
  }
  if (table) {
    for (const auto& row : result.rows) {
      std::cerr << std::left << std::setw(10) << row.scenario.label << std::right << " n=" << std::setw(4)
                << row.scenario.n << ' ' << to_string(row.scenario.censor);
      for (std::size_t a = 0; a < alphas.size(); ++a)
        std::cerr << "  rate(" << alphas[a] << ")=" << std::fixed << std::setprecision(3) << row.rates[a]
                  << std::defaultfloat;
      std::cerr << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic dominance testing for right-censored survival data"};
  app.require_subcommand(1);
  bool table = false;
  app.add_flag("--table", table, "Also print a human-readable table to stderr");

  DataOptions data_opt;

  auto* km = app.add_subcommand("km", "Kaplan-Meier curves per group");
  add_data_options(km, data_opt);
  std::string plot_out;
  km->add_option("--plot-out", plot_out, "Write step coordinates (group,time,survival) to this file");

  DominanceConfig config;
  std::string bandwidth = "auto";
  std::string tau = "auto";
  std::string denominator = "empirical";
  std::string window = "after-first-events";
  double alpha = 0.05;

  auto add_config_options = [&](CLI::App* cmd) {
    cmd->add_option("--grid", config.grid_size, "Number of grid points m")->check(CLI::Range(2, 1000));
    cmd->add_option("--seed", config.seed, "Random seed");
    cmd->add_option("--accuracy", config.mvn.abs_tolerance, "Absolute error target of the MVN integration")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-evals", config.mvn.max_evaluations, "MVN integrand evaluation budget");
    cmd->add_option("--bandwidth", bandwidth, "Kernel bandwidth (number or 'auto')");
    cmd->add_option("--denominator", denominator, "Plug-in for S*H_C")
        ->check(CLI::IsMember({"empirical", "reverse-km"}));
    cmd->add_option("--window", window, "Grid points entering the supremum")
        ->check(CLI::IsMember({"after-first-events", "full"}));
  };

  auto* dom = app.add_subcommand("dominance", "Supremum test of H0: S_T <= S_U");
  add_data_options(dom, data_opt);
  add_config_options(dom);
  dom->add_option("--tau", tau, "Upper end of the interval (number or 'auto')");
  dom->add_option("--alpha", alpha, "Significance level for the reported decision")->check(CLI::Range(0.0, 1.0));

  auto* cls = app.add_subcommand("classical", "Weighted log-rank tests");
  add_data_options(cls, data_opt);
  bool all = false;
  std::vector<std::string> tests;
  cls->add_flag("--all", all, "Run all five variants (default)");
  cls->add_option("--test", tests, "log-rank, gehan, tarone-ware, peto-peto, modified-peto-peto");

  auto* sim = app.add_subcommand("simulate", "Rejection rates over simulated scenarios");
  std::string scenario_path;
  std::size_t replications = 1000;
  std::vector<double> alphas{0.05, 0.01};
  unsigned threads = 0;
  std::string out_path;
  sim->add_option("--scenarios", scenario_path, "Scenario file")->required();
  sim->add_option("--replications", replications, "Replications per scenario")->check(CLI::Range(50, 100000000));
  sim->add_option("--alpha", alphas, "Significance levels");
  sim->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sim->add_option("--out", out_path, "Write the CSV table here instead of stdout");
  add_config_options(sim);

  try {
    app.parse(argc, argv);
    if (!all && tests.empty()) all = true;
    config.bandwidth = real_or_auto(bandwidth, "--bandwidth");
    config.tau = real_or_auto(tau, "--tau");
    config.integral.denominator = parse_denominator(denominator);
    config.window = parse_window(window);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*km) return run_km(data_opt, plot_out, table);
    if (*dom) return run_dominance(data_opt, config, alpha, table);
    if (*cls) return run_classical(data_opt, tests, table);
    if (*sim) {
      return run_simulate(scenario_path, replications, config.seed, alphas, threads, config, out_path, table);
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error [" << e.stage() << "]: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
