#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "survdom/classical.hpp"
#include "survdom/dominance.hpp"
#include "survdom/errors.hpp"
#include "survdom/io.hpp"
#include "survdom/mvn.hpp"
#include "survdom/report.hpp"
#include "survdom/simulation.hpp"

namespace py = pybind11;
using namespace survdom;

namespace {

SurvivalSample make_sample(const std::vector<double>& times, const std::vector<int>& events) {
  if (times.size() != events.size()) throw DataError("times and events differ in length");
  return SurvivalSample::from_arrays(times, events);
}

// Results cross the boundary as JSON text; the Python side decodes them.
std::string dominance(const std::vector<double>& t_times, const std::vector<int>& t_events,
                      const std::vector<double>& u_times, const std::vector<int>& u_events, std::size_t grid,
                      std::uint64_t seed, double accuracy, std::optional<double> bandwidth, std::optional<double> tau,
                      const std::string& denominator, const std::string& window) {
  DominanceConfig cfg;
  cfg.grid_size = grid;
  cfg.seed = seed;
  cfg.mvn.abs_tolerance = accuracy;
  cfg.bandwidth = bandwidth;
  cfg.tau = tau;
  cfg.integral.denominator = parse_denominator(denominator);
  cfg.window = parse_window(window);
  const auto st = make_sample(t_times, t_events);
  const auto su = make_sample(u_times, u_events);
  DominanceResult r;
  {
    py::gil_scoped_release release;
    r = dominance_test(st, su, cfg);
  }
  nlohmann::ordered_json j;
  j["config"] = config_json(cfg);
  j["result"] = to_json(r);
  return j.dump();
}

std::string logrank(const std::vector<double>& t1, const std::vector<int>& e1, const std::vector<double>& t2,
                    const std::vector<int>& e2, const std::string& variant) {
  return to_json(weighted_logrank(make_sample(t1, e1), make_sample(t2, e2), parse_wlr_variant(variant))).dump();
}

std::string simulate(const std::vector<std::tuple<std::string, double, double, double, double, std::string,
                                                  std::size_t>>& cells,
                     std::size_t replications, std::uint64_t seed, const std::vector<double>& alphas,
                     unsigned threads) {
  std::vector<Scenario> scenarios;
  for (const auto& [label, kt, st, ku, su, censor, n] : cells)
    scenarios.push_back({label, {kt, st}, {ku, su}, parse_censor_target(censor), n});
  RejectionTable table;
  {
    py::gil_scoped_release release;
    table = rejection_table(scenarios, replications, seed, alphas, {}, threads);
  }
  return to_json(table).dump();
}

}  // namespace

PYBIND11_MODULE(_survdom, m) {
  m.doc() = "Stochastic dominance tests for right-censored two-sample data";

  static py::exception<DataError> data_error(m, "DataError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DataError& e) {
      data_error(e.what());
    } catch (const NumericalError& e) {
      numerical_error(e.what());
    }
  });

  m.def(
      "km",
      [](const std::vector<double>& times, const std::vector<int>& events) {
        const StepCurve c = km_fit(make_sample(times, events));
        return py::make_tuple(std::vector<double>(c.jump_times().begin(), c.jump_times().end()),
                              std::vector<double>(c.values().begin(), c.values().end()));
      },
      py::arg("times"), py::arg("events"), "Kaplan-Meier jump times and post-jump survival values.");

  m.def("dominance_json", &dominance, py::arg("t_times"), py::arg("t_events"), py::arg("u_times"),
        py::arg("u_events"), py::arg("grid") = 100, py::arg("seed") = 1, py::arg("accuracy") = 5e-4,
        py::arg("bandwidth") = py::none(), py::arg("tau") = py::none(), py::arg("denominator") = "empirical",
        py::arg("window") = "after-first-events");

  m.def("logrank_json", &logrank, py::arg("t1"), py::arg("e1"), py::arg("t2"), py::arg("e2"),
        py::arg("variant") = "log-rank");

  m.def(
      "mvn_upper_tail_sup",
      [](const Eigen::MatrixXd& cov, double delta, std::uint64_t seed, double accuracy) {
        RngStream rng(seed, 0);
        MvnOptions opt;
        opt.abs_tolerance = accuracy;
        const auto r = mvn_upper_tail_sup(cov, delta, rng, opt);
        return py::make_tuple(r.probability, r.error);
      },
      py::arg("cov"), py::arg("delta"), py::arg("seed") = 1, py::arg("accuracy") = 5e-4,
      "P(max X_i > delta) for X ~ N(0, cov), with a ~95% error estimate.");

  m.def("simulate_json", &simulate, py::arg("cells"), py::arg("replications"), py::arg("seed"),
        py::arg("alphas"), py::arg("threads") = 0);

  m.def(
      "read_groups",
      [](const std::string& path) {
        const Dataset d = read_dataset(path);
        py::dict out;
        for (const auto& g : d.groups) {
          std::vector<double> t;
          std::vector<int> e;
          for (const auto& r : d.records)
            if (r.group == g) {
              t.push_back(r.time);
              e.push_back(r.status == Status::Event);
            }
          out[py::str(g)] = py::make_tuple(t, e);
        }
        return out;
      },
      py::arg("path"), "Group label -> (times, events) from a time,status,group CSV.");
}
