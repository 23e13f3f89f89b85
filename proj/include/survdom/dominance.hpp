#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "survdom/covariance.hpp"
#include "survdom/mvn.hpp"
#include "survdom/survival.hpp"

namespace survdom {

/// Which grid points enter the supremum (and the Gaussian maximum).
enum class SupWindow {
  /// Points at or after the later of the two first event times, i.e. where
  /// both Kaplan-Meier curves have left 1.
  AfterFirstEvents,
  FullGrid,
};

struct DominanceConfig {
  std::size_t grid_size = 100;
  MvnOptions mvn;
  std::optional<double> bandwidth;  ///< overrides the rule-of-thumb for both samples
  std::optional<double> tau;        ///< overrides min(max X, max Y)
  IntegralOptions integral;
  SupWindow window = SupWindow::AfterFirstEvents;
  std::uint64_t seed = 1;
};

struct DominanceResult {
  double delta = 0.0;            ///< statistic over the grid window
  double delta_event_sup = 0.0;  ///< scaled exact sup over (0, tau) at jump times
  double tau = 0.0;
  std::size_t grid_size = 0;
  double window_start = 0.0;
  std::size_t points_used = 0;
  double p_upper = 1.0;
  double p_error = 0.0;
  std::size_t mvn_evaluations = 0;
  bool mvn_budget_exhausted = false;
  double lambda = 0.5;
  std::size_t n_t = 0;
  std::size_t n_u = 0;
  double bandwidth_t = 0.0;
  double bandwidth_u = 0.0;
  CovarianceDiagnostics covariance;
  std::vector<std::string> notes;
};

/// sqrt(n m / (n + m)) * max over `points` of (S_T - S_U).
double delta_statistic(const StepCurve& curve_t, const StepCurve& curve_u, std::span<const double> points,
                       std::size_t n, std::size_t m);

/// Same scaling, supremum over all of (0, tau): the difference is piecewise
/// constant, so the jump times of either curve below tau (and 0+) suffice.
double delta_event_sup(const StepCurve& curve_t, const StepCurve& curve_u, double tau, std::size_t n,
                       std::size_t m);

/// Supremum test of H0: S_T <= S_U on (0, tau). `p_upper` is the asymptotic
/// upper bound P(sup G > delta) for the pooled Gaussian limit.
DominanceResult dominance_test(const SurvivalSample& sample_t, const SurvivalSample& sample_u,
                               const DominanceConfig& config = {});

}  // namespace survdom
