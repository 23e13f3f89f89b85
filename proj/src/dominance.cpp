#include "survdom/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "survdom/density.hpp"
#include "survdom/errors.hpp"

namespace survdom {

namespace {

double scale_factor(std::size_t n, std::size_t m) {
  const double a = static_cast<double>(n);
  const double b = static_cast<double>(m);
  return std::sqrt(a * b / (a + b));
}

constexpr std::uint64_t kMvnStream = 0x4d564e;

}  // namespace

double delta_statistic(const StepCurve& curve_t, const StepCurve& curve_u, std::span<const double> points,
                       std::size_t n, std::size_t m) {
  if (points.empty()) throw DomainError("delta statistic: empty grid");
  double best = -std::numeric_limits<double>::infinity();
  for (double t : points) best = std::max(best, curve_t.eval(t) - curve_u.eval(t));
  return scale_factor(n, m) * best;
}

double delta_event_sup(const StepCurve& curve_t, const StepCurve& curve_u, double tau, std::size_t n,
                       std::size_t m) {
  double best = 0.0;  // both curves equal 1 just right of 0
  for (const StepCurve* c : {&curve_t, &curve_u}) {
    for (double t : c->jump_times()) {
      if (t >= tau) break;
      best = std::max(best, curve_t.eval(t) - curve_u.eval(t));
    }
  }
  return scale_factor(n, m) * best;
}

DominanceResult dominance_test(const SurvivalSample& sample_t, const SurvivalSample& sample_u,
                               const DominanceConfig& config) {
  if (sample_t.event_count() < 2 || sample_u.event_count() < 2)
    throw DataError("dominance test: each sample needs at least two events");

  DominanceResult res;
  res.n_t = sample_t.size();
  res.n_u = sample_u.size();
  res.grid_size = config.grid_size;
  res.lambda = static_cast<double>(res.n_t) / static_cast<double>(res.n_t + res.n_u);
  res.tau = config.tau.value_or(compute_tau(sample_t, sample_u));
  const Grid grid = build_grid(res.tau, config.grid_size);

  res.bandwidth_t = config.bandwidth.value_or(default_bandwidth(sample_t));
  res.bandwidth_u = config.bandwidth.value_or(default_bandwidth(sample_u));
  const KmKernelDensity dens_t(sample_t, res.bandwidth_t);
  const KmKernelDensity dens_u(sample_u, res.bandwidth_u);

  const SampleCovariance cov_t = single_sample_cov(sample_t, grid, dens_t, config.integral);
  const SampleCovariance cov_u = single_sample_cov(sample_u, grid, dens_u, config.integral);
  const CovarianceModel model = pooled_cov(cov_t, cov_u, res.lambda);
  res.covariance = model.diagnostics;

  std::vector<Eigen::Index> window;
  res.window_start = config.window == SupWindow::AfterFirstEvents
                         ? std::max(sample_t.first_event_time(), sample_u.first_event_time())
                         : 0.0;
  for (std::size_t i = 0; i < model.grid.size(); ++i)
    if (model.grid.points[i] >= res.window_start) window.push_back(static_cast<Eigen::Index>(i));
  if (window.empty()) {
    res.notes.push_back("no grid point after both first events; using the full grid");
    res.window_start = 0.0;
    for (std::size_t i = 0; i < model.grid.size(); ++i) window.push_back(static_cast<Eigen::Index>(i));
  }
  res.points_used = window.size();

  std::vector<double> points;
  points.reserve(window.size());
  for (Eigen::Index i : window) points.push_back(model.grid.points[static_cast<std::size_t>(i)]);
  const StepCurve km_t = km_fit(sample_t);
  const StepCurve km_u = km_fit(sample_u);
  res.delta = delta_statistic(km_t, km_u, points, res.n_t, res.n_u);
  res.delta_event_sup = delta_event_sup(km_t, km_u, res.tau, res.n_t, res.n_u);

  const auto k = static_cast<Eigen::Index>(window.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = model.matrix(window[static_cast<std::size_t>(a)],
                                                                 window[static_cast<std::size_t>(b)]);

  RngStream rng(config.seed, kMvnStream);
  MvnResult mvn;
  try {
    mvn = mvn_upper_tail_sup(sub, res.delta, rng, config.mvn);
  } catch (const NumericalError& e) {
    throw NumericalError("mvn_upper_tail_sup", e.what());
  }
  res.p_upper = mvn.probability;
  res.p_error = mvn.error;
  res.mvn_evaluations = mvn.evaluations;
  res.mvn_budget_exhausted = mvn.budget_exhausted;
  if (mvn.budget_exhausted) res.notes.push_back("MVN evaluation budget exhausted before reaching the tolerance");
  if (res.delta <= 0.0)
    res.notes.push_back("delta <= 0: the limit process is 0 at t = 0, so a supremum including the origin "
                        "exceeds delta surely; the bound uses grid points only");
  if (!model.diagnostics.dropped.empty())
    res.notes.push_back(std::to_string(model.diagnostics.dropped.size()) + " zero-variance grid points dropped");
  return res;
}

}  // namespace survdom
