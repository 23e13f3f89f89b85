#include "survdom/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "survdom/errors.hpp"
#include "survdom/mvn.hpp"

namespace survdom {

double compute_tau(const SurvivalSample& sample_t, const SurvivalSample& sample_u) {
  return std::min(sample_t.max_time(), sample_u.max_time());
}

Grid build_grid(double tau, std::size_t m) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("grid: tau must be positive and finite");
  if (m < 2) throw DomainError("grid: need at least two points");
  Grid grid;
  grid.tau = tau;
  grid.points.resize(m);
  for (std::size_t i = 0; i < m; ++i) grid.points[i] = static_cast<double>(i + 1) * tau / static_cast<double>(m);
  grid.points.back() = tau;
  return grid;
}

std::vector<double> a_integral(const SurvivalSample& sample, const Grid& grid, const KmKernelDensity& density,
                               const IntegralOptions& options) {
  if (grid.points.empty()) throw DomainError("a_integral: empty grid");
  if (options.refine < 1) throw DomainError("a_integral: refinement factor must be >= 1");
  if (!(options.denom_floor > 0.0)) throw DomainError("a_integral: denominator floor must be positive");

  const StepCurve km = km_fit(sample);
  const StepCurve observed = empirical_observed_survival(sample);
  StepCurve censor;
  if (options.denominator == Denominator::ReverseKm) censor = censoring_km(sample);

  const double trailing_start = grid.size() >= 2 ? grid.points[grid.size() - 2] : 0.0;
  const double floor = options.denom_floor;

  auto integrand = [&](double t) {
    const double surv = km.eval(t);
    const double joint = options.denominator == Denominator::Empirical ? observed.left_limit(t)
                                                                        : surv * censor.left_limit(t);
    if ((surv <= 0.0 || joint <= 0.0) && t <= trailing_start)
      throw NumericalError("a_integral", "plug-in survival reaches zero at t = " + std::to_string(t) +
                                             " before tau; choose a smaller tau");
    return density(t) / (std::max(surv, floor) * std::max(joint, floor));
  };

  std::vector<double> out(grid.size());
  double acc = 0.0;
  double left = 0.0;
  double f_left = integrand(0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double right = grid.points[i];
    const double step = (right - left) / options.refine;
    for (int k = 1; k <= options.refine; ++k) {
      const double t = k == options.refine ? right : left + k * step;
      const double f = integrand(t);
      acc += 0.5 * (f_left + f) * step;
      f_left = f;
    }
    out[i] = acc;
    left = right;
  }
  return out;
}

SampleCovariance single_sample_cov(const SurvivalSample& sample, const Grid& grid, const KmKernelDensity& density,
                                   const IntegralOptions& options) {
  SampleCovariance out;
  out.grid = grid;
  out.a_values = a_integral(sample, grid, density, options);
  const StepCurve km = km_fit(sample);
  const std::size_t m = grid.size();
  out.survival.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.survival[i] = km.eval(grid.points[i]);
  out.matrix.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = out.survival[i] * out.survival[j] * out.a_values[j];
      out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      out.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return out;
}

CovarianceModel pooled_cov(const SampleCovariance& cov_t, const SampleCovariance& cov_u, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("pooled covariance: lambda must lie in (0, 1)");
  if (cov_t.grid.points != cov_u.grid.points) throw DomainError("pooled covariance: grids differ");
  const auto m = static_cast<Eigen::Index>(cov_t.grid.size());

  CovarianceModel model;
  model.lambda = lambda;
  model.grid.tau = cov_t.grid.tau;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (cov_t.matrix(i, i) < kDropVariance && cov_u.matrix(i, i) < kDropVariance) {
      model.diagnostics.dropped.push_back(static_cast<std::size_t>(i));
    } else {
      model.kept.push_back(static_cast<std::size_t>(i));
      model.grid.points.push_back(cov_t.grid.points[static_cast<std::size_t>(i)]);
    }
  }
  if (model.kept.empty()) throw NumericalError("pooled_cov", "every grid point has zero variance");

  const auto k = static_cast<Eigen::Index>(model.kept.size());
  Eigen::MatrixXd pooled(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto i = static_cast<Eigen::Index>(model.kept[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < k; ++b) {
      const auto j = static_cast<Eigen::Index>(model.kept[static_cast<std::size_t>(b)]);
      pooled(a, b) = (1.0 - lambda) * cov_t.matrix(i, j) + lambda * cov_u.matrix(i, j);
    }
  }
  pooled = 0.5 * (pooled + pooled.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pooled, Eigen::EigenvaluesOnly);
  model.diagnostics.min_eigenvalue = eig.eigenvalues().minCoeff();

  try {
    const PsdFactor factor = factor_psd(pooled);
    model.diagnostics.jitter = factor.jitter;
    pooled.diagonal().array() += factor.jitter;
  } catch (const NumericalError& e) {
    throw NumericalError("pooled_cov", e.what());
  }
  model.matrix = std::move(pooled);
  return model;
}

}  // namespace survdom
