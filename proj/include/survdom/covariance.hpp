#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "survdom/density.hpp"
#include "survdom/survival.hpp"

namespace survdom {

/// Equally spaced evaluation points tau_i = i * tau / m, i = 1..m. The origin
/// is excluded: the limiting process is degenerate there.
struct Grid {
  double tau = 0.0;
  std::vector<double> points;

  std::size_t size() const noexcept { return points.size(); }
};

/// min(max X_i, max Y_j).
double compute_tau(const SurvivalSample& sample_t, const SurvivalSample& sample_u);

Grid build_grid(double tau, std::size_t m);

/// Plug-in for the product S_T * H_C in the variance integrand.
enum class Denominator {
  Empirical,  ///< at-risk fraction #{X >= t} / n
  ReverseKm,  ///< KM times reverse-KM censoring survival
};

struct IntegralOptions {
  int refine = 10;            ///< trapezoid sub-intervals per grid cell
  double denom_floor = 1e-3;  ///< lower clamp on each plug-in denominator
  Denominator denominator = Denominator::Empirical;
};

/// Cumulative a(x) = int_0^x f(t) / (S(t) * S_X(t)) dt at every grid point,
/// by trapezoid rule on a refined sub-grid. Throws NumericalError (stage
/// "a_integral") if a denominator vanishes before the last grid cell.
std::vector<double> a_integral(const SurvivalSample& sample, const Grid& grid, const KmKernelDensity& density,
                               const IntegralOptions& options = {});

struct SampleCovariance {
  Grid grid;
  Eigen::MatrixXd matrix;
  std::vector<double> survival;  ///< KM at the grid points
  std::vector<double> a_values;
};

/// Entry (i, j) = S(tau_i) S(tau_j) a(tau_min(i,j)).
SampleCovariance single_sample_cov(const SurvivalSample& sample, const Grid& grid, const KmKernelDensity& density,
                                   const IntegralOptions& options = {});

struct CovarianceDiagnostics {
  double min_eigenvalue = 0.0;  ///< smallest eigenvalue before repair
  double jitter = 0.0;          ///< diagonal jitter added by the repair
  std::vector<std::size_t> dropped;  ///< original grid indices with both variances < 1e-12
};

/// Pooled covariance (1 - lambda) cov_T + lambda cov_U on the retained grid.
/// `grid` and `kept` list the retained points; `matrix` is already repaired.
struct CovarianceModel {
  Grid grid;
  std::vector<std::size_t> kept;
  Eigen::MatrixXd matrix;
  double lambda = 0.5;
  CovarianceDiagnostics diagnostics;
};

inline constexpr double kDropVariance = 1e-12;

CovarianceModel pooled_cov(const SampleCovariance& cov_t, const SampleCovariance& cov_u, double lambda);

}  // namespace survdom
