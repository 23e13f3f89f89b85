#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "survdom/numerics.hpp"

namespace survdom {

/// Diagonal jitter schedule, relative to the largest diagonal entry. The
/// first attempt uses no jitter.
struct JitterPolicy {
  double initial = 1e-10;
  double growth = 10.0;
  double max = 1e-6;
};

struct PsdFactor {
  Eigen::MatrixXd lower;  ///< L with L L^T = A + jitter I
  double jitter = 0.0;    ///< absolute jitter added
};

/// Cholesky factor of a symmetric PSD matrix with escalating diagonal jitter.
/// Throws NumericalError (stage "factor_psd") when the cap is exceeded.
PsdFactor factor_psd(const Eigen::MatrixXd& matrix, const JitterPolicy& policy = {});

struct MvnOptions {
  double abs_tolerance = 5e-4;
  std::size_t max_evaluations = 10'000'000;
  std::size_t shifts = 12;             ///< random lattice shifts per round
  std::size_t initial_points = 64;     ///< lattice points per shift, first round
};

struct MvnResult {
  double probability = 0.0;
  double error = 0.0;  ///< ~95% absolute error estimate (1.96 standard errors)
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

/// Ratio between the reported error and one standard error.
inline constexpr double kMvnErrorZ = 1.96;

/// P(X_i <= upper_i for all i), X ~ N(0, cov).
///
/// Sequential conditioning on the Cholesky factor (variables reordered so the
/// most restrictive conditional interval comes first), integrated by
/// randomized Richtmyer lattice rules with tent periodization and antithetic
/// pairs. The spread across random shifts gives the error estimate; rounds
/// double the lattice size until the tolerance or the budget is reached.
/// Dimensions with conditional variance below 1e-14 (relative to the largest
/// variance) act as 0/1 point constraints.
MvnResult mvn_lower_orthant(const Eigen::MatrixXd& cov, const Eigen::VectorXd& upper, RngStream& rng,
                            const MvnOptions& options = {});

/// P(max_i X_i > delta) = 1 - P(all X_i <= delta).
MvnResult mvn_upper_tail_sup(const Eigen::MatrixXd& cov, double delta, RngStream& rng,
                             const MvnOptions& options = {});

struct McResult {
  double probability = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
};

/// Plain Monte Carlo: fraction of `paths` draws L z whose maximum exceeds delta.
McResult mc_sup_prob(const Eigen::MatrixXd& cov, double delta, std::size_t paths, RngStream& rng);

}  // namespace survdom
