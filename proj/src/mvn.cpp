#include "survdom/mvn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "survdom/errors.hpp"

namespace survdom {

namespace {

constexpr std::size_t kMaxDimension = 1000;
constexpr double kDegenerateVariance = 1e-14;

std::vector<double> richtmyer_generators(std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t candidate = 2; out.size() < count; ++candidate) {
    bool prime = true;
    for (std::size_t d = 2; d * d <= candidate; ++d) {
      if (candidate % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) {
      const double r = std::sqrt(static_cast<double>(candidate));
      out.push_back(r - std::floor(r));
    }
  }
  return out;
}

// Reordered Cholesky factor plus the permuted limits.
struct Conditioning {
  Eigen::MatrixXd lower;
  std::vector<double> upper;
  std::vector<bool> degenerate;
};

Conditioning condition(const Eigen::MatrixXd& cov, const Eigen::VectorXd& upper) {
  const Eigen::Index k = cov.rows();
  Eigen::MatrixXd c = cov;
  std::vector<double> b(upper.data(), upper.data() + k);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
  std::vector<double> y(static_cast<std::size_t>(k), 0.0);
  std::vector<bool> degenerate(static_cast<std::size_t>(k), false);
  const double scale = std::max(c.diagonal().maxCoeff(), std::numeric_limits<double>::min());
  const double tiny = kDegenerateVariance * scale;

  for (Eigen::Index i = 0; i < k; ++i) {
    // Pick the remaining variable with the smallest expected conditional probability.
    Eigen::Index best = i;
    double best_prob = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = i; j < k; ++j) {
      double shift = 0.0;
      double var = c(j, j);
      for (Eigen::Index l = 0; l < i; ++l) {
        shift += L(j, l) * y[static_cast<std::size_t>(l)];
        var -= L(j, l) * L(j, l);
      }
      const double limit = b[static_cast<std::size_t>(j)] - shift;
      const double prob = var > tiny ? std_normal_cdf(limit / std::sqrt(var)) : (limit >= 0.0 ? 1.0 : 0.0);
      if (prob < best_prob) {
        best_prob = prob;
        best = j;
      }
    }
    if (best != i) {
      c.row(i).swap(c.row(best));
      c.col(i).swap(c.col(best));
      L.row(i).swap(L.row(best));
      std::swap(b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(best)]);
    }

    double var = c(i, i);
    double shift = 0.0;
    for (Eigen::Index l = 0; l < i; ++l) {
      var -= L(i, l) * L(i, l);
      shift += L(i, l) * y[static_cast<std::size_t>(l)];
    }
    if (var <= tiny) {
      degenerate[static_cast<std::size_t>(i)] = true;
      y[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    const double lii = std::sqrt(var);
    L(i, i) = lii;
    for (Eigen::Index r = i + 1; r < k; ++r) {
      double s = c(r, i);
      for (Eigen::Index l = 0; l < i; ++l) s -= L(r, l) * L(i, l);
      L(r, i) = s / lii;
    }
    // Expected value of the truncated standard normal below the limit.
    const double z = (b[static_cast<std::size_t>(i)] - shift) / lii;
    const double p = std_normal_cdf(z);
    y[static_cast<std::size_t>(i)] = p > 1e-300 ? -std_normal_pdf(z) / p : z;
  }
  return {L, std::move(b), std::move(degenerate)};
}

// Shifts are accumulated column by column (acc += L(:, i) z_i) rather than as
// row dot products, so the O(k^2) work has no serial dependency chain.
class OrthantIntegrand {
 public:
  explicit OrthantIntegrand(const Conditioning& cond)
      : cond_(cond), acc_(cond.lower.rows()) {}

  double operator()(const std::vector<double>& w) {
    const Eigen::Index k = cond_.lower.rows();
    acc_.setZero();
    double f = 1.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double limit = cond_.upper[static_cast<std::size_t>(i)] - acc_(i);
      if (cond_.degenerate[static_cast<std::size_t>(i)]) {
        if (limit < 0.0) return 0.0;
        continue;
      }
      const double e = std_normal_cdf(limit / cond_.lower(i, i));
      f *= e;
      if (f == 0.0) return 0.0;
      if (i + 1 < k) {
        const double z = std_normal_quantile(w[static_cast<std::size_t>(i)] * e);
        const Eigen::Index rest = k - i - 1;
        acc_.tail(rest).noalias() += z * cond_.lower.col(i).tail(rest);
      }
    }
    return f;
  }

 private:
  const Conditioning& cond_;
  Eigen::VectorXd acc_;
};

}  // namespace

PsdFactor factor_psd(const Eigen::MatrixXd& matrix, const JitterPolicy& policy) {
  if (matrix.rows() != matrix.cols()) throw DomainError("factor_psd: matrix must be square");
  const Eigen::Index k = matrix.rows();
  const double scale = k > 0 ? std::max(matrix.diagonal().cwiseAbs().maxCoeff(), 1e-300) : 1.0;
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd work = matrix;
    work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success && (llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all())
      return {llt.matrixL().toDenseMatrix(), jitter};
    jitter = jitter == 0.0 ? policy.initial * scale : jitter * policy.growth;
    if (jitter > policy.max * scale * (1.0 + 1e-12))
      throw NumericalError("factor_psd", "matrix is not positive semidefinite within the jitter cap");
  }
}

MvnResult mvn_lower_orthant(const Eigen::MatrixXd& cov, const Eigen::VectorXd& upper, RngStream& rng,
                            const MvnOptions& options) {
  const Eigen::Index k = cov.rows();
  if (cov.cols() != k || upper.size() != k) throw DomainError("mvn: dimension mismatch");
  if (k == 0) throw DomainError("mvn: empty covariance");
  if (static_cast<std::size_t>(k) > kMaxDimension) throw DomainError("mvn: dimension above 1000");
  if (!(options.abs_tolerance > 0.0)) throw DomainError("mvn: tolerance must be positive");
  if (options.shifts < 2) throw DomainError("mvn: need at least two random shifts");
  if ((cov.diagonal().array() < 0.0).any()) throw NumericalError("mvn", "negative variance");

  MvnResult result;
  if ((upper.array() == -std::numeric_limits<double>::infinity()).any()) return result;

  const Conditioning cond = condition(cov, upper);
  if (k == 1) {
    const double limit = cond.upper[0];
    result.probability = cond.degenerate[0] ? (limit >= 0.0 ? 1.0 : 0.0) : std_normal_cdf(limit / cond.lower(0, 0));
    result.evaluations = 1;
    return result;
  }

  const std::size_t dims = static_cast<std::size_t>(k) - 1;
  const std::vector<double> gen = richtmyer_generators(dims);
  OrthantIntegrand integrand(cond);
  std::vector<double> shift(dims);
  std::vector<double> w(dims);
  std::vector<double> w_anti(dims);

  double weighted_sum = 0.0;
  double weight_total = 0.0;
  std::size_t points = options.initial_points;
  for (;;) {
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t s = 0; s < options.shifts; ++s) {
      for (double& v : shift) v = rng.uniform();
      double sum = 0.0;
      for (std::size_t j = 1; j <= points; ++j) {
        for (std::size_t d = 0; d < dims; ++d) {
          double x = static_cast<double>(j) * gen[d] + shift[d];
          x -= std::floor(x);
          w[d] = std::fabs(2.0 * x - 1.0);
          w_anti[d] = 1.0 - w[d];
        }
        sum += 0.5 * (integrand(w) + integrand(w_anti));
      }
      const double est = sum / static_cast<double>(points);
      // Welford update over shifts.
      const double delta = est - mean;
      mean += delta / static_cast<double>(s + 1);
      m2 += delta * (est - mean);
      result.evaluations += 2 * points;
    }
    const double var_mean = m2 / static_cast<double>(options.shifts - 1) / static_cast<double>(options.shifts);
    if (var_mean <= 0.0) {
      // Constant integrand (e.g. independent components): the estimate is exact.
      weighted_sum = mean;
      weight_total = 1.0;
      result.error = 0.0;
      break;
    }
    weighted_sum += mean / var_mean;
    weight_total += 1.0 / var_mean;
    result.error = kMvnErrorZ / std::sqrt(weight_total);
    if (result.error <= options.abs_tolerance) break;
    if (result.evaluations + 4 * points * options.shifts > options.max_evaluations) {
      result.budget_exhausted = true;
      break;
    }
    points *= 2;
  }
  result.probability = std::clamp(weighted_sum / weight_total, 0.0, 1.0);
  return result;
}

MvnResult mvn_upper_tail_sup(const Eigen::MatrixXd& cov, double delta, RngStream& rng, const MvnOptions& options) {
  if (std::isnan(delta)) throw DomainError("mvn: delta is NaN");
  MvnResult below = mvn_lower_orthant(cov, Eigen::VectorXd::Constant(cov.rows(), delta), rng, options);
  below.probability = std::clamp(1.0 - below.probability, 0.0, 1.0);
  return below;
}

McResult mc_sup_prob(const Eigen::MatrixXd& cov, double delta, std::size_t paths, RngStream& rng) {
  if (paths < 100) throw DomainError("mc_sup_prob: need at least 100 paths");
  const PsdFactor factor = factor_psd(cov);
  const Eigen::Index k = cov.rows();
  Eigen::VectorXd z(k);
  std::size_t hits = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    for (Eigen::Index i = 0; i < k; ++i) z(i) = rng.normal();
    const Eigen::VectorXd x = factor.lower.triangularView<Eigen::Lower>() * z;
    if (x.maxCoeff() > delta) ++hits;
  }
  McResult out;
  out.paths = paths;
  out.probability = static_cast<double>(hits) / static_cast<double>(paths);
  out.std_error = std::sqrt(out.probability * (1.0 - out.probability) / static_cast<double>(paths));
  return out;
}

}  // namespace survdom
