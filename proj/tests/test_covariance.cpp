#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "survdom/covariance.hpp"
#include "survdom/errors.hpp"
#include "survdom/numerics.hpp"

using namespace survdom;

namespace {

SurvivalSample gamma_sample(double shape, int n, double censor_rate, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<Observation> obs;
  for (int i = 0; i < n; ++i) {
    const double x = sample_gamma(shape, 1.0, rng);
    const double c = censor_rate > 0 ? sample_exponential(censor_rate, rng) : INFINITY;
    obs.push_back({std::min(x, c), x <= c ? Status::Event : Status::Censored});
  }
  return SurvivalSample(obs);
}

// Gamma(2,1) survival.
double s_gamma2(double t) { return std::exp(-t) * (1 + t); }

SampleCovariance synthetic(const std::vector<double>& points, const Eigen::MatrixXd& m) {
  SampleCovariance c;
  c.grid.tau = points.back();
  c.grid.points = points;
  c.matrix = m;
  return c;
}

}  // namespace

TEST_CASE("grid construction") {
  const auto g = build_grid(10.0, 4);
  CHECK(g.tau == 10.0);
  CHECK(g.points == std::vector<double>{2.5, 5.0, 7.5, 10.0});
  CHECK_THROWS_AS(build_grid(10.0, 1), DomainError);
  CHECK_THROWS_AS(build_grid(0.0, 5), DomainError);
  CHECK_THROWS_AS(build_grid(INFINITY, 5), DomainError);

  const auto a = SurvivalSample({{1, Status::Event}, {7, Status::Censored}});
  const auto b = SurvivalSample({{2, Status::Event}, {5, Status::Event}});
  CHECK(compute_tau(a, b) == 5.0);
}

TEST_CASE("variance integral recovers 1/S - 1 without censoring") {
  const auto s = gamma_sample(2.0, 2000, 0.0, 101);
  const auto km = km_fit(s);
  const KmKernelDensity f(s, default_bandwidth(s));
  const auto grid = build_grid(3.0, 30);
  for (auto denom : {Denominator::Empirical, Denominator::ReverseKm}) {
    IntegralOptions opt;
    opt.denominator = denom;
    const auto a = a_integral(s, grid, f, opt);
    REQUIRE(a.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i > 0) CHECK(a[i] >= a[i - 1]);
      const double t = grid.points[i];
      if (t < 0.5) continue;  // kernel boundary bias near the origin
      CHECK(a[i] == doctest::Approx(1.0 / km(t) - 1.0).epsilon(0.05));
    }
  }
}

TEST_CASE("single-sample covariance structure") {
  const auto s = gamma_sample(2.0, 2000, 0.0, 7);
  const KmKernelDensity f(s, default_bandwidth(s));
  const auto grid = build_grid(3.0, 20);
  const auto c = single_sample_cov(s, grid, f);
  const auto km = km_fit(s);
  REQUIRE(c.matrix.rows() == 20);
  CHECK((c.matrix - c.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  for (Eigen::Index i = 0; i < 20; ++i) {
    CHECK(c.survival[i] == km(grid.points[i]));
    for (Eigen::Index j = 0; j < 20; ++j) {
      const auto k = std::min(i, j);
      CHECK(c.matrix(i, j) == doctest::Approx(c.survival[i] * c.survival[j] * c.a_values[k]).epsilon(1e-14));
    }
    const double t = grid.points[i];
    if (t >= 0.6) CHECK(c.matrix(i, i) == doctest::Approx(s_gamma2(t) * (1 - s_gamma2(t))).epsilon(0.10));
  }
}

TEST_CASE("censoring inflates the variance") {
  const auto plain = gamma_sample(2.0, 3000, 0.0, 8);
  const auto cens = gamma_sample(2.0, 3000, 0.4, 8);
  const auto grid = build_grid(2.5, 10);
  const auto a0 = a_integral(plain, grid, KmKernelDensity(plain, default_bandwidth(plain)));
  const auto a1 = a_integral(cens, grid, KmKernelDensity(cens, default_bandwidth(cens)));
  for (std::size_t i = 3; i < grid.size(); ++i) CHECK(a1[i] > a0[i]);
}

TEST_CASE("a_integral option checks") {
  const auto s = gamma_sample(2.0, 50, 0.0, 1);
  const KmKernelDensity f(s, 0.3);
  const auto grid = build_grid(2.0, 5);
  IntegralOptions bad;
  bad.refine = 0;
  CHECK_THROWS_AS(a_integral(s, grid, f, bad), DomainError);
  bad = {};
  bad.denom_floor = 0.0;
  CHECK_THROWS_AS(a_integral(s, grid, f, bad), DomainError);
}

TEST_CASE("pooled covariance mixes, drops and repairs") {
  const std::vector<double> pts{1, 2, 3};
  Eigen::MatrixXd a(3, 3), b(3, 3);
  a << 0.2, 0.1, 0.05, 0.1, 0.3, 0.1, 0.05, 0.1, 0.4;
  b << 0.1, 0.02, 0.01, 0.02, 0.2, 0.05, 0.01, 0.05, 0.3;
  const auto ca = synthetic(pts, a), cb = synthetic(pts, b);

  SUBCASE("equal matrices are unchanged for any lambda") {
    for (double lam : {0.1, 0.5, 0.9}) {
      const auto m = pooled_cov(ca, ca, lam);
      CHECK((m.matrix - a).cwiseAbs().maxCoeff() < 1e-15);
      CHECK(m.diagnostics.jitter == 0.0);
      CHECK(m.lambda == lam);
    }
  }
  SUBCASE("weights go (1 - lambda) to T and lambda to U") {
    const auto m = pooled_cov(ca, cb, 0.25);
    CHECK((m.matrix - (0.75 * a + 0.25 * b)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(m.diagnostics.min_eigenvalue > 0.0);
    CHECK(m.kept == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("lambda near zero recovers the T covariance") {
    const auto m = pooled_cov(ca, cb, 1e-12);
    CHECK((m.matrix - a).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("points where both variances vanish are dropped") {
    Eigen::MatrixXd z = a;
    z.row(0).setZero();
    z.col(0).setZero();
    Eigen::MatrixXd w = b;
    w.row(0).setZero();
    w.col(0).setZero();
    const auto m = pooled_cov(synthetic(pts, z), synthetic(pts, w), 0.5);
    CHECK(m.kept == std::vector<std::size_t>{1, 2});
    CHECK(m.grid.points == std::vector<double>{2, 3});
    CHECK(m.diagnostics.dropped == std::vector<std::size_t>{0});
    CHECK(m.matrix.rows() == 2);
  }
  SUBCASE("rank-deficient input gets a small jitter") {
    Eigen::MatrixXd r(3, 3);
    r.setConstant(0.2);
    const auto m = pooled_cov(synthetic(pts, r), synthetic(pts, r), 0.5);
    CHECK(m.diagnostics.jitter <= 1e-6 * 0.2);
    CHECK(m.diagnostics.min_eigenvalue == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(pooled_cov(ca, cb, 0.0), DomainError);
    CHECK_THROWS_AS(pooled_cov(ca, cb, 1.0), DomainError);
    CHECK_THROWS_AS(pooled_cov(ca, synthetic({1, 2, 4}, b), 0.5), DomainError);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(pooled_cov(synthetic(pts, zero), synthetic(pts, zero), 0.5), NumericalError);
  }
}

TEST_CASE("common time scale leaves the covariance almost unchanged") {
  const auto s = gamma_sample(2.0, 400, 0.3, 55);
  const auto grid = build_grid(3.0, 15);
  const auto base = single_sample_cov(s, grid, KmKernelDensity(s, default_bandwidth(s)));
  const auto s5 = s.scaled(5.0);
  const auto scaled = single_sample_cov(s5, build_grid(15.0, 15), KmKernelDensity(s5, default_bandwidth(s5)));
  const double rel = (scaled.matrix - base.matrix).cwiseAbs().maxCoeff() / base.matrix.cwiseAbs().maxCoeff();
  CHECK(rel <= 0.01);
}
