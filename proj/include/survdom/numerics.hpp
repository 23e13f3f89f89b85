#pragma once

#include <cstdint>
#include <random>

namespace survdom {

double std_normal_pdf(double x);

/// Standard normal CDF, via the complementary error function so that both
/// tails keep full relative precision.
double std_normal_cdf(double x);

/// Inverse of the standard normal CDF (Wichura's AS241, ~1e-16 relative).
/// Returns -inf / +inf at p = 0 / 1.
double std_normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x). Throws DomainError on a <= 0
/// or x < 0.
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly so small tail values do not cancel.
double reg_upper_gamma(double a, double x);

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi_square_sf(double x, int df);

/// Quantile of Gamma(shape, scale) at probability p in (0, 1).
double gamma_quantile(double shape, double scale, double p);

/// Reproducible random stream keyed by (seed, stream id).
///
/// Uses mt19937_64 seeded through std::seed_seq, both of which the standard
/// fully specifies, and derives uniforms and normals without the
/// implementation-defined std distributions. Same key, same sequence on every
/// platform. Not shareable between threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Gamma(shape, scale) draw: Marsaglia-Tsang squeeze for shape >= 1, boosted
/// by U^(1/shape) for shape < 1.
double sample_gamma(double shape, double scale, RngStream& rng);

/// Exponential draw by inverse transform, -log(1 - u) / rate.
double sample_exponential(double rate, RngStream& rng);

}  // namespace survdom
