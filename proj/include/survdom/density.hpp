#pragma once

#include <span>
#include <vector>

#include "survdom/survival.hpp"

namespace survdom {

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> values;
  double bandwidth = 0.0;
};

/// Rule-of-thumb bandwidth h = 1.06 * sd_w * k^(-1/5), where sd_w is the
/// standard deviation of the event times weighted by their Kaplan-Meier jump
/// masses and k the number of events. Needs at least two distinct event times.
double default_bandwidth(const SurvivalSample& sample);

/// Gaussian kernel smoother of the Kaplan-Meier jumps,
/// f(t) = sum_j w_j K_h(t - t_j). Total mass equals the KM mass (< 1 when the
/// largest observation is censored).
class KmKernelDensity {
 public:
  KmKernelDensity(const SurvivalSample& sample, double bandwidth);

  double bandwidth() const noexcept { return bandwidth_; }
  double total_mass() const noexcept { return total_mass_; }
  std::span<const double> centers() const noexcept { return centers_; }
  std::span<const double> weights() const noexcept { return weights_; }

  double operator()(double t) const;
  DensityEstimate evaluate(std::span<const double> grid) const;

 private:
  std::vector<double> centers_;
  std::vector<double> weights_;
  double bandwidth_;
  double total_mass_ = 0.0;
};

DensityEstimate km_kernel_density(const SurvivalSample& sample, double bandwidth, std::span<const double> grid);

}  // namespace survdom
