#include "survdom/density.hpp"

#include <algorithm>
#include <cmath>

#include "survdom/errors.hpp"
#include "survdom/numerics.hpp"

namespace survdom {

namespace {

// Beyond 8.5 bandwidths a Gaussian kernel contributes < 1e-16 relative.
constexpr double kKernelCutoff = 8.5;

}  // namespace

double default_bandwidth(const SurvivalSample& sample) {
  const StepCurve km = km_fit(sample);
  if (km.jump_count() < 2) throw DataError("bandwidth needs at least two distinct event times");
  const auto times = km.jump_times();
  const auto mass = km.jump_masses();
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    total += mass[i];
    mean += mass[i] * times[i];
  }
  mean /= total;
  double var = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) var += mass[i] * (times[i] - mean) * (times[i] - mean);
  var /= total;
  const double sd = std::sqrt(var);
  if (!(sd > 0.0)) throw DataError("bandwidth: weighted spread of event times is zero");
  return 1.06 * sd * std::pow(static_cast<double>(sample.event_count()), -0.2);
}

KmKernelDensity::KmKernelDensity(const SurvivalSample& sample, double bandwidth) : bandwidth_(bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw DomainError("kernel density: bandwidth must be positive");
  const StepCurve km = km_fit(sample);
  if (km.jump_count() == 0) throw DataError("kernel density: sample has no events");
  centers_.assign(km.jump_times().begin(), km.jump_times().end());
  weights_ = km.jump_masses();
  for (double w : weights_) total_mass_ += w;
}

double KmKernelDensity::operator()(double t) const {
  const double reach = kKernelCutoff * bandwidth_;
  auto first = std::lower_bound(centers_.begin(), centers_.end(), t - reach);
  auto last = std::upper_bound(first, centers_.end(), t + reach);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) {
    const std::size_t j = static_cast<std::size_t>(it - centers_.begin());
    sum += weights_[j] * std_normal_pdf((t - *it) / bandwidth_);
  }
  return sum / bandwidth_;
}

DensityEstimate KmKernelDensity::evaluate(std::span<const double> grid) const {
  if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("kernel density: grid must be ascending");
  DensityEstimate out;
  out.grid.assign(grid.begin(), grid.end());
  out.values.reserve(grid.size());
  for (double t : grid) out.values.push_back((*this)(t));
  out.bandwidth = bandwidth_;
  return out;
}

DensityEstimate km_kernel_density(const SurvivalSample& sample, double bandwidth, std::span<const double> grid) {
  return KmKernelDensity(sample, bandwidth).evaluate(grid);
}

}  // namespace survdom
