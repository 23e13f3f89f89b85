#include "survdom/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "survdom/errors.hpp"

namespace survdom {

namespace {

// Product-limit over the times where `is_jump` holds. The risk set at t is
// #{X >= t}, which puts events ahead of censorings for km_fit and the
// reverse for censoring_km. Factors telescope between removals that are not
// jumps, so each stretch is evaluated as base * n_after / n_base; without
// such removals the result equals the exact count ratio.
template <class Pred>
StepCurve product_limit(const SurvivalSample& sample, Pred is_jump) {
  const auto obs = sample.observations();
  const std::size_t n = obs.size();
  std::vector<double> times;
  std::vector<double> values;
  double base = 1.0;
  std::size_t base_n = n;
  std::size_t at_risk = n;
  double surv = 1.0;
  std::size_t i = 0;
  while (i < n) {
    const double t = obs[i].time;
    std::size_t j = i;
    std::size_t d = 0;
    while (j < n && obs[j].time == t) {
      if (is_jump(obs[j])) ++d;
      ++j;
    }
    const std::size_t removed = j - i;
    if (d > 0) {
      surv = base * static_cast<double>(at_risk - d) / static_cast<double>(base_n);
      times.push_back(t);
      values.push_back(surv);
    }
    at_risk -= removed;
    if (removed > d) {
      base = surv;
      base_n = at_risk;
    }
    i = j;
  }
  return StepCurve(std::move(times), std::move(values));
}

}  // namespace

SurvivalSample::SurvivalSample(std::vector<Observation> observations, std::string label)
    : observations_(std::move(observations)), label_(std::move(label)) {
  if (observations_.empty()) throw DataError("sample '" + label_ + "' is empty");
  for (const auto& o : observations_) {
    if (!std::isfinite(o.time) || !(o.time > 0.0))
      throw DataError("sample '" + label_ + "': observation times must be finite and positive");
    if (o.status == Status::Event) ++event_count_;
  }
  std::stable_sort(observations_.begin(), observations_.end(), [](const Observation& a, const Observation& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.status == Status::Event && b.status == Status::Censored;
  });
}

SurvivalSample SurvivalSample::from_arrays(std::span<const double> times, std::span<const int> events,
                                           std::string label) {
  if (times.size() != events.size()) throw DataError("times and events differ in length");
  std::vector<Observation> obs;
  obs.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    obs.push_back({times[i], events[i] != 0 ? Status::Event : Status::Censored});
  return SurvivalSample(std::move(obs), std::move(label));
}

double SurvivalSample::first_event_time() const noexcept {
  for (const auto& o : observations_)
    if (o.status == Status::Event) return o.time;
  return std::numeric_limits<double>::infinity();
}

SurvivalSample SurvivalSample::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  std::vector<Observation> obs(observations_.begin(), observations_.end());
  for (auto& o : obs) o.time *= factor;
  return SurvivalSample(std::move(obs), label_);
}

std::size_t RiskTable::remaining() const noexcept {
  if (rows.empty()) return sample_size;
  return rows.back().at_risk - rows.back().events;
}

RiskTable risk_table(const SurvivalSample& sample) {
  const auto obs = sample.observations();
  const std::size_t n = obs.size();
  RiskTable table;
  table.sample_size = n;
  std::size_t censored_since = 0;
  std::size_t i = 0;
  while (i < n) {
    const double t = obs[i].time;
    std::size_t j = i;
    std::size_t d = 0;
    std::size_t c = 0;
    while (j < n && obs[j].time == t) {
      if (obs[j].status == Status::Event) ++d; else ++c;
      ++j;
    }
    if (d > 0) {
      table.rows.push_back({t, n - i, d, censored_since});
      censored_since = c;
    } else {
      censored_since += c;
    }
    i = j;
  }
  return table;
}

StepCurve::StepCurve(std::vector<double> jump_times, std::vector<double> values)
    : times_(std::move(jump_times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) throw DomainError("step curve: times and values differ in length");
  double prev_t = 0.0;
  double prev_v = 1.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] > prev_t)) throw DomainError("step curve: jump times must be positive and increasing");
    if (!(values_[i] >= 0.0 && values_[i] <= prev_v)) throw DomainError("step curve: values must be non-increasing in [0, 1]");
    prev_t = times_[i];
    prev_v = values_[i];
  }
}

double StepCurve::eval(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 1.0;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepCurve::left_limit(double t) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 1.0;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

std::vector<double> StepCurve::jump_masses() const {
  std::vector<double> out(values_.size());
  double prev = 1.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out[i] = prev - values_[i];
    prev = values_[i];
  }
  return out;
}

StepCurve km_fit(const SurvivalSample& sample) {
  return product_limit(sample, [](const Observation& o) { return o.status == Status::Event; });
}

StepCurve censoring_km(const SurvivalSample& sample) {
  return product_limit(sample, [](const Observation& o) { return o.status == Status::Censored; });
}

StepCurve empirical_observed_survival(const SurvivalSample& sample) {
  return product_limit(sample, [](const Observation&) { return true; });
}

}  // namespace survdom
