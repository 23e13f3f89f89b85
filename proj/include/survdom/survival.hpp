#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace survdom {

enum class Status { Event, Censored };

struct Observation {
  double time;
  Status status;
};

/// A right-censored sample, kept sorted by time with events ahead of
/// censorings at tied times. Times must be finite and strictly positive.
class SurvivalSample {
 public:
  SurvivalSample(std::vector<Observation> observations, std::string label = {});

  /// Convenience constructor from parallel arrays; `events[i] != 0` marks an event.
  static SurvivalSample from_arrays(std::span<const double> times, std::span<const int> events,
                                    std::string label = {});

  std::span<const Observation> observations() const noexcept { return observations_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return observations_.size(); }
  std::size_t event_count() const noexcept { return event_count_; }
  double max_time() const noexcept { return observations_.back().time; }
  /// Smallest event time; +inf when every observation is censored.
  double first_event_time() const noexcept;

  /// Same observations with each time multiplied by `factor` (> 0).
  SurvivalSample scaled(double factor) const;

 private:
  std::vector<Observation> observations_;
  std::string label_;
  std::size_t event_count_ = 0;
};

struct RiskRow {
  double time;          // distinct event time t_j
  std::size_t at_risk;  // n_j = #{X >= t_j}
  std::size_t events;   // d_j
  std::size_t censored; // censorings in [t_{j-1}, t_j)
};

struct RiskTable {
  std::vector<RiskRow> rows;
  std::size_t sample_size = 0;
  /// Subjects still at risk after the last event time (n_k - d_k, or n if no events).
  std::size_t remaining() const noexcept;
};

RiskTable risk_table(const SurvivalSample& sample);

/// Right-continuous non-increasing step function on [0, inf), equal to 1 on
/// [0, first jump). Only post-jump values are stored.
class StepCurve {
 public:
  StepCurve() = default;
  StepCurve(std::vector<double> jump_times, std::vector<double> values);

  std::span<const double> jump_times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t jump_count() const noexcept { return times_.size(); }

  double eval(double t) const;
  double left_limit(double t) const;
  double operator()(double t) const { return eval(t); }

  /// Mass removed at each jump, S(t_j-) - S(t_j).
  std::vector<double> jump_masses() const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

StepCurve km_fit(const SurvivalSample& sample);

/// Reverse Kaplan-Meier estimate of the censoring survival H_C: censorings
/// play the role of events, and events at a tied time stay in the risk set.
StepCurve censoring_km(const SurvivalSample& sample);

/// #{X_i > t} / n, ignoring status.
StepCurve empirical_observed_survival(const SurvivalSample& sample);

}  // namespace survdom
