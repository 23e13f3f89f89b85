#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "survdom/dominance.hpp"
#include "survdom/numerics.hpp"
#include "survdom/survival.hpp"

namespace survdom {

/// Gamma lifetime law, (shape, scale) parameterization.
struct GammaDist {
  double shape = 1.0;
  double scale = 1.0;
};

/// Censoring calibration: exponential rate -log(0.9)/q20 or log(2)/q50.
enum class CensorTarget { P20, P50 };

std::string_view to_string(CensorTarget target);
CensorTarget parse_censor_target(std::string_view name);

struct Scenario {
  std::string label;
  GammaDist dist_t;
  GammaDist dist_u;
  CensorTarget censor = CensorTarget::P20;
  std::size_t n = 100;  ///< per-group sample size
};

/// Standard scenarios 1-4: (2,1)/(3,1), (2,1)/(2.2,1), (3,5)/(6,2), (2,2)/(3,1).
Scenario reference_case(int case_number, CensorTarget censor, std::size_t n);

double censoring_rate_param(const GammaDist& dist, CensorTarget target);

struct ReplicationSamples {
  SurvivalSample t;
  SurvivalSample u;
  double censored_fraction = 0.0;  ///< realized, both groups pooled
};

/// n lifetimes per group, each censored by an independent exponential whose
/// rate is calibrated on that group's own gamma law.
ReplicationSamples draw_replication(const Scenario& scenario, RngStream& rng);

DominanceResult run_replication(const Scenario& scenario, const DominanceConfig& config, RngStream& rng);

struct RejectionRow {
  Scenario scenario;
  std::vector<double> rates;  ///< one per alpha
  std::size_t completed = 0;
  std::size_t failed = 0;
  double censored_fraction = 0.0;  ///< mean realized censoring fraction
  double mean_p_upper = 0.0;
};

struct RejectionTable {
  std::vector<double> alphas;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::vector<RejectionRow> rows;
};

/// Per-replication streams are keyed by (base_seed, cell, replication), so the
/// table is identical for any thread count. Throws NumericalError if more than
/// 1% of the replications of a cell fail.
RejectionTable rejection_table(std::span<const Scenario> scenarios, std::size_t replications,
                               std::uint64_t base_seed, std::span<const double> alphas,
                               const DominanceConfig& config = {}, unsigned threads = 0);

/// Raw per-replication p-value bounds for one cell (NaN marks a failed replication).
std::vector<double> replicate_p_values(const Scenario& scenario, std::size_t replications, std::uint64_t base_seed,
                                       std::uint64_t cell, const DominanceConfig& config = {},
                                       unsigned threads = 0, std::vector<double>* censored_fractions = nullptr);

}  // namespace survdom
