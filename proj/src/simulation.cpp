#include "survdom/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "survdom/errors.hpp"

namespace survdom {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<Observation> censored_draws(const GammaDist& dist, double rate, std::size_t n, RngStream& rng,
                                        std::size_t& censored) {
  std::vector<Observation> obs;
  obs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double life = sample_gamma(dist.shape, dist.scale, rng);
    const double cens = sample_exponential(rate, rng);
    if (life <= cens) {
      obs.push_back({life, Status::Event});
    } else {
      obs.push_back({cens, Status::Censored});
      ++censored;
    }
  }
  return obs;
}

}  // namespace

std::string_view to_string(CensorTarget target) { return target == CensorTarget::P20 ? "P20" : "P50"; }

CensorTarget parse_censor_target(std::string_view name) {
  if (name == "P20" || name == "p20" || name == "20") return CensorTarget::P20;
  if (name == "P50" || name == "p50" || name == "50") return CensorTarget::P50;
  throw DomainError("censor target must be P20 or P50, got '" + std::string(name) + "'");
}

Scenario reference_case(int case_number, CensorTarget censor, std::size_t n) {
  Scenario s;
  s.censor = censor;
  s.n = n;
  s.label = "Case" + std::to_string(case_number);
  switch (case_number) {
    case 1: s.dist_t = {2.0, 1.0}; s.dist_u = {3.0, 1.0}; break;
    case 2: s.dist_t = {2.0, 1.0}; s.dist_u = {2.2, 1.0}; break;
    case 3: s.dist_t = {3.0, 5.0}; s.dist_u = {6.0, 2.0}; break;
    case 4: s.dist_t = {2.0, 2.0}; s.dist_u = {3.0, 1.0}; break;
    default: throw DomainError("case number must be 1..4");
  }
  return s;
}

double censoring_rate_param(const GammaDist& dist, CensorTarget target) {
  if (target == CensorTarget::P20) return -std::log(0.9) / gamma_quantile(dist.shape, dist.scale, 0.2);
  return std::numbers::ln2 / gamma_quantile(dist.shape, dist.scale, 0.5);
}

ReplicationSamples draw_replication(const Scenario& scenario, RngStream& rng) {
  if (scenario.n < 2) throw DomainError("scenario: n must be at least 2");
  const double rate_t = censoring_rate_param(scenario.dist_t, scenario.censor);
  const double rate_u = censoring_rate_param(scenario.dist_u, scenario.censor);
  std::size_t censored = 0;
  auto obs_t = censored_draws(scenario.dist_t, rate_t, scenario.n, rng, censored);
  auto obs_u = censored_draws(scenario.dist_u, rate_u, scenario.n, rng, censored);
  return {SurvivalSample(std::move(obs_t), "T"), SurvivalSample(std::move(obs_u), "U"),
          static_cast<double>(censored) / static_cast<double>(2 * scenario.n)};
}

DominanceResult run_replication(const Scenario& scenario, const DominanceConfig& config, RngStream& rng) {
  const ReplicationSamples s = draw_replication(scenario, rng);
  return dominance_test(s.t, s.u, config);
}

std::vector<double> replicate_p_values(const Scenario& scenario, std::size_t replications, std::uint64_t base_seed,
                                       std::uint64_t cell, const DominanceConfig& config, unsigned threads,
                                       std::vector<double>* censored_fractions) {
  std::vector<double> p(replications, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> cens(replications, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < replications; r = next++) {
      const std::uint64_t stream = (cell << 32) | static_cast<std::uint64_t>(r);
      RngStream rng(base_seed, stream);
      DominanceConfig cfg = config;
      cfg.seed = splitmix64(base_seed ^ splitmix64(stream));
      try {
        const ReplicationSamples s = draw_replication(scenario, rng);
        cens[r] = s.censored_fraction;
        p[r] = dominance_test(s.t, s.u, cfg).p_upper;
      } catch (const std::exception&) {
        // NaN marks the failure; the caller decides whether the cell survives.
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(replications, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (censored_fractions) *censored_fractions = std::move(cens);
  return p;
}

RejectionTable rejection_table(std::span<const Scenario> scenarios, std::size_t replications,
                               std::uint64_t base_seed, std::span<const double> alphas,
                               const DominanceConfig& config, unsigned threads) {
  if (replications < 50) throw DomainError("rejection table: need at least 50 replications");
  RejectionTable table;
  table.alphas.assign(alphas.begin(), alphas.end());
  table.replications = replications;
  table.seed = base_seed;
  for (std::size_t cell = 0; cell < scenarios.size(); ++cell) {
    std::vector<double> cens;
    const std::vector<double> p =
        replicate_p_values(scenarios[cell], replications, base_seed, cell, config, threads, &cens);
    RejectionRow row;
    row.scenario = scenarios[cell];
    row.rates.assign(alphas.size(), 0.0);
    double cens_sum = 0.0;
    double p_sum = 0.0;
    for (std::size_t r = 0; r < p.size(); ++r) {
      if (std::isnan(p[r])) {
        ++row.failed;
        continue;
      }
      ++row.completed;
      cens_sum += cens[r];
      p_sum += p[r];
      for (std::size_t a = 0; a < alphas.size(); ++a)
        if (p[r] <= alphas[a]) row.rates[a] += 1.0;
    }
    if (static_cast<double>(row.failed) > 0.01 * static_cast<double>(replications))
      throw NumericalError("rejection_table", scenarios[cell].label + ": more than 1% of replications failed");
    for (double& rate : row.rates) rate /= static_cast<double>(row.completed);
    row.censored_fraction = cens_sum / static_cast<double>(row.completed);
    row.mean_p_upper = p_sum / static_cast<double>(row.completed);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace survdom
