#include "survdom/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "survdom/errors.hpp"
#include "survdom/numerics.hpp"

namespace survdom {

std::string_view to_string(WlrVariant v) {
  switch (v) {
    case WlrVariant::LogRank: return "log-rank";
    case WlrVariant::Gehan: return "gehan";
    case WlrVariant::TaroneWare: return "tarone-ware";
    case WlrVariant::PetoPeto: return "peto-peto";
    case WlrVariant::ModifiedPetoPeto: return "modified-peto-peto";
  }
  return "unknown";
}

WlrVariant parse_wlr_variant(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::erase(s, '_');
  std::erase(s, '-');
  if (s == "logrank") return WlrVariant::LogRank;
  if (s == "gehan" || s == "wilcoxon" || s == "gehanwilcoxon") return WlrVariant::Gehan;
  if (s == "taroneware") return WlrVariant::TaroneWare;
  if (s == "petopeto" || s == "peto") return WlrVariant::PetoPeto;
  if (s == "modifiedpetopeto" || s == "modifiedpeto") return WlrVariant::ModifiedPetoPeto;
  throw DomainError("unknown weighted log-rank variant '" + std::string(name) + "'");
}

WLRResult weighted_logrank(const SurvivalSample& sample_1, const SurvivalSample& sample_2, WlrVariant variant) {
  struct Tagged {
    double time;
    bool event;
    bool first;
  };
  std::vector<Tagged> pooled;
  pooled.reserve(sample_1.size() + sample_2.size());
  for (const auto& o : sample_1.observations()) pooled.push_back({o.time, o.status == Status::Event, true});
  for (const auto& o : sample_2.observations()) pooled.push_back({o.time, o.status == Status::Event, false});
  std::stable_sort(pooled.begin(), pooled.end(), [](const Tagged& a, const Tagged& b) { return a.time < b.time; });

  WLRResult res;
  res.variant = variant;
  double at_risk = static_cast<double>(pooled.size());
  double at_risk_1 = static_cast<double>(sample_1.size());
  double peto_surv = 1.0;
  bool any_event = false;

  std::size_t i = 0;
  while (i < pooled.size()) {
    const double t = pooled[i].time;
    double d = 0.0;
    double d1 = 0.0;
    double leaving = 0.0;
    double leaving_1 = 0.0;
    std::size_t j = i;
    for (; j < pooled.size() && pooled[j].time == t; ++j) {
      leaving += 1.0;
      if (pooled[j].first) leaving_1 += 1.0;
      if (pooled[j].event) {
        d += 1.0;
        if (pooled[j].first) d1 += 1.0;
      }
    }
    if (d > 0.0) {
      any_event = true;
      const double n = at_risk;
      peto_surv *= 1.0 - d / (n + 1.0);
      double w = 1.0;
      switch (variant) {
        case WlrVariant::LogRank: w = 1.0; break;
        case WlrVariant::Gehan: w = n; break;
        case WlrVariant::TaroneWare: w = std::sqrt(n); break;
        case WlrVariant::PetoPeto: w = peto_surv; break;
        case WlrVariant::ModifiedPetoPeto: w = peto_surv * n / (n + 1.0); break;
      }
      const double frac = at_risk_1 / n;
      const double expected = d * frac;
      res.score += w * (d1 - expected);
      res.observed += d1;
      res.expected += expected;
      if (n > 1.0) res.variance += w * w * d * frac * (1.0 - frac) * (n - d) / (n - 1.0);
    }
    at_risk -= leaving;
    at_risk_1 -= leaving_1;
    i = j;
  }
  if (!any_event) throw DataError("weighted log-rank: no events in either sample");
  if (!(res.variance > 0.0)) throw NumericalError("weighted_logrank", "zero variance");
  res.statistic = res.score * res.score / res.variance;
  res.p = chi_square_sf(res.statistic, 1);
  return res;
}

}  // namespace survdom
