#pragma once

#include <array>
#include <string_view>

#include "survdom/survival.hpp"

namespace survdom {

enum class WlrVariant { LogRank, Gehan, TaroneWare, PetoPeto, ModifiedPetoPeto };

inline constexpr std::array<WlrVariant, 5> kAllWlrVariants{WlrVariant::LogRank, WlrVariant::Gehan,
                                                           WlrVariant::TaroneWare, WlrVariant::PetoPeto,
                                                           WlrVariant::ModifiedPetoPeto};

std::string_view to_string(WlrVariant v);
/// Accepts the names produced by to_string plus short aliases
/// (logrank, gehan, tarone-ware, peto-peto, modified-peto-peto).
WlrVariant parse_wlr_variant(std::string_view name);

struct WLRResult {
  WlrVariant variant = WlrVariant::LogRank;
  double score = 0.0;     ///< sum_j w_j (d_1j - E_1j), group 1 = first sample
  double variance = 0.0;  ///< sum_j w_j^2 V_j, hypergeometric V_j
  double statistic = 0.0; ///< score^2 / variance, chi-square with 1 df
  double p = 1.0;
  double observed = 0.0;  ///< sum d_1j
  double expected = 0.0;  ///< sum E_1j
};

/// Two-sample weighted log-rank test. Weights at pooled event time t_j:
/// 1, n_j, sqrt(n_j), S~(t_j), S~(t_j) n_j / (n_j + 1), with
/// S~(t) = prod_{t_i <= t} (1 - d_i / (n_i + 1)).
WLRResult weighted_logrank(const SurvivalSample& sample_1, const SurvivalSample& sample_2, WlrVariant variant);

}  // namespace survdom
