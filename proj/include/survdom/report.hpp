#pragma once

#include <json.hpp>
#include <string>

#include "survdom/classical.hpp"
#include "survdom/dominance.hpp"
#include "survdom/simulation.hpp"

namespace survdom {

std::string to_string(Denominator d);
Denominator parse_denominator(std::string_view name);
std::string to_string(SupWindow w);
SupWindow parse_window(std::string_view name);

/// Every configuration field needed to rerun the analysis bit-for-bit.
nlohmann::ordered_json config_json(const DominanceConfig& config);

nlohmann::ordered_json to_json(const DominanceResult& result);
nlohmann::ordered_json to_json(const WLRResult& result);
nlohmann::ordered_json to_json(const RejectionTable& table);

}  // namespace survdom
