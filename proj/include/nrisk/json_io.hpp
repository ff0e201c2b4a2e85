#pragma once

// JSON views shared by the CLI (--format json) and the HTTP service, so both
// surfaces emit the same field names and full-precision numbers.

#include <json.hpp>

#include "nrisk/barometric.hpp"
#include "nrisk/forecast_log.hpp"
#include "nrisk/reliability.hpp"
#include "nrisk/site_catalog.hpp"

namespace nrisk {

nlohmann::ordered_json to_json(const SiteRecord& s);
nlohmann::ordered_json to_json(const FluxPrediction& p);
nlohmann::ordered_json to_json(const RiskReport& r);
nlohmann::ordered_json to_json(const ForecastRecord& r);
nlohmann::ordered_json to_json(const Finding& f);

}  // namespace nrisk
