#pragma once

// Text formats for density profiles and surface-pressure series, plus the
// sea-level to station pressure bridge.
//
// Profile:   "# site=LANL month=2020-01" metadata, then "altitude_m,density_g_cm3" rows.
// Series:    "iso8601_utc,pressure_hpa,kind,source" rows, or one JSON object per line
//            with keys time, pressure_hpa, kind, source.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrisk/atmosphere.hpp"

namespace nrisk {

DensityProfile parse_profile(std::string_view document);
std::string serialize_profile(const DensityProfile& profile);

enum class PressureKind { Station, MeanSeaLevel };

std::string_view pressure_kind_name(PressureKind k) noexcept;
std::optional<PressureKind> parse_pressure_kind(std::string_view s);

struct PressureSample {
    std::int64_t timestamp = 0;  // UTC seconds
    double pressure_hpa = 0.0;
    PressureKind kind = PressureKind::Station;
    std::string source;

    bool operator==(const PressureSample&) const = default;
};

enum class SeriesFormat { Csv, JsonLines };

/// Accepts either form; the first data line decides. Throws ParseError with the line number.
std::vector<PressureSample> parse_pressure_series(std::string_view document);
std::string serialize_pressure_series(const std::vector<PressureSample>& samples,
                                      SeriesFormat format = SeriesFormat::Csv);

/// station = msl * P(h) / P(0) using the atmosphere as shape function.
double msl_to_station_pressure(double msl_hpa, double site_altitude_m, const LinsleyAtmosphere& atm);
double station_to_msl_pressure(double station_hpa, double site_altitude_m, const LinsleyAtmosphere& atm);

}  // namespace nrisk
