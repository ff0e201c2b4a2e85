#pragma once

// Append-only forecast log: one JSON object per line. A partially written final
// line (crash mid-append) is skipped on read with a warning and cut off before
// the next append.

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "nrisk/site_catalog.hpp"

namespace nrisk {

inline constexpr std::string_view kModelVersion = "linear-barometric/1";

struct ForecastRecord {
    std::int64_t timestamp = 0;  // UTC seconds of the pressure observation
    std::string site_code;
    EnergyBand band = EnergyBand::Mid;
    double pressure_hpa = 0.0;  // station level
    std::string pressure_source;
    double sigma_cm2 = 0.0;
    double flux = 0.0;
    double fit = 0.0;
    double mtbf_h = 0.0;
    std::string catalog_version;
    std::string model_version{kModelVersion};

    bool operator==(const ForecastRecord&) const = default;
};

/// Computes flux, FIT and MTBF for the stored inputs. Replaying a logged record through
/// this function with the same catalog reproduces it bit for bit.
ForecastRecord evaluate_forecast(const SiteCatalog& catalog, std::string_view site_code, EnergyBand band,
                                 double pressure_hpa, double sigma_cm2, std::int64_t timestamp,
                                 std::string pressure_source = {});

std::string forecast_to_json_line(const ForecastRecord& r);
/// Throws ParseError(line 1, field) on a malformed object.
ForecastRecord forecast_from_json_line(std::string_view line);

struct ForecastLogContents {
    std::vector<ForecastRecord> records;
    std::vector<std::string> warnings;
};

/// Parses a whole log document. Only an unterminated final line is tolerated.
ForecastLogContents parse_forecast_log(std::string_view document);
ForecastLogContents read_forecast_log(const std::filesystem::path& path);

/// Single writer for one log file.
class ForecastLog {
public:
    explicit ForecastLog(std::filesystem::path path);

    /// Appends one line and flushes. Returns a warning if a partial tail had to be removed.
    std::vector<std::string> append(const ForecastRecord& record);

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::mutex mutex_;
    bool tail_checked_ = false;
};

}  // namespace nrisk
