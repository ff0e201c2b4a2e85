#include "nrisk/forecast_log.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nrisk/error.hpp"
#include "nrisk/reliability.hpp"
#include "nrisk/text.hpp"

namespace nrisk {

ForecastRecord evaluate_forecast(const SiteCatalog& catalog, std::string_view site_code, EnergyBand band,
                                 double pressure_hpa, double sigma_cm2, std::int64_t timestamp,
                                 std::string pressure_source) {
    const SiteRecord& site = catalog.get(site_code);
    ForecastRecord r;
    r.timestamp = timestamp;
    r.site_code = site.code;
    r.band = band;
    r.pressure_hpa = pressure_hpa;
    r.pressure_source = std::move(pressure_source);
    r.sigma_cm2 = sigma_cm2;
    r.flux = predict_flux(site, band, pressure_hpa).flux;
    r.fit = fit_rate(r.flux, sigma_cm2);
    r.mtbf_h = mtbf(r.fit);
    r.catalog_version = catalog.version();
    return r;
}

std::string forecast_to_json_line(const ForecastRecord& r) {
    nlohmann::ordered_json j;
    j["time"] = text::format_iso8601(r.timestamp);
    j["site"] = r.site_code;
    j["band"] = band_index(r.band);
    j["pressure_hpa"] = r.pressure_hpa;
    j["pressure_source"] = r.pressure_source;
    j["sigma_cm2"] = r.sigma_cm2;
    j["flux_m2h"] = r.flux;
    j["fit"] = r.fit;
    j["mtbf_h"] = r.mtbf_h;
    j["catalog_version"] = r.catalog_version;
    j["model_version"] = r.model_version;
    return j.dump();
}

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) throw ParseError(1, name, "missing");
    if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ParseError(1, name, "expected a string");
    } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ParseError(1, name, "expected an integer");
    } else {
        if (!it->is_number()) throw ParseError(1, name, "expected a number");
    }
    return it->get<T>();
}

}  // namespace

ForecastRecord forecast_from_json_line(std::string_view line) {
    const auto j = nlohmann::json::parse(std::string(line), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError(1, "", "malformed JSON object");
    ForecastRecord r;
    auto ts = text::parse_iso8601(field<std::string>(j, "time"));
    if (!ts) throw ParseError(1, "time", "not an ISO-8601 UTC timestamp");
    r.timestamp = *ts;
    r.site_code = field<std::string>(j, "site");
    const auto band = field<std::int64_t>(j, "band");
    if (band < 0 || band > 2) throw ParseError(1, "band", "expected 0, 1 or 2");
    r.band = static_cast<EnergyBand>(band);
    r.pressure_hpa = field<double>(j, "pressure_hpa");
    r.pressure_source = field<std::string>(j, "pressure_source");
    r.sigma_cm2 = field<double>(j, "sigma_cm2");
    r.flux = field<double>(j, "flux_m2h");
    r.fit = field<double>(j, "fit");
    r.mtbf_h = field<double>(j, "mtbf_h");
    r.catalog_version = field<std::string>(j, "catalog_version");
    r.model_version = field<std::string>(j, "model_version");
    return r;
}

ForecastLogContents parse_forecast_log(std::string_view document) {
    ForecastLogContents out;
    const bool terminated = document.empty() || document.back() == '\n';
    const auto lines = text::lines(document);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = text::trim(lines[i]);
        if (line.empty()) continue;
        const bool last_partial = !terminated && i + 1 == lines.size();
        try {
            out.records.push_back(forecast_from_json_line(line));
        } catch (const ParseError& e) {
            if (!last_partial) throw ParseError(i + 1, e.field(), e.what());
            out.warnings.push_back("line " + std::to_string(i + 1) + ": skipped truncated final record");
        }
    }
    return out;
}

ForecastLogContents read_forecast_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open forecast log " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_forecast_log(ss.str());
}

ForecastLog::ForecastLog(std::filesystem::path path) : path_(std::move(path)) {}

std::vector<std::string> ForecastLog::append(const ForecastRecord& record) {
    std::lock_guard lock(mutex_);
    std::vector<std::string> warnings;
    std::error_code ec;
    if (!tail_checked_ && std::filesystem::exists(path_, ec)) {
        // Drop an unterminated tail left by an interrupted append.
        std::ifstream in(path_, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        const std::string content = ss.str();
        if (!content.empty() && content.back() != '\n') {
            const std::size_t keep = content.rfind('\n') == std::string::npos ? 0 : content.rfind('\n') + 1;
            in.close();
            std::filesystem::resize_file(path_, keep, ec);
            if (ec) throw Error("cannot repair forecast log " + path_.string() + ": " + ec.message());
            warnings.push_back("removed truncated final record from " + path_.string());
        }
    }
    tail_checked_ = true;

    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot open forecast log " + path_.string() + " for append");
    const std::string line = forecast_to_json_line(record) + '\n';
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.flush();
    if (!out) throw Error("write to forecast log " + path_.string() + " failed");
    return warnings;
}

}  // namespace nrisk
