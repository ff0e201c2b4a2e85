#include "nrisk/ingest.hpp"

#include <json.hpp>

#include "nrisk/error.hpp"
#include "nrisk/text.hpp"

namespace nrisk {

namespace {

std::string profile_header(const DensityProfile& p) {
    std::string s = "# site=" + p.site + " month=" + p.month;
    if (p.members > 1) s += " members=" + std::to_string(p.members);
    return s;
}

void parse_metadata(std::string_view body, DensityProfile& p, std::size_t lineno) {
    std::size_t pos = 0;
    while (pos < body.size()) {
        while (pos < body.size() && body[pos] == ' ') ++pos;
        std::size_t end = body.find(' ', pos);
        if (end == std::string_view::npos) end = body.size();
        const std::string_view tok = body.substr(pos, end - pos);
        pos = end;
        const std::size_t eq = tok.find('=');
        if (eq == std::string_view::npos) continue;  // free-text comment word
        const std::string_view key = tok.substr(0, eq);
        const std::string_view value = tok.substr(eq + 1);
        if (key == "site") {
            p.site = std::string(value);
        } else if (key == "month") {
            p.month = std::string(value);
        } else if (key == "members") {
            auto n = text::parse_int(value);
            if (!n || *n < 1) throw ParseError(lineno, "members", "must be a positive integer");
            p.members = static_cast<int>(*n);
        }
    }
}

}  // namespace

DensityProfile parse_profile(std::string_view document) {
    DensityProfile p;
    std::size_t lineno = 0;
    for (std::string_view raw : text::lines(document)) {
        ++lineno;
        const auto line = text::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            parse_metadata(text::trim(line.substr(1)), p, lineno);
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
            throw ParseError(lineno, "", "expected 'altitude_m,density_g_cm3'");
        auto h = text::parse_double(line.substr(0, comma));
        auto rho = text::parse_double(line.substr(comma + 1));
        if (!h) throw ParseError(lineno, "altitude_m", "not a number");
        if (!rho) throw ParseError(lineno, "density_g_cm3", "not a number");
        if (!(*rho > 0)) throw ParseError(lineno, "density_g_cm3", "non-positive density");
        if (!p.samples.empty() && !(*h > p.samples.back().altitude_m))
            throw ParseError(lineno, "altitude_m", "altitudes must be strictly ascending");
        if (!p.samples.empty() && *h > 100.0 &&
            *rho > p.samples.back().density_g_cm3 * (1.0 + kProfileMonotoneTolerance))
            throw ParseError(lineno, "density_g_cm3", "density increases with altitude");
        p.samples.push_back({*h, *rho});
    }
    try {
        validate_profile(p);
    } catch (const ValidationError& e) {
        throw ParseError(std::max<std::size_t>(lineno, 1), "", e.what());
    }
    return p;
}

std::string serialize_profile(const DensityProfile& p) {
    std::string out = profile_header(p) + '\n';
    for (const auto& s : p.samples) out += text::shortest(s.altitude_m) + ',' + text::shortest(s.density_g_cm3) + '\n';
    return out;
}

std::string_view pressure_kind_name(PressureKind k) noexcept {
    return k == PressureKind::Station ? "station" : "mean_sea_level";
}

std::optional<PressureKind> parse_pressure_kind(std::string_view s) {
    s = text::trim(s);
    if (s == "station") return PressureKind::Station;
    if (s == "mean_sea_level" || s == "msl") return PressureKind::MeanSeaLevel;
    return std::nullopt;
}

namespace {

void check_sample(const PressureSample& s, const std::vector<PressureSample>& prior, std::size_t lineno) {
    if (!(s.pressure_hpa > 300.0 && s.pressure_hpa < 1100.0))
        throw ParseError(lineno, "pressure_hpa", "pressure out of range (300, 1100) hPa");
    if (!prior.empty() && s.timestamp <= prior.back().timestamp)
        throw ParseError(lineno, "time",
                         s.timestamp == prior.back().timestamp ? "duplicate timestamp"
                                                               : "timestamps must be strictly increasing");
}

PressureSample parse_json_sample(std::string_view line, std::size_t lineno) {
    const auto j = nlohmann::json::parse(std::string(line), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError(lineno, "", "malformed JSON object");
    PressureSample s;
    const auto t = j.find("time");
    if (t == j.end() || !t->is_string()) throw ParseError(lineno, "time", "missing or not a string");
    auto ts = text::parse_iso8601(t->get<std::string>());
    if (!ts) throw ParseError(lineno, "time", "not an ISO-8601 UTC timestamp");
    s.timestamp = *ts;
    const auto p = j.find("pressure_hpa");
    if (p == j.end() || !p->is_number()) throw ParseError(lineno, "pressure_hpa", "missing or not a number");
    s.pressure_hpa = p->get<double>();
    const auto k = j.find("kind");
    if (k == j.end() || !k->is_string()) throw ParseError(lineno, "kind", "missing or not a string");
    auto kind = parse_pressure_kind(k->get<std::string>());
    if (!kind) throw ParseError(lineno, "kind", "expected 'station' or 'mean_sea_level'");
    s.kind = *kind;
    const auto src = j.find("source");
    if (src != j.end()) {
        if (!src->is_string()) throw ParseError(lineno, "source", "not a string");
        s.source = src->get<std::string>();
    }
    return s;
}

PressureSample parse_csv_sample(std::string_view line, std::size_t lineno) {
    auto f = text::split_csv(line);
    if (!f) throw ParseError(lineno, "", "unterminated quoted field");
    if (f->size() != 4) throw ParseError(lineno, "", "expected 'iso8601_utc,pressure_hpa,kind,source'");
    PressureSample s;
    auto ts = text::parse_iso8601((*f)[0]);
    if (!ts) throw ParseError(lineno, "time", "not an ISO-8601 UTC timestamp");
    s.timestamp = *ts;
    auto p = text::parse_double((*f)[1]);
    if (!p) throw ParseError(lineno, "pressure_hpa", "not a number");
    s.pressure_hpa = *p;
    auto kind = parse_pressure_kind((*f)[2]);
    if (!kind) throw ParseError(lineno, "kind", "expected 'station' or 'mean_sea_level'");
    s.kind = *kind;
    s.source = (*f)[3];
    return s;
}

}  // namespace

std::vector<PressureSample> parse_pressure_series(std::string_view document) {
    std::vector<PressureSample> out;
    std::optional<SeriesFormat> format;
    std::size_t lineno = 0;
    for (std::string_view raw : text::lines(document)) {
        ++lineno;
        const auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (!format) format = line.front() == '{' ? SeriesFormat::JsonLines : SeriesFormat::Csv;
        PressureSample s = *format == SeriesFormat::JsonLines ? parse_json_sample(line, lineno)
                                                              : parse_csv_sample(line, lineno);
        check_sample(s, out, lineno);
        out.push_back(std::move(s));
    }
    return out;
}

std::string serialize_pressure_series(const std::vector<PressureSample>& samples, SeriesFormat format) {
    std::string out;
    for (const auto& s : samples) {
        if (format == SeriesFormat::Csv) {
            out += text::format_iso8601(s.timestamp) + ',' + text::shortest(s.pressure_hpa) + ',' +
                   std::string(pressure_kind_name(s.kind)) + ',' + text::csv_field(s.source) + '\n';
        } else {
            nlohmann::ordered_json j;
            j["time"] = text::format_iso8601(s.timestamp);
            j["pressure_hpa"] = s.pressure_hpa;
            j["kind"] = pressure_kind_name(s.kind);
            j["source"] = s.source;
            out += j.dump() + '\n';
        }
    }
    return out;
}

namespace {

double surface_ratio(double altitude_m, const LinsleyAtmosphere& atm) {
    if (!(altitude_m >= 0.0 && altitude_m < atm.top_m()))
        throw DomainError("site altitude outside the atmosphere model range");
    return atm.pressure_at(altitude_m) / atm.pressure_at(0.0);
}

}  // namespace

double msl_to_station_pressure(double msl_hpa, double site_altitude_m, const LinsleyAtmosphere& atm) {
    if (!(msl_hpa > 900.0 && msl_hpa < 1100.0))
        throw DomainError("sea-level pressure out of range: " + text::shortest(msl_hpa) + " hPa not in (900, 1100)");
    if (site_altitude_m == 0.0) return msl_hpa;
    return msl_hpa * surface_ratio(site_altitude_m, atm);
}

double station_to_msl_pressure(double station_hpa, double site_altitude_m, const LinsleyAtmosphere& atm) {
    if (!(station_hpa > 0.0)) throw DomainError("station pressure must be positive");
    if (site_altitude_m == 0.0) return station_hpa;
    return station_hpa / surface_ratio(site_altitude_m, atm);
}

}  // namespace nrisk
