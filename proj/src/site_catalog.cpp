#include "nrisk/site_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "nrisk/error.hpp"
#include "nrisk/text.hpp"

#ifndef NRISK_DATA_DIR
#define NRISK_DATA_DIR "data"
#endif

namespace nrisk {

const std::array<std::string_view, 19> kCatalogColumns = {
    "code",         "name",          "country",      "altitude_m",   "lat_deg",
    "lon_deg",      "flux_all_m2h",  "flux_all_err", "flux_n_m2h",   "flux_n_err",
    "flux_mu_m2h",  "flux_mu_err",   "p_ref_hpa",    "xi0_m2h",      "beta0_per_hpa",
    "xi1_m2h",      "beta1_per_hpa", "xi2_m2h",      "beta2_per_hpa"};

namespace {

// Leave-one-out residual allowed against the log-linear pressure/altitude fit.
constexpr double kPressureResidualTolerance = 25.0;  // hPa
constexpr double kAdditivityTolerance = 0.02;

}  // namespace

std::string_view band_name(EnergyBand b) noexcept {
    switch (b) {
        case EnergyBand::Full: return "full";
        case EnergyBand::Mid: return "mid";
        case EnergyBand::High: return "high";
    }
    return "?";
}

std::optional<EnergyBand> parse_band(std::string_view s) {
    const std::string u = text::to_upper(text::trim(s));
    if (u == "0" || u == "FULL") return EnergyBand::Full;
    if (u == "1" || u == "MID") return EnergyBand::Mid;
    if (u == "2" || u == "HIGH") return EnergyBand::High;
    return std::nullopt;
}

std::vector<SiteRecord> parse_catalog(std::string_view document) {
    std::vector<SiteRecord> sites;
    bool header_seen = false;
    std::size_t lineno = 0;
    for (std::string_view raw : text::lines(document)) {
        ++lineno;
        const std::string_view line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto fields = text::split_csv(line);
        if (!fields) throw ParseError(lineno, "", "unterminated quoted field");
        if (!header_seen) {
            if (fields->size() != kCatalogColumns.size() ||
                !std::equal(fields->begin(), fields->end(), kCatalogColumns.begin()))
                throw ParseError(lineno, "", "expected catalog header row");
            header_seen = true;
            continue;
        }
        if (fields->size() != kCatalogColumns.size())
            throw ParseError(lineno, "", "expected " + std::to_string(kCatalogColumns.size()) +
                                             " fields, found " + std::to_string(fields->size()));
        const auto& f = *fields;
        auto num = [&](std::size_t i) {
            auto v = text::parse_double(f[i]);
            if (!v) throw ParseError(lineno, std::string(kCatalogColumns[i]), "not a number: '" + f[i] + "'");
            return *v;
        };
        SiteRecord s;
        s.code = f[0];
        if (s.code.empty()) throw ParseError(lineno, "code", "empty site code");
        s.name = f[1];
        s.country = f[2];
        s.altitude_m = num(3);
        s.latitude_deg = num(4);
        s.longitude_deg = num(5);
        s.flux_all = {num(6), num(7)};
        s.flux_neutron = {num(8), num(9)};
        s.flux_muon = {num(10), num(11)};
        s.ref_pressure_hpa = num(12);
        for (std::size_t b = 0; b < 3; ++b)
            s.bands[b] = {static_cast<EnergyBand>(b), num(13 + 2 * b), num(14 + 2 * b)};
        sites.push_back(std::move(s));
    }
    if (sites.empty()) throw ValidationError("no sites");
    return sites;
}

namespace {

void check(std::vector<Finding>& out, bool ok, const SiteRecord& s, std::string field, double observed,
           std::string expected, std::string message) {
    if (ok) return;
    out.push_back({s.code, std::move(field), text::shortest(observed), std::move(expected), std::move(message)});
}

struct LogLinearFit {
    double intercept;
    double slope;
};

std::optional<LogLinearFit> fit_log_pressure(std::span<const SiteRecord> sites, std::size_t skip) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (i == skip || sites[i].ref_pressure_hpa <= 0) continue;
        const double x = sites[i].altitude_m;
        const double y = std::log(sites[i].ref_pressure_hpa);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (n < 3 || den <= 0) return std::nullopt;
    const double slope = (n * sxy - sx * sy) / den;
    return LogLinearFit{(sy - slope * sx) / n, slope};
}

}  // namespace

std::vector<Finding> validate_catalog(std::span<const SiteRecord> sites) {
    std::vector<Finding> out;
    std::set<std::string> seen;
    for (const SiteRecord& s : sites) {
        if (!seen.insert(text::to_upper(s.code)).second)
            out.push_back({s.code, "code", s.code, "unique", "duplicate site code"});

        check(out, s.altitude_m >= -100 && s.altitude_m <= 9000, s, "altitude_m", s.altitude_m, "[-100, 9000]",
              "altitude out of range");
        check(out, std::abs(s.latitude_deg) <= 90, s, "lat_deg", s.latitude_deg, "|lat| <= 90",
              "latitude out of range");
        check(out, std::abs(s.longitude_deg) <= 180, s, "lon_deg", s.longitude_deg, "|lon| <= 180",
              "longitude out of range");
        check(out, s.ref_pressure_hpa > 500 && s.ref_pressure_hpa < 1100, s, "p_ref_hpa", s.ref_pressure_hpa,
              "(500, 1100)", "reference pressure out of range");

        const std::pair<const char*, const Measured*> fluxes[] = {
            {"flux_all", &s.flux_all}, {"flux_n", &s.flux_neutron}, {"flux_mu", &s.flux_muon}};
        for (auto [name, m] : fluxes) {
            check(out, m->value > 0, s, std::string(name) + "_m2h", m->value, "> 0", "flux must be positive");
            check(out, m->uncertainty > 0, s, std::string(name) + "_err", m->uncertainty, "> 0",
                  "uncertainty must be positive");
        }
        for (const BandModel& b : s.bands) {
            const std::string i = std::to_string(band_index(b.band));
            check(out, b.ref_flux > 0, s, "xi" + i + "_m2h", b.ref_flux, "> 0", "flux must be positive");
            if (b.beta >= 0) {
                check(out, false, s, "beta" + i + "_per_hpa", b.beta, "< 0", "beta must be negative");
            } else {
                check(out, b.beta > -0.02, s, "beta" + i + "_per_hpa", b.beta, "(-0.02, 0)",
                      "beta out of range");
            }
        }
        const double xi0 = s.bands[0].ref_flux;
        const double sum = s.bands[1].ref_flux + s.bands[2].ref_flux;
        if (xi0 > 0)
            check(out, std::abs(sum - xi0) / xi0 <= kAdditivityTolerance, s, "xi1_m2h+xi2_m2h", sum,
                  text::shortest(xi0) + " within 2%", "band additivity violated");
    }

    // Pressure must fall with altitude: negative global trend, and no site far off the
    // trend fitted to the others.
    if (sites.size() >= 4) {
        if (auto all = fit_log_pressure(sites, sites.size()); all && all->slope >= 0)
            out.push_back({"*", "p_ref_hpa", text::shortest(all->slope), "< 0",
                           "pressure/altitude anti-correlation violated"});
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const auto fit = fit_log_pressure(sites, i);
            if (!fit) continue;
            const double predicted = std::exp(fit->intercept + fit->slope * sites[i].altitude_m);
            const double residual = sites[i].ref_pressure_hpa - predicted;
            check(out, std::abs(residual) <= kPressureResidualTolerance, sites[i], "p_ref_hpa",
                  sites[i].ref_pressure_hpa, text::shortest(std::round(predicted)) + " +/- 25",
                  "pressure/altitude anti-correlation violated");
        }
    }
    return out;
}

std::string serialize_catalog(std::span<const SiteRecord> sites) {
    std::string out;
    for (std::size_t i = 0; i < kCatalogColumns.size(); ++i) {
        if (i) out += ',';
        out += kCatalogColumns[i];
    }
    out += '\n';
    for (const SiteRecord& s : sites) {
        const double nums[] = {s.altitude_m,
                               s.latitude_deg,
                               s.longitude_deg,
                               s.flux_all.value,
                               s.flux_all.uncertainty,
                               s.flux_neutron.value,
                               s.flux_neutron.uncertainty,
                               s.flux_muon.value,
                               s.flux_muon.uncertainty,
                               s.ref_pressure_hpa,
                               s.bands[0].ref_flux,
                               s.bands[0].beta,
                               s.bands[1].ref_flux,
                               s.bands[1].beta,
                               s.bands[2].ref_flux,
                               s.bands[2].beta};
        out += text::csv_field(s.code) + ',' + text::csv_field(s.name) + ',' + text::csv_field(s.country);
        for (double v : nums) out += ',' + text::shortest(v);
        out += '\n';
    }
    return out;
}

SiteCatalog::SiteCatalog(std::vector<SiteRecord> sites)
    : sites_(std::move(sites)), version_(text::fnv1a_hex(serialize_catalog(sites_))) {}

SiteCatalog SiteCatalog::load(std::string_view document) {
    auto sites = parse_catalog(document);
    const auto findings = validate_catalog(sites);
    if (!findings.empty()) {
        const Finding& f = findings.front();
        throw ValidationError(f.message + " (site " + f.site_code + ", " + f.field + " = " + f.observed +
                              ", expected " + f.expected + ")");
    }
    return SiteCatalog(std::move(sites));
}

SiteCatalog SiteCatalog::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open catalog file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return load(ss.str());
}

std::filesystem::path SiteCatalog::default_path() {
    return std::filesystem::path(NRISK_DATA_DIR) / "sites.csv";
}

SiteCatalog SiteCatalog::load_default() { return load_file(default_path()); }

const SiteRecord* SiteCatalog::find(std::string_view code) const noexcept {
    const std::string key = text::to_upper(text::trim(code));
    for (const SiteRecord& s : sites_)
        if (text::to_upper(s.code) == key) return &s;
    return nullptr;
}

namespace {

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

}  // namespace

const SiteRecord& SiteCatalog::get(std::string_view code) const {
    if (const SiteRecord* s = find(code)) return *s;
    const std::string key = text::to_upper(text::trim(code));
    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (const SiteRecord& s : sites_) ranked.emplace_back(edit_distance(key, text::to_upper(s.code)), s.code);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    std::string msg = "unknown site '" + std::string(code) + "'; nearest:";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i) msg += " " + ranked[i].second;
    throw NotFoundError(msg);
}

}  // namespace nrisk
