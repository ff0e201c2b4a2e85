#include "nrisk/reliability.hpp"

#include <cmath>

#include "nrisk/error.hpp"
#include "nrisk/text.hpp"

namespace nrisk {

namespace {

constexpr double kFitScale = 1e5;  // m^-2 -> cm^-2 and per-hour -> per 1e9 hours
constexpr double kBillionHours = 1e9;

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

std::string_view error_kind_name(ErrorKind k) noexcept {
    switch (k) {
        case ErrorKind::SDC: return "SDC";
        case ErrorKind::Crash: return "crash";
        case ErrorKind::DUE: return "DUE";
    }
    return "?";
}

std::optional<ErrorKind> parse_error_kind(std::string_view s) {
    const std::string u = text::to_upper(text::trim(s));
    if (u == "SDC") return ErrorKind::SDC;
    if (u == "CRASH") return ErrorKind::Crash;
    if (u == "DUE") return ErrorKind::DUE;
    return std::nullopt;
}

std::vector<DeviceSensitivity> builtin_sensitivities() {
    return {
        {"K20X-class GPU", ErrorKind::SDC, 4.8e-7, 0.4e-7, "field-log average (Titan/Moonlight)"},
        {"K20X-class GPU", ErrorKind::Crash, 2.7e-7, 0.2e-7, "field-log average (Titan/Moonlight)"},
    };
}

std::vector<DeviceSensitivity> parse_device_file(std::string_view document) {
    static constexpr std::string_view kHeader[] = {"device", "error_kind", "sigma_cm2", "sigma_err_cm2", "source"};
    std::vector<DeviceSensitivity> out;
    bool header_seen = false;
    std::size_t lineno = 0;
    for (std::string_view raw : text::lines(document)) {
        ++lineno;
        const auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto f = text::split_csv(line);
        if (!f) throw ParseError(lineno, "", "unterminated quoted field");
        if (!header_seen) {
            if (f->size() != 5 || !std::equal(f->begin(), f->end(), std::begin(kHeader)))
                throw ParseError(lineno, "", "expected device header row");
            header_seen = true;
            continue;
        }
        if (f->size() != 5) throw ParseError(lineno, "", "expected 5 fields");
        DeviceSensitivity d;
        d.device = (*f)[0];
        auto kind = parse_error_kind((*f)[1]);
        if (!kind) throw ParseError(lineno, "error_kind", "unknown error kind '" + (*f)[1] + "'");
        d.kind = *kind;
        auto sigma = text::parse_double((*f)[2]);
        auto err = text::parse_double((*f)[3]);
        if (!sigma) throw ParseError(lineno, "sigma_cm2", "not a number");
        if (!err) throw ParseError(lineno, "sigma_err_cm2", "not a number");
        if (!(*sigma > 0)) throw ParseError(lineno, "sigma_cm2", "sigma must be positive");
        if (*err < 0) throw ParseError(lineno, "sigma_err_cm2", "uncertainty must be non-negative");
        d.sigma_cm2 = *sigma;
        d.sigma_err_cm2 = *err;
        d.source = (*f)[4];
        out.push_back(std::move(d));
    }
    if (out.empty()) throw ValidationError("no devices");
    return out;
}

std::string serialize_device_file(std::span<const DeviceSensitivity> devices) {
    std::string out = "device,error_kind,sigma_cm2,sigma_err_cm2,source\n";
    for (const auto& d : devices)
        out += text::csv_field(d.device) + ',' + std::string(error_kind_name(d.kind)) + ',' +
               text::shortest(d.sigma_cm2) + ',' + text::shortest(d.sigma_err_cm2) + ',' +
               text::csv_field(d.source) + '\n';
    return out;
}

double fit_rate(double flux_m2h, double sigma_cm2) {
    require_positive(flux_m2h, "flux");
    require_positive(sigma_cm2, "sigma");
    return kFitScale * flux_m2h * sigma_cm2;
}

double fit_rate_at_pressure(const SiteRecord& site, EnergyBand band, double sigma_cm2, double pressure_hpa) {
    require_positive(sigma_cm2, "sigma");
    // Validates the pressure and the positivity of the flux.
    const FluxPrediction p = predict_flux(site, band, pressure_hpa);
    const BandModel& m = site.band(band);
    return kFitScale * sigma_cm2 * m.ref_flux * (1.0 + m.beta * p.delta_p_hpa);
}

double mtbf(double fit) {
    require_positive(fit, "FIT");
    return kBillionHours / fit;
}

double fleet_mtbf(double fit_per_device, std::int64_t fleet_size) {
    require_positive(fit_per_device, "FIT");
    if (fleet_size < 1) throw DomainError("fleet size must be at least 1");
    return kBillionHours / (fit_per_device * static_cast<double>(fleet_size));
}

double relative_fit_variation(const SiteRecord& site, EnergyBand band, double pressure_hpa) {
    return relative_variation(site, band, pressure_hpa);
}

CheckpointAdvice checkpoint_interval(double mtbf_hours, double checkpoint_cost_s) {
    require_positive(mtbf_hours, "MTBF");
    require_positive(checkpoint_cost_s, "checkpoint cost");
    const double mtbf_s = mtbf_hours * 3600.0;
    return {std::sqrt(2.0 * checkpoint_cost_s * mtbf_s), checkpoint_cost_s > mtbf_s / 10.0};
}

RiskReport assess_risk(const SiteRecord& site, std::span<const DeviceSensitivity> sensitivities,
                       const RiskQuery& q) {
    if (sensitivities.empty()) throw DomainError("no device sensitivities given");
    if (q.fleet_size < 1) throw DomainError("fleet size must be at least 1");

    const FluxPrediction pred = predict_flux(site, q.band, q.pressure_hpa);
    RiskReport r;
    r.site_code = site.code;
    r.band = q.band;
    r.pressure_hpa = q.pressure_hpa;
    r.flux = pred.flux;
    r.zeta = pred.zeta;
    r.psi = relative_fit_variation(site, q.band, q.pressure_hpa);
    r.extrapolated = pred.extrapolated;
    r.fleet_size = q.fleet_size;

    double var_abs = 0;
    for (const auto& s : sensitivities) {
        KindRisk k;
        k.kind = s.kind;
        k.device = s.device;
        k.sigma_cm2 = s.sigma_cm2;
        k.fit = fit_rate(pred.flux, s.sigma_cm2);
        k.mtbf_h = mtbf(k.fit);
        r.fit += k.fit;
        var_abs += std::pow(k.fit * s.sigma_err_cm2 / s.sigma_cm2, 2);
        r.kinds.push_back(std::move(k));
        r.provenance.push_back("sigma_" + std::string(error_kind_name(s.kind)) + " " + text::shortest(s.sigma_cm2) +
                               " cm^2 (" + s.device + "; " + s.source + ")");
    }
    r.mtbf_h = mtbf(r.fit);
    r.fleet_mtbf_h = fleet_mtbf(r.fit, q.fleet_size);

    const double flux_rel = site.flux_neutron.uncertainty / site.flux_neutron.value;
    r.fit_relative_uncertainty = std::sqrt(var_abs / (r.fit * r.fit) + flux_rel * flux_rel);

    if (q.checkpoint_cost_s) {
        r.checkpoint_cost_s = q.checkpoint_cost_s;
        r.checkpoint = checkpoint_interval(r.fleet_mtbf_h, *q.checkpoint_cost_s);
    }
    r.provenance.insert(r.provenance.begin(),
                        {"site " + site.code + ": P_ref " + text::shortest(site.ref_pressure_hpa) + " hPa, ref_flux " +
                             text::shortest(site.band(q.band).ref_flux) + " m^-2 h^-1, beta " +
                             text::shortest(site.band(q.band).beta) + " hPa^-1 (band " +
                             std::to_string(band_index(q.band)) + ")",
                         "station pressure " + text::shortest(q.pressure_hpa) + " hPa"});
    return r;
}

}  // namespace nrisk
