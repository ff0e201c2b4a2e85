#include "nrisk/barometric.hpp"

#include <cmath>

#include "nrisk/error.hpp"
#include "nrisk/text.hpp"

namespace nrisk {

namespace {

void require_pressure(double p) {
    if (!(p > kMinPressureHpa && p < kMaxPressureHpa))
        throw DomainError("pressure out of range: " + text::shortest(p) + " hPa not in (500, 1100)");
}

}  // namespace

double relative_variation(const SiteRecord& site, EnergyBand band, double pressure_hpa) {
    require_pressure(pressure_hpa);
    return site.band(band).beta * (pressure_hpa - site.ref_pressure_hpa);
}

FluxPrediction predict_flux(const SiteRecord& site, EnergyBand band, double pressure_hpa) {
    FluxPrediction p;
    p.site_code = site.code;
    p.band = band;
    p.pressure_hpa = pressure_hpa;
    p.zeta = relative_variation(site, band, pressure_hpa);
    p.delta_p_hpa = pressure_hpa - site.ref_pressure_hpa;
    p.flux = site.band(band).ref_flux * (1.0 + p.zeta);
    p.extrapolated = std::abs(p.delta_p_hpa) > kValidityWindowHpa;
    if (!(p.flux > 0))
        throw ModelValidityError("predicted flux is not positive at " + text::shortest(pressure_hpa) +
                                 " hPa; linear model invalid this far from the reference pressure");
    return p;
}

double pressure_for_flux(const SiteRecord& site, EnergyBand band, double target_flux) {
    if (!(target_flux > 0) || !std::isfinite(target_flux))
        throw ModelValidityError("target flux must be positive");
    const BandModel& m = site.band(band);
    const double delta = (target_flux / m.ref_flux - 1.0) / m.beta;
    if (!(std::abs(delta) <= kMaxExcursionHpa))
        throw ModelValidityError("target flux implies a pressure excursion of " + text::shortest(delta) +
                                 " hPa, beyond the model validity of +/-100 hPa");
    return site.ref_pressure_hpa + delta;
}

BetaFit fit_beta(std::span<const PressureFluxPoint> series) {
    if (series.size() < 3) throw DomainError("fit_beta needs at least 3 points");
    const double n = static_cast<double>(series.size());
    double mp = 0, mf = 0;
    for (const auto& pt : series) {
        if (!std::isfinite(pt.pressure_hpa) || !(pt.flux > 0) || !std::isfinite(pt.flux))
            throw DomainError("fit_beta needs finite pressures and positive fluxes");
        mp += pt.pressure_hpa;
        mf += pt.flux;
    }
    mp /= n;
    mf /= n;

    double sxx = 0, sxy = 0, my = 0;
    for (const auto& pt : series) {
        const double x = pt.pressure_hpa - mp;
        const double y = pt.flux / mf - 1.0;
        sxx += x * x;
        sxy += x * y;
        my += y;
    }
    my /= n;
    if (!(sxx > 0)) throw DomainError("degenerate series: pressure has zero variance");

    BetaFit fit;
    fit.ref_pressure = mp;
    fit.ref_flux = mf;
    fit.beta = sxy / sxx;
    double ss = 0;
    for (const auto& pt : series) {
        const double r = (pt.flux / mf - 1.0) - (my + fit.beta * (pt.pressure_hpa - mp));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace nrisk
