#pragma once

// Linear barometric model of the ground-level neutron flux:
//   zeta_i = beta_i * (P - P_ref),   flux_i = ref_flux_i * (1 + zeta_i)

#include <span>
#include <string>

#include "nrisk/site_catalog.hpp"

namespace nrisk {

/// Beyond this |P - P_ref| predictions are flagged as extrapolated.
inline constexpr double kValidityWindowHpa = 20.0;
/// Inverse queries implying a larger excursion are rejected.
inline constexpr double kMaxExcursionHpa = 100.0;
inline constexpr double kMinPressureHpa = 500.0;
inline constexpr double kMaxPressureHpa = 1100.0;

struct FluxPrediction {
    std::string site_code;
    EnergyBand band = EnergyBand::Full;
    double pressure_hpa = 0.0;
    double delta_p_hpa = 0.0;
    double zeta = 0.0;
    double flux = 0.0;  // m^-2 h^-1
    bool extrapolated = false;
};

/// beta_i * (P - P_ref). Throws DomainError("pressure out of range") outside (500, 1100) hPa.
double relative_variation(const SiteRecord& site, EnergyBand band, double pressure_hpa);

/// Throws ModelValidityError if the predicted flux would not be positive.
FluxPrediction predict_flux(const SiteRecord& site, EnergyBand band, double pressure_hpa);

/// Inverse of predict_flux.
double pressure_for_flux(const SiteRecord& site, EnergyBand band, double target_flux);

struct PressureFluxPoint {
    double pressure_hpa = 0.0;
    double flux = 0.0;
};

struct BetaFit {
    double beta = 0.0;
    double ref_flux = 0.0;      // mean flux
    double ref_pressure = 0.0;  // mean pressure
    double residual = 0.0;      // RMS of relative-variation residuals
};

/// OLS slope of (flux/mean_flux - 1) against (P - mean_P). Needs >= 3 points with
/// non-constant pressure.
BetaFit fit_beta(std::span<const PressureFluxPoint> series);

}  // namespace nrisk
