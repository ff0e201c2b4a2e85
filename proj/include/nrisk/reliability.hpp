#pragma once

// Soft-error rates from neutron flux.
//   FIT  = 1e5 * flux[m^-2 h^-1] * sigma[cm^2]      (failures per 1e9 device-hours)
//   MTBF = 1e9 / FIT                                  (hours)

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nrisk/barometric.hpp"
#include "nrisk/site_catalog.hpp"

namespace nrisk {

enum class ErrorKind { SDC, Crash, DUE };

std::string_view error_kind_name(ErrorKind k) noexcept;
std::optional<ErrorKind> parse_error_kind(std::string_view s);

struct DeviceSensitivity {
    std::string device;
    ErrorKind kind = ErrorKind::SDC;
    double sigma_cm2 = 0.0;
    double sigma_err_cm2 = 0.0;
    std::string source;
};

/// K20X-class GPU: sigma_SDC = (4.8 +/- 0.4)e-7 cm^2, sigma_crash = (2.7 +/- 0.2)e-7 cm^2.
std::vector<DeviceSensitivity> builtin_sensitivities();

/// Columns: device,error_kind,sigma_cm2,sigma_err_cm2,source. '#' lines are comments.
std::vector<DeviceSensitivity> parse_device_file(std::string_view document);
std::string serialize_device_file(std::span<const DeviceSensitivity> devices);

double fit_rate(double flux_m2h, double sigma_cm2);
double fit_rate_at_pressure(const SiteRecord& site, EnergyBand band, double sigma_cm2, double pressure_hpa);
double mtbf(double fit);
double fleet_mtbf(double fit_per_device, std::int64_t fleet_size);
/// Relative FIT variation psi; identical to relative_variation under the linear model.
double relative_fit_variation(const SiteRecord& site, EnergyBand band, double pressure_hpa);

struct CheckpointAdvice {
    double interval_s = 0.0;
    bool cost_not_small = false;  // checkpoint cost exceeds a tenth of the MTBF
};

/// First-order Young/Daly period sqrt(2 * cost * MTBF).
CheckpointAdvice checkpoint_interval(double mtbf_hours, double checkpoint_cost_s);

struct KindRisk {
    ErrorKind kind = ErrorKind::SDC;
    std::string device;
    double sigma_cm2 = 0.0;
    double fit = 0.0;
    double mtbf_h = 0.0;
};

struct RiskReport {
    std::string site_code;
    EnergyBand band = EnergyBand::Mid;
    double pressure_hpa = 0.0;
    double flux = 0.0;
    double zeta = 0.0;
    double psi = 0.0;
    bool extrapolated = false;
    std::vector<KindRisk> kinds;
    double fit = 0.0;     // sum over kinds
    double mtbf_h = 0.0;  // per device
    std::int64_t fleet_size = 1;
    double fleet_mtbf_h = 0.0;
    /// Relative 1-sigma uncertainty of the total FIT from the cross-sections and the
    /// catalog neutron flux. Annotation only.
    double fit_relative_uncertainty = 0.0;
    std::optional<double> checkpoint_cost_s;
    std::optional<CheckpointAdvice> checkpoint;
    std::vector<std::string> provenance;
};

struct RiskQuery {
    EnergyBand band = EnergyBand::Mid;
    double pressure_hpa = 0.0;
    std::int64_t fleet_size = 1;
    std::optional<double> checkpoint_cost_s;
};

/// FIT per error kind and in total, MTBF, fleet MTBF and optional checkpoint period.
RiskReport assess_risk(const SiteRecord& site, std::span<const DeviceSensitivity> sensitivities,
                       const RiskQuery& query);

}  // namespace nrisk
