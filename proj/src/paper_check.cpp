#include "nrisk/paper_check.hpp"

#include <cmath>
#include <functional>

#include "nrisk/barometric.hpp"
#include "nrisk/error.hpp"
#include "nrisk/reliability.hpp"

namespace nrisk {

namespace {

constexpr double kSigmaSdcK20x = 4.8e-7;  // cm^2
constexpr std::int64_t kTitanGpus = 18688;

}  // namespace

std::vector<CheckResult> run_paper_checks(const SiteCatalog& catalog) {
    std::vector<CheckResult> out;
    auto add = [&](std::string name, double expected, double tolerance, const std::function<double()>& compute) {
        CheckResult r{std::move(name), expected, std::nan(""), tolerance, false, {}};
        try {
            r.computed = compute();
            r.pass = std::abs(r.computed - expected) <= tolerance;
        } catch (const Error& e) {
            r.error = e.what();
        }
        out.push_back(std::move(r));
    };
    auto site = [&](const char* code) -> const SiteRecord& { return catalog.get(code); };

    add("catalog site count", 23, 0, [&] { return static_cast<double>(catalog.size()); });
    add("LANL altitude (m)", 2125, 0, [&] { return site("LANL").altitude_m; });
    add("LANL reference pressure (hPa)", 777, 0, [&] { return site("LANL").ref_pressure_hpa; });
    add("LANL beta0 (1/hPa)", -9.2e-3, 1e-12, [&] { return site("LANL").band(EnergyBand::Full).beta; });
    add("LANL band-0 flux (m^-2 h^-1)", 26.4e4, 0, [&] { return site("LANL").band(EnergyBand::Full).ref_flux; });
    add("NSCG band-0 flux (m^-2 h^-1)", 3.7e4, 0, [&] { return site("NSCG").band(EnergyBand::Full).ref_flux; });

    add("LANL zeta0 at 779 hPa", -1.84e-2, 1e-6,
        [&] { return relative_variation(site("LANL"), EnergyBand::Full, 779); });
    add("RCCS zeta0 at 1002 hPa", 5.36e-2, 1e-6,
        [&] { return relative_variation(site("RCCS"), EnergyBand::Full, 1002); });
    add("RCCS zeta0 at 1002 hPa (quoted ~6%)", 0.06, 0.01,
        [&] { return relative_variation(site("RCCS"), EnergyBand::Full, 1002); });

    add("ORNL band-1 flux at 979 hPa (m^-2 h^-1)", 4.886e4, 5,
        [&] { return predict_flux(site("ORNL"), EnergyBand::Mid, 979).flux; });
    add("ORNL psi1 at 979 hPa", 3.95e-2, 1e-6,
        [&] { return relative_fit_variation(site("ORNL"), EnergyBand::Mid, 979); });
    add("ORNL FIT_SDC at 979 hPa", 2345, 1,
        [&] { return fit_rate_at_pressure(site("ORNL"), EnergyBand::Mid, kSigmaSdcK20x, 979); });
    add("Titan fleet MTBF at 979 hPa (h)", 22.8, 0.2, [&] {
        return fleet_mtbf(fit_rate_at_pressure(site("ORNL"), EnergyBand::Mid, kSigmaSdcK20x, 979), kTitanGpus);
    });
    return out;
}

}  // namespace nrisk
