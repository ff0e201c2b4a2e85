#include "nrisk/json_io.hpp"

#include "nrisk/text.hpp"

namespace nrisk {

using nlohmann::ordered_json;

ordered_json to_json(const SiteRecord& s) {
    ordered_json j;
    j["code"] = s.code;
    j["name"] = s.name;
    j["country"] = s.country;
    j["altitude_m"] = s.altitude_m;
    j["lat_deg"] = s.latitude_deg;
    j["lon_deg"] = s.longitude_deg;
    j["flux_all_m2h"] = {{"value", s.flux_all.value}, {"uncertainty", s.flux_all.uncertainty}};
    j["flux_n_m2h"] = {{"value", s.flux_neutron.value}, {"uncertainty", s.flux_neutron.uncertainty}};
    j["flux_mu_m2h"] = {{"value", s.flux_muon.value}, {"uncertainty", s.flux_muon.uncertainty}};
    j["p_ref_hpa"] = s.ref_pressure_hpa;
    j["bands"] = ordered_json::array();
    for (const BandModel& b : s.bands)
        j["bands"].push_back({{"band", band_index(b.band)},
                              {"name", band_name(b.band)},
                              {"ref_flux_m2h", b.ref_flux},
                              {"beta_per_hpa", b.beta}});
    return j;
}

ordered_json to_json(const FluxPrediction& p) {
    ordered_json j;
    j["site"] = p.site_code;
    j["band"] = band_index(p.band);
    j["pressure_hpa"] = p.pressure_hpa;
    j["delta_p_hpa"] = p.delta_p_hpa;
    j["zeta"] = p.zeta;
    j["flux_m2h"] = p.flux;
    j["extrapolated"] = p.extrapolated;
    return j;
}

ordered_json to_json(const RiskReport& r) {
    ordered_json j;
    j["site"] = r.site_code;
    j["band"] = band_index(r.band);
    j["pressure_hpa"] = r.pressure_hpa;
    j["flux_m2h"] = r.flux;
    j["zeta"] = r.zeta;
    j["psi"] = r.psi;
    j["extrapolated"] = r.extrapolated;
    j["kinds"] = ordered_json::array();
    for (const KindRisk& k : r.kinds)
        j["kinds"].push_back({{"kind", error_kind_name(k.kind)},
                              {"device", k.device},
                              {"sigma_cm2", k.sigma_cm2},
                              {"fit", k.fit},
                              {"mtbf_h", k.mtbf_h}});
    j["fit"] = r.fit;
    j["mtbf_h"] = r.mtbf_h;
    j["fleet_size"] = r.fleet_size;
    j["fleet_mtbf_h"] = r.fleet_mtbf_h;
    j["fit_relative_uncertainty"] = r.fit_relative_uncertainty;
    if (r.checkpoint) {
        j["checkpoint_cost_s"] = *r.checkpoint_cost_s;
        j["checkpoint_interval_s"] = r.checkpoint->interval_s;
        j["checkpoint_cost_not_small"] = r.checkpoint->cost_not_small;
    } else {
        j["checkpoint_interval_s"] = nullptr;
    }
    j["provenance"] = r.provenance;
    return j;
}

ordered_json to_json(const ForecastRecord& r) { return ordered_json::parse(forecast_to_json_line(r)); }

ordered_json to_json(const Finding& f) {
    return {{"site", f.site_code},
            {"field", f.field},
            {"observed", f.observed},
            {"expected", f.expected},
            {"message", f.message}};
}

}  // namespace nrisk
