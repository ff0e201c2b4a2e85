#include "nrisk/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nrisk/atmosphere.hpp"
#include "nrisk/barometric.hpp"
#include "nrisk/error.hpp"
#include "nrisk/ingest.hpp"
#include "nrisk/json_io.hpp"
#include "nrisk/paper_check.hpp"
#include "nrisk/reliability.hpp"
#include "nrisk/service.hpp"
#include "nrisk/text.hpp"
#include "nrisk/weather_client.hpp"

namespace nrisk {

namespace {

struct Common {
    std::string catalog_path;
    std::string format = "table";

    bool json() const { return format == "json"; }
    SiteCatalog catalog() const {
        return catalog_path.empty() ? SiteCatalog::load_default() : SiteCatalog::load_file(catalog_path);
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sig4(double v) { return fmt("%.4g", v); }
std::string percent(double v) { return fmt("%+.2f %%", v * 100.0); }
std::string integer(double v) { return fmt("%.0f", std::round(v)); }

EnergyBand band_from(const std::string& s) {
    auto b = parse_band(s);
    if (!b) throw CLI::ValidationError("--band", "must be 0, 1 or 2");
    return *b;
}

void print_site(std::ostream& out, const SiteRecord& s) {
    out << s.code << "  " << s.name << " (" << s.country << ")\n"
        << "  altitude        " << text::shortest(s.altitude_m) << " m\n"
        << "  lat/lon         " << text::shortest(s.latitude_deg) << ", " << text::shortest(s.longitude_deg) << "\n"
        << "  P_ref           " << text::shortest(s.ref_pressure_hpa) << " hPa\n"
        << "  neutron flux    " << sig4(s.flux_neutron.value) << " +/- " << sig4(s.flux_neutron.uncertainty)
        << " m^-2 h^-1\n";
    for (const auto& b : s.bands)
        out << "  band " << band_index(b.band) << " (" << band_name(b.band) << ")  ref_flux " << sig4(b.ref_flux)
            << " m^-2 h^-1  beta" << band_index(b.band) << " " << fmt("%.1e", b.beta) << " /hPa\n";
}

void print_risk(std::ostream& out, const RiskReport& r) {
    out << "site " << r.site_code << "  band " << band_index(r.band) << "  P = " << text::shortest(r.pressure_hpa)
        << " hPa\n"
        << "  flux            " << sig4(r.flux) << " m^-2 h^-1\n"
        << "  psi             " << percent(r.psi) << (r.extrapolated ? "  (extrapolated)" : "") << "\n";
    for (const auto& k : r.kinds)
        out << "  FIT_" << error_kind_name(k.kind) << "  " << integer(k.fit) << "  (sigma " << fmt("%.2e", k.sigma_cm2)
            << " cm^2, " << k.device << ")\n";
    out << "  FIT total       " << integer(r.fit) << "  (+/- " << fmt("%.0f", r.fit_relative_uncertainty * 100)
        << " %)\n"
        << "  MTBF/device     " << sig4(r.mtbf_h) << " h\n"
        << "  fleet MTBF      " << sig4(r.fleet_mtbf_h) << " h  (" << r.fleet_size << " devices)\n";
    if (r.checkpoint) {
        out << "  checkpoint      every " << integer(r.checkpoint->interval_s) << " s (cost "
            << text::shortest(*r.checkpoint_cost_s) << " s)\n";
        if (r.checkpoint->cost_not_small) out << "  warning: checkpoint cost exceeds a tenth of the MTBF\n";
    }
}

std::vector<PressureFluxPoint> parse_flux_series(const std::string& doc) {
    std::vector<PressureFluxPoint> pts;
    std::size_t lineno = 0;
    for (auto raw : text::lines(doc)) {
        ++lineno;
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#' || line.starts_with("pressure")) continue;
        auto f = text::split_csv(line);
        if (!f || f->size() != 2) throw ParseError(lineno, "", "expected 'pressure_hpa,flux_m2h'");
        auto p = text::parse_double((*f)[0]);
        auto x = text::parse_double((*f)[1]);
        if (!p) throw ParseError(lineno, "pressure_hpa", "not a number");
        if (!x) throw ParseError(lineno, "flux_m2h", "not a number");
        pts.push_back({*p, *x});
    }
    return pts;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Neutron-flux and soft-error risk forecasts for exascale sites", "nrisk"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--catalog", common.catalog_path, "Site catalog file (default: shipped catalog)");
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"table", "json"}));

    std::function<void()> action;

    // sites
    auto* sites = app.add_subcommand("sites", "List sites or show one");
    std::string site_code;
    bool validate = false;
    sites->add_option("--code", site_code, "Site code");
    sites->add_flag("--validate", validate, "Report invariant findings for the catalog");
    sites->callback([&] {
        action = [&] {
            if (validate) {
                const auto doc = read_file(common.catalog_path.empty() ? SiteCatalog::default_path().string()
                                                                       : common.catalog_path);
                const auto records = parse_catalog(doc);
                const auto findings = validate_catalog(records);
                if (common.json()) {
                    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                    for (const auto& f : findings) arr.push_back(to_json(f));
                    out << arr.dump(2) << "\n";
                } else {
                    for (const auto& f : findings)
                        out << f.site_code << "  " << f.field << "  " << f.message << " (observed " << f.observed
                            << ", expected " << f.expected << ")\n";
                    out << findings.size() << " finding(s)\n";
                }
                if (!findings.empty()) throw ValidationError("catalog has " + std::to_string(findings.size()) + " finding(s)");
                return;
            }
            const SiteCatalog cat = common.catalog();
            if (!site_code.empty()) {
                const auto& s = cat.get(site_code);
                if (common.json())
                    out << to_json(s).dump(2) << "\n";
                else
                    print_site(out, s);
                return;
            }
            if (common.json()) {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                for (const auto& s : cat.sites()) arr.push_back(to_json(s));
                out << arr.dump(2) << "\n";
                return;
            }
            char line[160];
            std::snprintf(line, sizeof line, "%-6s %7s %7s %10s %9s %10s %9s %10s %9s\n", "code", "alt_m", "P_hPa",
                          "xi0", "beta0", "xi1", "beta1", "xi2", "beta2");
            out << line;
            for (const auto& s : cat.sites()) {
                std::snprintf(line, sizeof line, "%-6s %7.0f %7.0f %10.4g %9.1e %10.4g %9.1e %10.4g %9.1e\n",
                              s.code.c_str(), s.altitude_m, s.ref_pressure_hpa, s.bands[0].ref_flux, s.bands[0].beta,
                              s.bands[1].ref_flux, s.bands[1].beta, s.bands[2].ref_flux, s.bands[2].beta);
                out << line;
            }
        };
    });

    // flux
    auto* flux = app.add_subcommand("flux", "Predict neutron flux at a station pressure");
    std::string flux_site, flux_band = "0";
    double flux_pressure = 0;
    flux->add_option("--site", flux_site, "Site code")->required();
    flux->add_option("--pressure", flux_pressure, "Station pressure (hPa)")->required();
    flux->add_option("--band", flux_band, "Energy band 0|1|2")->capture_default_str();
    flux->callback([&] {
        const EnergyBand band = band_from(flux_band);
        action = [&, band] {
            const SiteCatalog cat = common.catalog();
            const FluxPrediction p = predict_flux(cat.get(flux_site), band, flux_pressure);
            if (common.json()) {
                out << to_json(p).dump(2) << "\n";
                return;
            }
            out << "site " << p.site_code << "  band " << band_index(p.band) << " (" << band_name(p.band)
                << ")  P = " << text::shortest(p.pressure_hpa) << " hPa  dP = " << fmt("%+g", p.delta_p_hpa)
                << " hPa\n"
                << "  zeta  " << percent(p.zeta) << (p.extrapolated ? "  (extrapolated beyond +/-20 hPa)" : "")
                << "\n"
                << "  flux  " << sig4(p.flux) << " m^-2 h^-1\n";
        };
    });

    // risk
    auto* risk = app.add_subcommand("risk", "FIT, MTBF and checkpoint advice at a station pressure");
    std::string risk_site, risk_band = "1", device_file, kind = "SDC";
    double risk_pressure = 0;
    std::optional<double> risk_sigma, ckpt_cost;
    std::int64_t fleet = 1;
    risk->add_option("--site", risk_site, "Site code")->required();
    risk->add_option("--pressure", risk_pressure, "Station pressure (hPa)")->required();
    risk->add_option("--band", risk_band, "Energy band 0|1|2")->capture_default_str();
    risk->add_option("--sigma", risk_sigma, "Effective cross-section (cm^2), overrides the device table");
    risk->add_option("--device-file", device_file, "Device sensitivity file");
    risk->add_option("--kind", kind, "Error kind to include: SDC, crash, DUE or all")->capture_default_str();
    risk->add_option("--fleet", fleet, "Number of devices")->capture_default_str()->check(CLI::PositiveNumber);
    risk->add_option("--ckpt-cost", ckpt_cost, "Checkpoint cost (s)");
    risk->callback([&] {
        const EnergyBand band = band_from(risk_band);
        action = [&, band] {
            const SiteCatalog cat = common.catalog();
            std::vector<DeviceSensitivity> sens;
            if (risk_sigma) {
                sens.push_back({"user-supplied", ErrorKind::SDC, *risk_sigma, 0.0, "--sigma"});
            } else {
                auto all = device_file.empty() ? builtin_sensitivities() : parse_device_file(read_file(device_file));
                const auto wanted = parse_error_kind(kind);
                if (!wanted && text::to_upper(kind) != "ALL")
                    throw CLI::ValidationError("--kind", "must be SDC, crash, DUE or all");
                for (auto& d : all)
                    if (!wanted || d.kind == *wanted) sens.push_back(d);
                if (sens.empty()) throw DomainError("no cross-section of kind " + kind + " available");
            }
            const RiskReport r = assess_risk(cat.get(risk_site), sens, {band, risk_pressure, fleet, ckpt_cost});
            if (common.json())
                out << to_json(r).dump(2) << "\n";
            else
                print_risk(out, r);
        };
    });

    // checkpoint
    auto* ckpt = app.add_subcommand("checkpoint", "First-order optimal checkpoint period");
    std::optional<double> ck_mtbf, ck_fit;
    double ck_cost = 0;
    std::int64_t ck_fleet = 1;
    auto* mtbf_opt = ckpt->add_option("--mtbf", ck_mtbf, "System MTBF (h)");
    auto* fit_opt = ckpt->add_option("--fit", ck_fit, "FIT per device");
    mtbf_opt->excludes(fit_opt);
    ckpt->add_option("--fleet", ck_fleet, "Devices (with --fit)")->capture_default_str()->check(CLI::PositiveNumber);
    ckpt->add_option("--cost", ck_cost, "Checkpoint cost (s)")->required();
    ckpt->callback([&] {
        if (!ck_mtbf && !ck_fit) throw CLI::RequiredError("--mtbf or --fit");
        action = [&] {
            const double m = ck_mtbf ? *ck_mtbf : fleet_mtbf(*ck_fit, ck_fleet);
            const CheckpointAdvice a = checkpoint_interval(m, ck_cost);
            if (common.json()) {
                out << nlohmann::ordered_json{{"mtbf_h", m},
                                              {"checkpoint_cost_s", ck_cost},
                                              {"interval_s", a.interval_s},
                                              {"cost_not_small", a.cost_not_small}}
                           .dump(2)
                    << "\n";
                return;
            }
            out << "MTBF " << sig4(m) << " h, cost " << text::shortest(ck_cost) << " s -> checkpoint every "
                << integer(a.interval_s) << " s (" << fmt("%.1f", a.interval_s / 60) << " min)\n";
            if (a.cost_not_small) out << "warning: checkpoint cost exceeds a tenth of the MTBF\n";
        };
    });

    // fit-profile
    auto* fitp = app.add_subcommand("fit-profile", "Fit a layered atmosphere to density profiles");
    std::vector<std::string> profile_files;
    std::vector<double> boundaries;
    double top = 112800.0;
    fitp->add_option("--profile", profile_files, "Profile file(s); several are averaged first")->required();
    fitp->add_option("--boundaries", boundaries, "Four layer boundaries (m)")->expected(4)->delimiter(',');
    fitp->add_option("--top", top, "Top of atmosphere (m)")->capture_default_str();
    fitp->callback([&] {
        action = [&] {
            std::vector<DensityProfile> profiles;
            for (const auto& f : profile_files) profiles.push_back(parse_profile(read_file(f)));
            const DensityProfile profile = profiles.size() == 1 ? profiles.front() : monthly_average(profiles);
            LayerBoundaries lb;
            if (!boundaries.empty()) std::copy(boundaries.begin(), boundaries.end(), lb.interior_m.begin());
            lb.top_m = top;
            const LinsleyFit fit = fit_linsley(profile, lb);
            const auto& atm = fit.atmosphere;
            const double ground = profile.samples.front().altitude_m;
            if (common.json()) {
                nlohmann::ordered_json j;
                j["label"] = profile.label();
                j["layers"] = nlohmann::ordered_json::array();
                for (std::size_t k = 0; k < 4; ++k) {
                    const auto& l = atm.layers()[k];
                    j["layers"].push_back({{"a_g_cm2", l.a},
                                           {"b_g_cm2", l.b},
                                           {"c_cm", l.c},
                                           {"samples", fit.layers[k].sample_count},
                                           {"rms_log_residual", fit.layers[k].rms_log_residual},
                                           {"source", fit.layers[k].source == LayerSource::Fitted ? "fitted" : "standard"}});
                }
                j["top_density_g_cm3"] = atm.top_density();
                j["boundaries_m"] = atm.boundaries().interior_m;
                j["top_m"] = atm.top_m();
                j["extrapolated_below"] = fit.extrapolated_below;
                j["extrapolated_above"] = fit.extrapolated_above;
                j["ground_altitude_m"] = ground;
                j["ground_depth_g_cm2"] = atm.depth_at(ground);
                j["ground_pressure_hpa"] = atm.pressure_at(ground);
                out << j.dump(2) << "\n";
                return;
            }
            out << "profile " << profile.label() << " (" << profile.samples.size() << " samples)\n";
            for (std::size_t k = 0; k < 4; ++k) {
                const auto& l = atm.layers()[k];
                out << "  layer " << k + 1 << "  a " << fmt("%.6g", l.a) << "  b " << fmt("%.6g", l.b) << "  c "
                    << fmt("%.6g", l.c) << "  rms " << fmt("%.2e", fit.layers[k].rms_log_residual)
                    << (fit.layers[k].source == LayerSource::Standard ? "  (standard)" : "") << "\n";
            }
            out << "  layer 5  density " << fmt("%.3e", atm.top_density()) << " g/cm^3"
                << (fit.layers[4].source == LayerSource::Standard ? "  (standard)" : "") << "\n"
                << "  ground " << text::shortest(ground) << " m: X = " << fmt("%.2f", atm.depth_at(ground))
                << " g/cm^2, P = " << fmt("%.1f", atm.pressure_at(ground)) << " hPa\n";
            if (fit.extrapolated_below || fit.extrapolated_above) out << "  note: extrapolated outside sampled range\n";
        };
    });

    // fit-beta
    auto* fitb = app.add_subcommand("fit-beta", "Fit a barometric coefficient to a pressure/flux series");
    std::string series_file;
    fitb->add_option("--series", series_file, "CSV rows 'pressure_hpa,flux_m2h'")->required();
    fitb->callback([&] {
        action = [&] {
            const auto pts = parse_flux_series(read_file(series_file));
            const BetaFit f = fit_beta(pts);
            if (common.json()) {
                out << nlohmann::ordered_json{{"beta_per_hpa", f.beta},
                                              {"ref_flux_m2h", f.ref_flux},
                                              {"ref_pressure_hpa", f.ref_pressure},
                                              {"residual", f.residual},
                                              {"points", pts.size()}}
                           .dump(2)
                    << "\n";
                return;
            }
            out << "beta " << fmt("%.4e", f.beta) << " /hPa  P_ref " << fmt("%.2f", f.ref_pressure)
                << " hPa  ref_flux " << sig4(f.ref_flux) << " m^-2 h^-1  rms " << fmt("%.2e", f.residual) << "  ("
                << pts.size() << " points)\n";
        };
    });

    // paper-check
    auto* pc = app.add_subcommand("paper-check", "Re-evaluate the published worked examples");
    int paper_status = 0;
    pc->callback([&] {
        action = [&] {
            const auto results = run_paper_checks(common.catalog());
            bool ok = true;
            if (common.json()) {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                for (const auto& r : results) {
                    nlohmann::ordered_json j{{"check", r.check},
                                             {"expected", r.expected},
                                             {"computed", r.computed},
                                             {"tolerance", r.tolerance},
                                             {"pass", r.pass}};
                    if (!r.error.empty()) j["error"] = r.error;
                    arr.push_back(j);
                }
                out << arr.dump(2) << "\n";
            }
            for (const auto& r : results) {
                ok = ok && r.pass;
                if (common.json()) continue;
                out << (r.pass ? "PASS  " : "FAIL  ") << r.check << ": expected " << fmt("%.6g", r.expected)
                    << ", computed " << fmt("%.6g", r.computed) << " (tol " << fmt("%g", r.tolerance) << ")";
                if (!r.error.empty()) out << " error: " << r.error;
                out << "\n";
            }
            paper_status = ok ? 0 : 1;
        };
    });

    // serve
    auto* serve = app.add_subcommand("serve", "Read-only HTTP API with optional live polling");
    std::string host = "127.0.0.1", log_path;
    int port = 8080;
    std::vector<std::string> poll_sites;
    int interval = 900;
    serve->add_option("--host", host, "Bind address")->capture_default_str();
    serve->add_option("--port", port, "Port")->capture_default_str();
    serve->add_option("--poll", poll_sites, "Site codes to poll for live pressure")->delimiter(',');
    serve->add_option("--interval", interval, "Polling interval (s)")->capture_default_str()->check(CLI::PositiveNumber);
    serve->add_option("--log", log_path, "Forecast log file (JSON lines)");
    serve->callback([&] {
        action = [&] {
            Service svc(common.catalog());
            if (!poll_sites.empty()) {
                for (const auto& c : poll_sites) svc.catalog().get(c);
                auto cfg = WeatherClientConfig::from_environment();
                if (!cfg) throw Error("polling needs NRISK_WEATHER_URL");
                PollingConfig pc;
                pc.site_codes = poll_sites;
                pc.interval = std::chrono::seconds(interval);
                if (!log_path.empty()) pc.log_path = log_path;
                svc.start_polling(WeatherClient::http(*cfg), pc);
            }
            err << "serving on " << host << ":" << port << "\n";
            if (!svc.listen(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (action) action();
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return paper_status;
}

}  // namespace nrisk
