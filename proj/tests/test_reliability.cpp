#include <doctest.h>

#include <random>

#include "nrisk/barometric.hpp"
#include "nrisk/error.hpp"
#include "nrisk/reliability.hpp"
#include "nrisk/site_catalog.hpp"
#include "support.hpp"

using namespace nrisk;

namespace {

const SiteCatalog& catalog() {
    static const SiteCatalog cat = SiteCatalog::load_default();
    return cat;
}

constexpr double kSigmaSdc = 4.8e-7;
constexpr double kSigmaCrash = 2.7e-7;

}  // namespace

TEST_CASE("fit_rate unit bridge") {
    CHECK(fit_rate(4.886e4, kSigmaSdc) == doctest::Approx(2345.28).epsilon(1e-12));
    CHECK(std::abs(fit_rate(4.886e4, kSigmaSdc) - 2345) < 1);
    CHECK(fit_rate(1e4, 1e-9) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fit_rate(13e4, kSigmaSdc) == doctest::Approx(6240).epsilon(1e-12));
    CHECK_THROWS_AS(fit_rate(0, kSigmaSdc), DomainError);
    CHECK_THROWS_AS(fit_rate(1e4, -1e-9), DomainError);
}

TEST_CASE("fit_rate_at_pressure examples") {
    const auto& ornl = catalog().get("ORNL");
    CHECK(std::abs(fit_rate_at_pressure(ornl, EnergyBand::Mid, kSigmaSdc, 979) - 2345) < 1);
    CHECK(std::abs(fit_rate_at_pressure(ornl, EnergyBand::Mid, kSigmaCrash, 979) - 1319) < 1);
    for (const auto& s : catalog().sites())
        CHECK(fit_rate_at_pressure(s, EnergyBand::Mid, kSigmaSdc, s.ref_pressure_hpa) ==
              doctest::Approx(fit_rate(s.band(EnergyBand::Mid).ref_flux, kSigmaSdc)).epsilon(1e-15));
    CHECK_THROWS_AS(fit_rate_at_pressure(ornl, EnergyBand::Mid, kSigmaSdc, 2000), DomainError);
}

TEST_CASE("mtbf and fleet mtbf") {
    CHECK(mtbf(1e9) == 1.0);
    CHECK(mtbf(1) == 1e9);
    CHECK(std::round(mtbf(2345)) == 426439);
    CHECK(std::abs(fleet_mtbf(2345, 18688) - 22.8) < 0.2);
    CHECK(std::round(fleet_mtbf(2345, 616)) == 692);
    CHECK(fleet_mtbf(777, 1) == mtbf(777));
    CHECK_THROWS_AS(mtbf(0), DomainError);
    CHECK_THROWS_AS(fleet_mtbf(2345, 0), DomainError);
}

TEST_CASE("psi is zeta") {
    const auto& ornl = catalog().get("ORNL");
    CHECK(std::abs(relative_fit_variation(ornl, EnergyBand::Mid, 979) - 3.95e-2) < 1e-6);
    CHECK(relative_fit_variation(ornl, EnergyBand::Mid, ornl.ref_pressure_hpa) == 0.0);
}

TEST_CASE("checkpoint interval") {
    const auto a = checkpoint_interval(22.8, 60);
    CHECK(a.interval_s == doctest::Approx(std::sqrt(2.0 * 60 * 82080)).epsilon(1e-14));
    CHECK(std::round(a.interval_s) == 3138);
    CHECK_FALSE(a.cost_not_small);
    CHECK(checkpoint_interval(22.8, 240).interval_s == doctest::Approx(2 * a.interval_s).epsilon(1e-14));
    CHECK(checkpoint_interval(22.8, 1e-12).interval_s < 1e-3);
    CHECK(checkpoint_interval(1, 400).cost_not_small);
    CHECK_FALSE(checkpoint_interval(1, 350).cost_not_small);
    CHECK_THROWS_AS(checkpoint_interval(0, 60), DomainError);
    CHECK_THROWS_AS(checkpoint_interval(22.8, 0), DomainError);
}

TEST_CASE("identities over random inputs") {
    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> logx(0, 8), logs(-12, -5), dp(-40, 40);
    std::uniform_int_distribution<std::size_t> pick(0, catalog().size() - 1);
    const EnergyBand bands[] = {EnergyBand::Full, EnergyBand::Mid, EnergyBand::High};
    for (int i = 0; i < 2000; ++i) {
        const double x = std::pow(10, logx(gen)), s = std::pow(10, logs(gen));
        const double f = fit_rate(x, s);
        CHECK(std::abs(f * mtbf(f) / 1e9 - 1) < 1e-9);
        CHECK(fit_rate(3 * x, s) == doctest::Approx(3 * f).epsilon(1e-15));
        CHECK(fit_rate(x, 5 * s) == doctest::Approx(5 * f).epsilon(1e-15));

        const auto& site = catalog().sites()[pick(gen)];
        const auto band = bands[i % 3];
        const double p = site.ref_pressure_hpa + dp(gen);
        CHECK(relative_fit_variation(site, band, p) == relative_variation(site, band, p));
        CHECK(testing::rel_diff(fit_rate_at_pressure(site, band, s, p), fit_rate(predict_flux(site, band, p).flux, s)) <
              1e-12);
    }
}

TEST_CASE("risk falls as pressure rises") {
    for (const auto& s : catalog().sites())
        for (auto b : {EnergyBand::Full, EnergyBand::Mid, EnergyBand::High}) {
            double prev = fit_rate_at_pressure(s, b, kSigmaSdc, s.ref_pressure_hpa - 25);
            for (double d = -24; d <= 25; d += 1) {
                const double f = fit_rate_at_pressure(s, b, kSigmaSdc, s.ref_pressure_hpa + d);
                CHECK(f < prev);
                prev = f;
            }
        }
}

TEST_CASE("assess_risk for the Titan example") {
    const auto sens = builtin_sensitivities();
    REQUIRE(sens.size() == 2);
    const auto& ornl = catalog().get("ORNL");
    const std::vector<DeviceSensitivity> sdc{sens[0]};
    const auto r = assess_risk(ornl, sdc, {EnergyBand::Mid, 979, 18688, 60.0});
    CHECK(r.site_code == "ORNL");
    REQUIRE(r.kinds.size() == 1);
    CHECK(std::abs(r.fit - 2345) < 1);
    CHECK(r.fit * r.mtbf_h == doctest::Approx(1e9).epsilon(1e-12));
    CHECK(r.fleet_mtbf_h == doctest::Approx(r.mtbf_h / 18688).epsilon(1e-12));
    CHECK(std::abs(r.fleet_mtbf_h - 22.8) < 0.2);
    CHECK(r.psi == r.zeta);
    REQUIRE(r.checkpoint);
    CHECK(r.checkpoint->interval_s == checkpoint_interval(r.fleet_mtbf_h, 60).interval_s);
    CHECK(r.fit_relative_uncertainty > 0.08);
    CHECK_FALSE(r.provenance.empty());

    const auto both = assess_risk(ornl, sens, {EnergyBand::Mid, 979, 1, std::nullopt});
    REQUIRE(both.kinds.size() == 2);
    CHECK(both.fit == both.kinds[0].fit + both.kinds[1].fit);
    CHECK(std::abs(both.kinds[1].fit - 1319) < 1);
    CHECK_FALSE(both.checkpoint);
    CHECK_THROWS_AS(assess_risk(ornl, {}, {}), DomainError);
}

TEST_CASE("device file round trip") {
    const auto builtin = builtin_sensitivities();
    const auto text = serialize_device_file(builtin);
    const auto back = parse_device_file(text);
    REQUIRE(back.size() == builtin.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].device == builtin[i].device);
        CHECK(back[i].kind == builtin[i].kind);
        CHECK(back[i].sigma_cm2 == builtin[i].sigma_cm2);
        CHECK(back[i].sigma_err_cm2 == builtin[i].sigma_err_cm2);
        CHECK(back[i].source == builtin[i].source);
    }
    CHECK(serialize_device_file(back) == text);

    const auto shipped = parse_device_file(testing::read_text(testing::data_path("devices.csv")));
    REQUIRE(shipped.size() == 2);
    CHECK(shipped[0].sigma_cm2 == kSigmaSdc);
    CHECK(shipped[1].sigma_cm2 == kSigmaCrash);
}

TEST_CASE("device file errors") {
    const std::string header = "device,error_kind,sigma_cm2,sigma_err_cm2,source\n";
    CHECK_THROWS_AS(parse_device_file(header + "x,SEL,1e-7,0,src\n"), ParseError);
    CHECK_THROWS_AS(parse_device_file(header + "x,SDC,-1e-7,0,src\n"), ParseError);
    CHECK_THROWS_AS(parse_device_file(header + "x,SDC,1e-7,-1,src\n"), ParseError);
    CHECK_THROWS_AS(parse_device_file(header), ValidationError);
    try {
        parse_device_file(header + "x,SDC,1e-7,0,src\ny,DUE,abc,0,src\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.field() == "sigma_cm2");
    }
    CHECK(parse_error_kind("crash") == ErrorKind::Crash);
    CHECK(parse_error_kind("due") == ErrorKind::DUE);
}
