#include <doctest.h>

#include <algorithm>

#include "nrisk/error.hpp"
#include "nrisk/site_catalog.hpp"
#include "support.hpp"

using namespace nrisk;

namespace {

std::vector<SiteRecord> shipped_records() { return parse_catalog(testing::read_text(testing::data_path("sites.csv"))); }

bool has_finding(const std::vector<Finding>& fs, const std::string& code, const std::string& msg) {
    return std::any_of(fs.begin(), fs.end(), [&](const Finding& f) {
        return f.site_code == code && f.message.find(msg) != std::string::npos;
    });
}

SiteRecord& by_code(std::vector<SiteRecord>& v, const std::string& code) {
    return *std::find_if(v.begin(), v.end(), [&](const SiteRecord& s) { return s.code == code; });
}

}  // namespace

TEST_CASE("shipped catalog loads in table order") {
    const auto cat = SiteCatalog::load_default();
    REQUIRE(cat.size() == 23);
    CHECK(cat.sites().front().code == "LANL");
    CHECK(cat.sites().back().code == "RCCS");
    const std::vector<std::string> order{"LANL", "NUDT", "MAD", "SOFIA", "LRZ", "HLRS", "IZUM", "DC2",
                                         "IT4",  "ORNL", "ANL", "NERSC", "MACC",  "LLNL", "CSCF", "BSC",
                                         "JSC",  "PSNC", "CCRT", "BOLT", "NSCG",  "NSCW", "RCCS"};
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(cat.sites()[i].code == order[i]);
}

TEST_CASE("get is case-insensitive and suggests neighbours") {
    const auto cat = SiteCatalog::load_default();
    const auto& lanl = cat.get("LANL");
    CHECK(lanl.altitude_m == 2125);
    CHECK(lanl.ref_pressure_hpa == 777);
    CHECK(lanl.band(EnergyBand::Full).beta == -9.2e-3);
    CHECK(&cat.get("lanl") == &lanl);
    CHECK(cat.find("XXXX") == nullptr);
    CHECK_THROWS_AS(cat.get("XXXX"), NotFoundError);
    try {
        cat.get("LAN");
    } catch (const NotFoundError& e) {
        CHECK(std::string(e.what()).find("LANL") != std::string::npos);
    }
}

TEST_CASE("quoted extremes of the band-0 flux") {
    const auto cat = SiteCatalog::load_default();
    CHECK(cat.get("NSCG").band(EnergyBand::Full).ref_flux == 3.7e4);
    CHECK(cat.get("LANL").band(EnergyBand::Full).ref_flux == 26.4e4);
    double lo = 1e300, hi = 0;
    for (const auto& s : cat.sites()) {
        lo = std::min(lo, s.band(EnergyBand::Full).ref_flux);
        hi = std::max(hi, s.band(EnergyBand::Full).ref_flux);
    }
    CHECK(lo == 3.7e4);
    CHECK(hi == 26.4e4);
}

TEST_CASE("shipped catalog has no findings") {
    const auto records = shipped_records();
    const auto findings = validate_catalog(records);
    for (const auto& f : findings) INFO(f.site_code << " " << f.message);
    CHECK(findings.empty());
}

TEST_CASE("invariant violations become findings") {
    SUBCASE("positive beta") {
        auto r = shipped_records();
        by_code(r, "MAD").bands[0].beta = 0.001;
        CHECK(has_finding(validate_catalog(r), "MAD", "beta must be negative"));
        CHECK_THROWS_WITH_AS(SiteCatalog::load(serialize_catalog(r)), doctest::Contains("beta must be negative"),
                             ValidationError);
    }
    SUBCASE("pressure out of line with altitude") {
        auto r = shipped_records();
        by_code(r, "NSCG").ref_pressure_hpa = 500;
        CHECK(has_finding(validate_catalog(r), "NSCG", "pressure/altitude anti-correlation violated"));
    }
    SUBCASE("band additivity") {
        auto r = shipped_records();
        by_code(r, "JSC").bands[1].ref_flux *= 1.05;
        CHECK(has_finding(validate_catalog(r), "JSC", "band additivity violated"));
    }
    SUBCASE("duplicate code") {
        auto r = shipped_records();
        r.push_back(r.front());
        CHECK(has_finding(validate_catalog(r), "LANL", "duplicate"));
    }
}

TEST_CASE("empty and malformed documents") {
    CHECK_THROWS_WITH_AS(parse_catalog(""), doctest::Contains("no sites"), ValidationError);
    auto doc = serialize_catalog(shipped_records());
    const auto first_nl = doc.find('\n');
    CHECK_THROWS_WITH_AS(parse_catalog(doc.substr(0, first_nl + 1)), doctest::Contains("no sites"), ValidationError);
    auto bad = doc;
    bad.replace(bad.find("2125"), 4, "high");
    try {
        parse_catalog(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.field() == "altitude_m");
    }
}

TEST_CASE("serialize is canonical and round trips") {
    const auto r = shipped_records();
    const auto canon = serialize_catalog(r);
    CHECK(serialize_catalog(parse_catalog(canon)) == canon);
    const auto cat = SiteCatalog::load(canon);
    CHECK(cat.serialize() == canon);
    CHECK(cat.version() == SiteCatalog::load_default().version());
    CHECK(canon.find("\"") != std::string::npos);  // MAD name carries a comma
}

TEST_CASE("high-band share under absolute values") {
    for (const auto& s : SiteCatalog::load_default().sites()) {
        const double ratio = s.band(EnergyBand::High).ref_flux / s.band(EnergyBand::Full).ref_flux;
        INFO(s.code << " ratio " << ratio);
        CHECK(ratio >= 0.023);
        CHECK(ratio <= 0.028);
    }
}

TEST_CASE("band additivity within 2 percent") {
    for (const auto& s : SiteCatalog::load_default().sites()) {
        const double sum = s.band(EnergyBand::Mid).ref_flux + s.band(EnergyBand::High).ref_flux;
        INFO(s.code);
        CHECK(testing::rel_diff(sum, s.band(EnergyBand::Full).ref_flux) <= 0.02);
    }
}

TEST_CASE("reference pressure anti-correlates with altitude") {
    std::vector<double> alt, p;
    for (const auto& s : SiteCatalog::load_default().sites()) {
        alt.push_back(s.altitude_m);
        p.push_back(s.ref_pressure_hpa);
    }
    CHECK(testing::spearman(alt, p) < -0.95);
}

TEST_CASE("band parsing") {
    CHECK(parse_band("0") == EnergyBand::Full);
    CHECK(parse_band("MID") == EnergyBand::Mid);
    CHECK(parse_band("high") == EnergyBand::High);
    CHECK_FALSE(parse_band("3"));
    CHECK(band_name(EnergyBand::Mid) == "mid");
}
