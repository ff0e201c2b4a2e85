#include <doctest.h>

#include <limits>
#include <random>

#include "nrisk/error.hpp"
#include "nrisk/primary_spectrum.hpp"
#include "spectrum_oracle.hpp"
#include "support.hpp"

using namespace nrisk;
using testing::oracle_flux;
using testing::oracle_integral;
using testing::Params;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double oracle_cdf(const Params& p, double lo, double hi, double e) {
    return oracle_integral(p, lo, e) / oracle_integral(p, lo, hi);
}

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = double(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = cdf(xs[i]);
        d = std::max({d, c - double(i) / n, double(i + 1) / n - c});
    }
    return d;
}

}  // namespace

TEST_CASE("flux_at shape") {
    const PowerLawSpectrum s(2.5, 10.0);
    CHECK(s.flux_at(10.0) == 2.5);
    CHECK(s.flux_at(200.0) / s.flux_at(100.0) == doctest::Approx(std::pow(2.0, -3.0)).epsilon(1e-14));
    const double k = s.e_knee();
    CHECK(testing::rel_diff(s.flux_at(k), s.flux_at(k * (1 + 1e-15))) < 1e-12);
    CHECK(s.flux_at(4 * k) / s.flux_at(2 * k) == doctest::Approx(std::pow(2.0, -3.3)).epsilon(1e-13));
    CHECK_THROWS_AS(s.flux_at(0), DomainError);
    CHECK_THROWS_AS(PowerLawSpectrum(1, 1, -1.0), DomainError);
    CHECK_THROWS_AS(PowerLawSpectrum(1, 1, -3.0, -0.5), DomainError);
    double prev = s.flux_at(1);
    for (double e = 2; e < 1e9; e *= 1.7) {
        CHECK(s.flux_at(e) < prev);
        prev = s.flux_at(e);
    }
}

TEST_CASE("the alpha = -3 case is analytic") {
    const PowerLawSpectrum s(1.0, 1.0, -3.0);
    const double expected = (1e-2 - 1e-12) / 2;
    CHECK(testing::rel_diff(s.integral(10, 1e6), expected) < 1e-12);
    const NucleusSpecies nine{1, 1, 9.9};
    const double n = integrate_count(s, nine, {1, 1, 1}, 1e6);
    CHECK(testing::rel_diff(n, (std::pow(nine.e_min_gev(), -2) - 1e-12) / 2) < 1e-12);
    CHECK(testing::rel_diff(n, expected) < 1e-12);
}

TEST_CASE("closed form agrees with quadrature on random spectra") {
    std::mt19937_64 gen(67);
    std::uniform_real_distribution<double> u(0, 1);
    int straddling = 0;
    for (int i = 0; i < 100; ++i) {
        Params p{};
        p.phi0 = std::pow(10, -1 + 5 * u(gen));
        p.e0 = std::pow(10, 3 * u(gen));
        p.ab = -1.3 - 2.2 * u(gen);
        p.aa = p.ab - 0.05 - 0.8 * u(gen);
        p.knee = std::pow(10, 2 + 5 * u(gen));
        const PowerLawSpectrum s(p.phi0, p.e0, p.ab, p.aa, p.knee);
        const auto species = species_for(1 + int(u(gen) * 26));
        const double lo = species.e_min_gev();
        double hi = i % 10 == 0 ? kInf : lo * std::pow(10, 0.5 + 8 * u(gen));
        if (hi > p.knee && lo < p.knee) ++straddling;
        const ExposureWindow w{1 + 1e5 * u(gen), 0.5 + 3 * u(gen), 0.1 + 6 * u(gen)};
        const double closed = integrate_count(s, species, w, hi);
        const double oracle = w.duration_s * w.area_m2 * w.solid_angle_sr * oracle_integral(p, lo, hi);
        INFO("spectrum " << i << " alpha " << p.ab << "/" << p.aa << " knee " << p.knee << " range " << lo << ".."
                         << hi);
        CHECK(testing::rel_diff(closed, oracle) < 1e-8);
    }
    CHECK(straddling >= 20);
}

TEST_CASE("monthly exposure for protons") {
    // Normalization near 1.8e4 nucleons / (m^2 s sr GeV) at 1 GeV.
    const PowerLawSpectrum s(1.8e4, 1.0);
    const auto p = species_for(1);
    const ExposureWindow w{129600, 1, 2 * M_PI};
    const double n = integrate_count(s, p, w, 1e6);
    const Params q{1.8e4, 1.0, -3.0, -3.3, 4.5e6};
    CHECK(testing::rel_diff(n, 129600 * 2 * M_PI * oracle_integral(q, p.e_min_gev(), 1e6)) < 1e-8);
    MESSAGE("proton count for one month over 1 m^2 and 2 pi sr: " << n);
}

TEST_CASE("count bounds") {
    const PowerLawSpectrum s(1, 1);
    const auto fe = species_for(26);
    CHECK(integrate_count(s, fe, {1, 1, 1}, fe.e_min_gev()) == 0.0);
    CHECK_THROWS_AS(integrate_count(s, fe, {1, 1, 1}, fe.e_min_gev() / 2), DomainError);
    CHECK(std::isfinite(integrate_count(s, fe, {1, 1, 1}, kInf)));
    CHECK_THROWS_AS(species_for(0), DomainError);
    CHECK_THROWS_AS(species_for(27), DomainError);
    CHECK(species_for(1).mass_gev == doctest::Approx(0.938272).epsilon(1e-5));
    CHECK(species_for(26).a == 56);
    CHECK(species_for(26).mass_gev == doctest::Approx(52.09).epsilon(1e-3));
    CHECK(species_table().size() == 26);
}

TEST_CASE("count is linear in exposure") {
    const PowerLawSpectrum s(3, 2);
    const auto he = species_for(2);
    const double base = integrate_count(s, he, {10, 2, 3}, 1e7);
    CHECK(integrate_count(s, he, {20, 2, 3}, 1e7) == doctest::Approx(2 * base).epsilon(1e-14));
    CHECK(integrate_count(s, he, {10, 6, 3}, 1e7) == doctest::Approx(3 * base).epsilon(1e-14));
    CHECK(integrate_count(s, he, {10, 2, 1.5}, 1e7) == doctest::Approx(base / 2).epsilon(1e-14));
}

TEST_CASE("the knee steepens the spectrum") {
    const PowerLawSpectrum s(1, 1);
    const auto p = species_for(1);
    for (double hi : {1e7, 1e9, kInf})
        CHECK(integrate_count(s, p, {1, 1, 1}, hi) < integrate_count(s.without_knee(), p, {1, 1, 1}, hi));
    const PowerLawSpectrum low_knee(1, 1, -2.7, -3.1, 20);
    for (double hi : {20.5, 100.0, 1e4, kInf})
        CHECK(integrate_count(low_knee, p, {1, 1, 1}, hi) < integrate_count(low_knee.without_knee(), p, {1, 1, 1}, hi));
    CHECK(integrate_count(s, p, {1, 1, 1}, 1e6) == integrate_count(s.without_knee(), p, {1, 1, 1}, 1e6));
}

TEST_CASE("sampling basics") {
    const PowerLawSpectrum s(1, 1);
    const auto p = species_for(1);
    CHECK(sample_energies(s, p, 1e6, 0, 1).empty());
    const auto a = sample_energies(s, p, 1e6, 1000, 99);
    CHECK(a == sample_energies(s, p, 1e6, 1000, 99));
    CHECK(a != sample_energies(s, p, 1e6, 1000, 100));
    for (double e : a) {
        CHECK(e >= p.e_min_gev());
        CHECK(e <= 1e6);
    }
}

TEST_CASE("sampled energies follow the analytic distribution") {
    const std::size_t n = 100000;
    const double threshold = 1.63 / std::sqrt(double(n));
    const auto p = species_for(1);
    const double lo = p.e_min_gev();

    SUBCASE("single power law") {
        const PowerLawSpectrum s(1, 1, -3.0);
        const double hi = 1e6;
        const auto xs = sample_energies(s, p, hi, n, 2024);
        const double d = ks_statistic(xs, [&](double e) {
            return (std::pow(lo, -2) - std::pow(e, -2)) / (std::pow(lo, -2) - std::pow(hi, -2));
        });
        CHECK(d < threshold);
    }
    SUBCASE("knee inside the range") {
        const Params q{1, 1, -1.6, -2.2, 50};
        const PowerLawSpectrum s(q.phi0, q.e0, q.ab, q.aa, q.knee);
        const double hi = 1e5;
        const auto xs = sample_energies(s, p, hi, n, 7);
        const double z = oracle_integral(q, lo, hi);
        const double below = oracle_integral(q, lo, q.knee);
        auto cdf = [&](double e) {
            if (e <= q.knee) return (std::pow(e, q.ab + 1) - std::pow(lo, q.ab + 1)) / (q.ab + 1) / z;
            return (below + oracle_flux(q, q.knee) * q.knee *
                                (std::pow(e / q.knee, q.aa + 1) - 1) / (q.aa + 1)) / z;
        };
        CHECK(std::abs(cdf(hi) - 1) < 1e-9);
        CHECK(ks_statistic(xs, cdf) < threshold);
        CHECK(std::abs(spectrum_cdf(s, lo, hi, 1000) - oracle_cdf(q, lo, hi, 1000)) < 1e-10);
    }
}
