#include "nrisk/primary_spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "nrisk/error.hpp"
#include "nrisk/text.hpp"

namespace nrisk {

namespace {

constexpr double kAtomicMassUnitGev = 0.93149410242;
constexpr double kElectronMassGev = 0.51099895e-3;

struct Isotope {
    int z;
    int a;
    double atomic_mass_u;
};

// Most abundant stable isotope of each element from hydrogen to iron.
constexpr std::array<Isotope, 26> kIsotopes = {{
    {1, 1, 1.00782503207},   {2, 4, 4.00260325413},   {3, 7, 7.0160034366},   {4, 9, 9.012183065},
    {5, 11, 11.00930536},    {6, 12, 12.0},           {7, 14, 14.00307400443}, {8, 16, 15.99491461957},
    {9, 19, 18.99840316273}, {10, 20, 19.9924401762}, {11, 23, 22.989769282}, {12, 24, 23.985041697},
    {13, 27, 26.98153853},   {14, 28, 27.97692653465}, {15, 31, 30.97376199842}, {16, 32, 31.9720711744},
    {17, 35, 34.968852682},  {18, 40, 39.9623831237}, {19, 39, 38.9637064864}, {20, 40, 39.962590863},
    {21, 45, 44.95590828},   {22, 48, 47.94794198},   {23, 51, 50.94395704},  {24, 52, 51.94050623},
    {25, 55, 54.93804391},   {26, 56, 55.93493633},
}};

const std::array<NucleusSpecies, 26>& table() {
    static const std::array<NucleusSpecies, 26> t = [] {
        std::array<NucleusSpecies, 26> out{};
        for (std::size_t i = 0; i < kIsotopes.size(); ++i) {
            const Isotope& iso = kIsotopes[i];
            out[i] = {iso.z, iso.a, iso.atomic_mass_u * kAtomicMassUnitGev - iso.z * kElectronMassGev};
        }
        return out;
    }();
    return t;
}

// Integral of amp * (E/ref)^alpha over [lo, hi], written to avoid cancellation when hi ~ lo.
double branch_integral(double amp, double ref, double alpha, double lo, double hi) {
    if (hi <= lo) return 0.0;
    const double k = alpha + 1.0;
    const double ratio_term = std::isinf(hi) ? -1.0 : std::expm1(k * std::log(hi / lo));
    return amp * ref / k * std::pow(lo / ref, k) * ratio_term;
}

// Solves branch_integral(amp, ref, alpha, lo, x) = target for x.
double branch_inverse(double amp, double ref, double alpha, double lo, double target) {
    const double k = alpha + 1.0;
    const double g = target * k / (amp * ref * std::pow(lo / ref, k));
    return lo * std::exp(std::log1p(g) / k);
}

}  // namespace

PowerLawSpectrum::PowerLawSpectrum(double phi0, double e0, double alpha_below, double alpha_above, double e_knee)
    : phi0_(phi0), e0_(e0), alpha_below_(alpha_below), alpha_above_(alpha_above), e_knee_(e_knee) {
    if (!(phi0 > 0) || !std::isfinite(phi0)) throw DomainError("phi0 must be positive");
    if (!(e0 > 0) || !std::isfinite(e0)) throw DomainError("reference energy must be positive");
    if (!(e_knee > 0)) throw DomainError("knee energy must be positive");
    if (!(alpha_below < -1.0) || !(alpha_above < -1.0))
        throw DomainError("spectral indices must be < -1 for an integrable spectrum");
    knee_flux_ = std::isinf(e_knee) ? 0.0 : phi0 * std::pow(e_knee / e0, alpha_below);
}

double PowerLawSpectrum::flux_at(double e) const {
    if (!(e > 0)) throw DomainError("energy must be positive");
    if (e <= e_knee_) return phi0_ * std::pow(e / e0_, alpha_below_);
    return knee_flux_ * std::pow(e / e_knee_, alpha_above_);
}

double PowerLawSpectrum::integral(double lo, double hi) const {
    if (!(lo > 0)) throw DomainError("lower energy bound must be positive");
    if (hi < lo) throw DomainError("upper energy bound below lower bound");
    double sum = 0.0;
    if (lo < e_knee_) sum += branch_integral(phi0_, e0_, alpha_below_, lo, std::min(hi, e_knee_));
    if (hi > e_knee_) sum += branch_integral(knee_flux_, e_knee_, alpha_above_, std::max(lo, e_knee_), hi);
    return sum;
}

PowerLawSpectrum PowerLawSpectrum::without_knee() const {
    return PowerLawSpectrum(phi0_, e0_, alpha_below_, alpha_above_, std::numeric_limits<double>::infinity());
}

NucleusSpecies species_for(int z) {
    if (z < 1 || z > 26) throw DomainError("atomic number must be in 1..26");
    return table()[static_cast<std::size_t>(z - 1)];
}

std::span<const NucleusSpecies> species_table() { return table(); }

double integrate_count(const PowerLawSpectrum& spec, const NucleusSpecies& species, const ExposureWindow& w,
                       double e_max) {
    if (!(w.duration_s > 0) || !(w.area_m2 > 0) || !(w.solid_angle_sr > 0))
        throw DomainError("exposure time, area and solid angle must be positive");
    const double e_min = species.e_min_gev();
    if (e_max < e_min)
        throw DomainError("E_max " + text::shortest(e_max) + " GeV below E_min " + text::shortest(e_min) + " GeV");
    return w.duration_s * w.area_m2 * w.solid_angle_sr * spec.integral(e_min, e_max);
}

double spectrum_cdf(const PowerLawSpectrum& spec, double lo, double hi, double e) {
    if (e <= lo) return 0.0;
    if (e >= hi) return 1.0;
    return spec.integral(lo, e) / spec.integral(lo, hi);
}

std::vector<double> sample_energies(const PowerLawSpectrum& spec, const NucleusSpecies& species, double e_max,
                                    std::size_t count, std::uint64_t seed) {
    const double lo = species.e_min_gev();
    if (!(e_max > lo)) throw DomainError("E_max must exceed E_min for sampling");
    std::vector<double> out;
    out.reserve(count);
    if (count == 0) return out;

    const double knee = spec.e_knee();
    const double below = lo < knee ? spec.integral(lo, std::min(e_max, knee)) : 0.0;
    const double total = spec.integral(lo, e_max);

    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        const double target = u * total;
        double e;
        if (lo < knee && (target <= below || knee >= e_max))
            e = branch_inverse(spec.flux_at(lo), lo, spec.alpha_below(), lo, target);
        else if (lo < knee)
            e = branch_inverse(spec.flux_at(knee), knee, spec.alpha_above(), knee, target - below);
        else
            e = branch_inverse(spec.flux_at(lo), lo, spec.alpha_above(), lo, target);
        out.push_back(std::clamp(e, lo, e_max));
    }
    return out;
}

}  // namespace nrisk
