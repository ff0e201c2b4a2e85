#pragma once

// Galactic cosmic-ray primary spectrum: a power law with a knee.
//   phi(E) = phi0 * (E/E0)^alpha_below               for E <= E_knee
//   phi(E) = phi(E_knee) * (E/E_knee)^alpha_above     for E >  E_knee
// Energies in GeV, phi in GeV^-1 m^-2 s^-1 sr^-1.

#include <cstdint>
#include <span>
#include <vector>

namespace nrisk {

class PowerLawSpectrum {
public:
    /// Both indices must be < -1. Throws DomainError otherwise.
    PowerLawSpectrum(double phi0, double e0_gev, double alpha_below = -3.0, double alpha_above = -3.3,
                     double e_knee_gev = 4.5e6);

    double phi0() const noexcept { return phi0_; }
    double e0() const noexcept { return e0_; }
    double alpha_below() const noexcept { return alpha_below_; }
    double alpha_above() const noexcept { return alpha_above_; }
    double e_knee() const noexcept { return e_knee_; }

    /// Differential flux; throws DomainError for E <= 0.
    double flux_at(double e_gev) const;

    /// Closed-form integral of flux_at over [e_lo, e_hi]; e_hi may be +infinity.
    double integral(double e_lo, double e_hi) const;

    /// Same spectrum with the knee pushed to infinity.
    PowerLawSpectrum without_knee() const;

private:
    double phi0_, e0_, alpha_below_, alpha_above_, e_knee_;
    double knee_flux_;
};

struct NucleusSpecies {
    int z = 1;
    int a = 1;
    double mass_gev = 0.0;

    /// Lower integration bound: rest mass plus 0.1 GeV.
    double e_min_gev() const noexcept { return mass_gev + 0.1; }
};

/// Most abundant isotope for Z = 1..26 with its nuclear rest mass. Throws DomainError otherwise.
NucleusSpecies species_for(int z);
std::span<const NucleusSpecies> species_table();

struct ExposureWindow {
    double duration_s = 0.0;
    double area_m2 = 0.0;
    double solid_angle_sr = 0.0;
};

/// Expected primaries N = t * S * Omega * integral of phi over [E_min, E_max].
/// E_max may be +infinity. E_max == E_min gives 0; E_max < E_min throws DomainError.
double integrate_count(const PowerLawSpectrum& spec, const NucleusSpecies& species, const ExposureWindow& window,
                       double e_max_gev);

/// Normalized CDF of the spectrum restricted to [e_lo, e_hi].
double spectrum_cdf(const PowerLawSpectrum& spec, double e_lo, double e_hi, double e);

/// Inverse-CDF draws on [E_min, E_max], deterministic for a given seed.
std::vector<double> sample_energies(const PowerLawSpectrum& spec, const NucleusSpecies& species, double e_max_gev,
                                    std::size_t count, std::uint64_t seed);

}  // namespace nrisk
