#pragma once

// Layered parametric atmosphere (Linsley form): four exponential layers
//   X(h) = a_i + b_i * exp(-h / c_i)
// and a linear top layer reaching X = 0 at the top of the atmosphere.
// Depth X in g/cm^2, density in g/cm^3, altitudes in metres, c_i in cm.

#include <array>
#include <string>
#include <vector>

namespace nrisk {

/// Standard gravity; 1 g/cm^2 of column corresponds to 0.980665 hPa.
inline constexpr double kStandardGravity = 9.80665;
inline constexpr double kHpaPerGramPerCm2 = 0.980665;

struct LayerBoundaries {
    std::array<double, 4> interior_m{4000.0, 10000.0, 40000.0, 100000.0};
    double top_m = 112800.0;

    /// Throws DomainError unless strictly increasing and positive.
    void validate() const;
};

/// Shape of one exponential layer: X contribution b * exp(-h/c).
struct LayerShape {
    double b = 0.0;  // g/cm^2
    double c = 0.0;  // cm
};

struct LinsleyLayer {
    double a = 0.0;  // g/cm^2
    double b = 0.0;  // g/cm^2
    double c = 0.0;  // cm
};

class LinsleyAtmosphere {
public:
    /// Builds the model from the four exponential shapes and the constant density of
    /// the top layer. Offsets a_i are solved top-down so that X is continuous and X(top) = 0.
    static LinsleyAtmosphere from_shapes(const std::array<LayerShape, 4>& shapes, double top_density,
                                         LayerBoundaries boundaries = {});

    /// U.S. standard atmosphere parametrized by Linsley (offsets re-solved for exact continuity).
    static LinsleyAtmosphere us_standard();

    /// Single-exponential atmosphere rho0 * exp(-h/H). The top-layer density is chosen so
    /// every exponential offset is zero, hence X(0) = rho0 * H exactly.
    static LinsleyAtmosphere isothermal(double rho0_g_cm3 = 1.225e-3, double scale_height_m = 8434.0,
                                        LayerBoundaries boundaries = {});

    double depth_at(double h_m) const;      // g/cm^2, 0 <= h <= top
    double pressure_at(double h_m) const;   // hPa, 0 <= h <= top
    double density_at(double h_m) const;    // g/cm^3, 0 <= h < top

    const std::array<LinsleyLayer, 4>& layers() const noexcept { return layers_; }
    double top_density() const noexcept { return top_density_; }
    const LayerBoundaries& boundaries() const noexcept { return boundaries_; }
    double top_m() const noexcept { return boundaries_.top_m; }

    /// Index 0..4 of the layer containing h (boundary altitudes belong to the upper layer).
    std::size_t layer_of(double h_m) const noexcept;

private:
    LinsleyAtmosphere() = default;

    std::array<LinsleyLayer, 4> layers_{};
    double top_density_ = 0.0;
    LayerBoundaries boundaries_{};
};

/// Relative density increase with altitude tolerated in measured profiles (above 100 m).
inline constexpr double kProfileMonotoneTolerance = 0.01;

struct DensitySample {
    double altitude_m = 0.0;
    double density_g_cm3 = 0.0;

    bool operator==(const DensitySample&) const = default;
};

struct DensityProfile {
    std::string site;
    std::string month;
    int members = 1;  // >1 for averaged profiles
    std::vector<DensitySample> samples;

    std::string label() const;
    bool operator==(const DensityProfile&) const = default;
};

/// Throws ValidationError naming the offending sample: >= 4 samples, strictly increasing
/// altitudes, positive densities, non-increasing density above 100 m within 1%.
void validate_profile(const DensityProfile& profile);

enum class LayerSource { Fitted, Standard };

struct LayerFitDiagnostics {
    LayerSource source = LayerSource::Fitted;
    std::size_t sample_count = 0;
    double rms_log_residual = 0.0;
};

struct LinsleyFit {
    LinsleyAtmosphere atmosphere;
    std::array<LayerFitDiagnostics, 5> layers;
    bool extrapolated_below = false;  // lowest sample above 0 m
    bool extrapolated_above = false;  // some layer taken from the standard atmosphere
};

/// Log-linear least squares of density against altitude in each exponential layer.
/// Layers entirely above the highest sample fall back to the standard atmosphere.
/// Density jumps at layer boundaries are accepted here; the 1% monotonicity rule of
/// validate_profile is applied to measured profiles at ingestion.
LinsleyFit fit_linsley(const DensityProfile& profile, LayerBoundaries boundaries = {});

/// Pointwise arithmetic mean; other grids are linearly interpolated onto the first one
/// (restricted to the common altitude range).
DensityProfile monthly_average(const std::vector<DensityProfile>& profiles);

/// Samples a model at the given spacing from 0 up to (excluding) the top.
DensityProfile sample_profile(const LinsleyAtmosphere& atm, double step_m, double max_altitude_m,
                              std::string site = "synthetic", std::string month = "");

}  // namespace nrisk
