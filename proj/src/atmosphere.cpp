#include "nrisk/atmosphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nrisk/error.hpp"
#include "nrisk/text.hpp"

namespace nrisk {

namespace {

constexpr double kCmPerM = 100.0;
constexpr double kMinFitSpan = 30000.0;  // m

const std::array<LayerShape, 4> kUsStandardShapes = {{
    {1222.6562, 994186.38},
    {1144.9069, 878153.55},
    {1305.5948, 636143.04},
    {540.1778, 772170.16},
}};
constexpr double kUsStandardTopDensity = 1.0 / 1e9;

}  // namespace

void LayerBoundaries::validate() const {
    double prev = 0.0;
    for (double b : interior_m) {
        if (!(b > prev)) throw DomainError("layer boundaries must be positive and strictly increasing");
        prev = b;
    }
    if (!(top_m > prev)) throw DomainError("top of atmosphere must lie above the last layer boundary");
}

LinsleyAtmosphere LinsleyAtmosphere::from_shapes(const std::array<LayerShape, 4>& shapes, double top_density,
                                                 LayerBoundaries boundaries) {
    boundaries.validate();
    for (const LayerShape& s : shapes)
        if (!(s.b > 0) || !(s.c > 0) || !std::isfinite(s.b) || !std::isfinite(s.c))
            throw DomainError("layer parameters b and c must be positive");
    if (!(top_density > 0) || !std::isfinite(top_density))
        throw DomainError("top-layer density must be positive");

    LinsleyAtmosphere atm;
    atm.boundaries_ = boundaries;
    atm.top_density_ = top_density;
    // Solve offsets downward from the top so that X is continuous and vanishes at the top.
    double x_above = top_density * (boundaries.top_m - boundaries.interior_m[3]) * kCmPerM;
    for (std::size_t k = 4; k-- > 0;) {
        const double u = boundaries.interior_m[k] * kCmPerM;
        const double tail = shapes[k].b * std::exp(-u / shapes[k].c);
        atm.layers_[k] = {x_above - tail, shapes[k].b, shapes[k].c};
        if (k > 0) {
            const double lower = boundaries.interior_m[k - 1] * kCmPerM;
            x_above = atm.layers_[k].a + shapes[k].b * std::exp(-lower / shapes[k].c);
        }
    }
    return atm;
}

LinsleyAtmosphere LinsleyAtmosphere::us_standard() {
    return from_shapes(kUsStandardShapes, kUsStandardTopDensity);
}

LinsleyAtmosphere LinsleyAtmosphere::isothermal(double rho0, double scale_height_m, LayerBoundaries boundaries) {
    boundaries.validate();
    if (!(rho0 > 0) || !(scale_height_m > 0)) throw DomainError("isothermal model needs rho0 > 0 and H > 0");
    const double c = scale_height_m * kCmPerM;
    const double b = rho0 * c;
    const double h4 = boundaries.interior_m[3];
    const double top_density = b * std::exp(-h4 * kCmPerM / c) / ((boundaries.top_m - h4) * kCmPerM);
    std::array<LayerShape, 4> shapes;
    shapes.fill({b, c});
    return from_shapes(shapes, top_density, boundaries);
}

std::size_t LinsleyAtmosphere::layer_of(double h) const noexcept {
    std::size_t k = 0;
    while (k < 4 && h >= boundaries_.interior_m[k]) ++k;
    return k;
}

double LinsleyAtmosphere::depth_at(double h) const {
    if (!(h >= 0.0 && h <= boundaries_.top_m))
        throw DomainError("altitude " + text::shortest(h) + " m out of range [0, " +
                          text::shortest(boundaries_.top_m) + "]");
    const std::size_t k = layer_of(h);
    if (k == 4) return top_density_ * (boundaries_.top_m - h) * kCmPerM;
    const LinsleyLayer& l = layers_[k];
    return l.a + l.b * std::exp(-h * kCmPerM / l.c);
}

double LinsleyAtmosphere::pressure_at(double h) const { return kHpaPerGramPerCm2 * depth_at(h); }

double LinsleyAtmosphere::density_at(double h) const {
    if (!(h >= 0.0 && h < boundaries_.top_m))
        throw DomainError("altitude " + text::shortest(h) + " m out of range [0, " +
                          text::shortest(boundaries_.top_m) + ")");
    const std::size_t k = layer_of(h);
    if (k == 4) return top_density_;
    const LinsleyLayer& l = layers_[k];
    return l.b / l.c * std::exp(-h * kCmPerM / l.c);
}

std::string DensityProfile::label() const {
    std::string s = site;
    if (!month.empty()) s += (s.empty() ? "" : " ") + month;
    if (members > 1) s += " (n=" + std::to_string(members) + ")";
    return s;
}

namespace {

void check_samples(const DensityProfile& p, bool monotone) {
    if (p.samples.size() < 4)
        throw ValidationError("profile needs at least 4 samples, found " + std::to_string(p.samples.size()));
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
        const DensitySample& s = p.samples[i];
        if (!std::isfinite(s.altitude_m))
            throw ValidationError("sample " + std::to_string(i) + ": altitude is not finite");
        if (!(s.density_g_cm3 > 0) || !std::isfinite(s.density_g_cm3))
            throw ValidationError("sample " + std::to_string(i) + ": non-positive density");
        if (i == 0) continue;
        const DensitySample& prev = p.samples[i - 1];
        if (!(s.altitude_m > prev.altitude_m))
            throw ValidationError("sample " + std::to_string(i) + ": altitudes not strictly increasing");
        if (monotone && s.altitude_m > 100.0 && s.density_g_cm3 > prev.density_g_cm3 * (1.0 + kProfileMonotoneTolerance))
            throw ValidationError("sample " + std::to_string(i) + ": density increases with altitude");
    }
}

}  // namespace

void validate_profile(const DensityProfile& p) { check_samples(p, true); }

LinsleyFit fit_linsley(const DensityProfile& profile, LayerBoundaries boundaries) {
    check_samples(profile, false);
    boundaries.validate();
    const auto& samples = profile.samples;
    const double lowest = samples.front().altitude_m;
    const double highest = samples.back().altitude_m;
    if (lowest < 0.0 || lowest >= boundaries.interior_m[0])
        throw ValidationError("profile must start between ground and the first layer boundary");
    if (highest < kMinFitSpan) throw ValidationError("profile must extend to at least 30 km");
    if (highest >= boundaries.top_m) throw ValidationError("profile extends above the top of the atmosphere");

    LinsleyFit result{LinsleyAtmosphere::us_standard(), {}, lowest > 0.0, false};
    std::array<LayerShape, 4> shapes;
    for (std::size_t k = 0; k < 4; ++k) {
        const double lo = k == 0 ? -std::numeric_limits<double>::infinity() : boundaries.interior_m[k - 1];
        const double hi = boundaries.interior_m[k];
        std::vector<DensitySample> in;
        for (const auto& s : samples)
            if (s.altitude_m >= lo && s.altitude_m < hi) in.push_back(s);

        LayerFitDiagnostics& diag = result.layers[k];
        diag.sample_count = in.size();
        if (in.empty() && lo >= highest) {
            shapes[k] = kUsStandardShapes[k];
            diag.source = LayerSource::Standard;
            result.extrapolated_above = true;
            continue;
        }
        if (in.size() < 2)
            throw ValidationError("insufficient samples in layer " + std::to_string(k + 1) + " (found " +
                                  std::to_string(in.size()) + ", need 2)");

        // ln rho = ln(b/c) - h/c, regressed on centred altitude (cm).
        double mx = 0, my = 0;
        for (const auto& s : in) {
            mx += s.altitude_m * kCmPerM;
            my += std::log(s.density_g_cm3);
        }
        mx /= static_cast<double>(in.size());
        my /= static_cast<double>(in.size());
        double sxx = 0, sxy = 0;
        for (const auto& s : in) {
            const double dx = s.altitude_m * kCmPerM - mx;
            sxx += dx * dx;
            sxy += dx * (std::log(s.density_g_cm3) - my);
        }
        if (!(sxx > 0)) throw ValidationError("singular fit in layer " + std::to_string(k + 1));
        const double slope = sxy / sxx;
        if (!(slope < 0))
            throw ValidationError("singular fit in layer " + std::to_string(k + 1) +
                                  ": density does not decrease with altitude");
        const double c = -1.0 / slope;
        const double log_rho_at_zero = my - slope * mx;
        shapes[k] = {std::exp(log_rho_at_zero) * c, c};

        double ss = 0;
        for (const auto& s : in) {
            const double r = std::log(s.density_g_cm3) - (my + slope * (s.altitude_m * kCmPerM - mx));
            ss += r * r;
        }
        diag.rms_log_residual = std::sqrt(ss / static_cast<double>(in.size()));
    }

    LayerFitDiagnostics& top = result.layers[4];
    double top_density = kUsStandardTopDensity;
    std::vector<double> upper;
    for (const auto& s : samples)
        if (s.altitude_m >= boundaries.interior_m[3]) upper.push_back(s.density_g_cm3);
    top.sample_count = upper.size();
    if (upper.empty()) {
        top.source = LayerSource::Standard;
        result.extrapolated_above = true;
    } else {
        double sum = 0;
        for (double d : upper) sum += d;
        top_density = sum / static_cast<double>(upper.size());
        double ss = 0;
        for (double d : upper) ss += std::pow(std::log(d / top_density), 2);
        top.rms_log_residual = std::sqrt(ss / static_cast<double>(upper.size()));
    }

    result.atmosphere = LinsleyAtmosphere::from_shapes(shapes, top_density, boundaries);
    return result;
}

namespace {

double interpolate(const std::vector<DensitySample>& s, double h) {
    auto it = std::lower_bound(s.begin(), s.end(), h,
                               [](const DensitySample& a, double x) { return a.altitude_m < x; });
    if (it == s.end()) return s.back().density_g_cm3;
    if (it->altitude_m == h || it == s.begin()) return it->density_g_cm3;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (h - lo.altitude_m) / (hi.altitude_m - lo.altitude_m);
    return lo.density_g_cm3 + t * (hi.density_g_cm3 - lo.density_g_cm3);
}

bool same_grid(const std::vector<DensitySample>& a, const std::vector<DensitySample>& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
               return x.altitude_m == y.altitude_m;
           });
}

}  // namespace

DensityProfile monthly_average(const std::vector<DensityProfile>& profiles) {
    if (profiles.empty()) throw DomainError("cannot average an empty set of profiles");
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& p : profiles) {
        if (p.samples.empty()) throw DomainError("cannot average an empty profile");
        lo = std::max(lo, p.samples.front().altitude_m);
        hi = std::min(hi, p.samples.back().altitude_m);
    }
    if (lo > hi) throw DomainError("profiles have non-overlapping altitude ranges");

    const auto& grid = profiles.front().samples;
    DensityProfile out;
    out.site = profiles.front().site;
    out.members = 0;
    for (const auto& p : profiles) {
        if (p.site != out.site) out.site = "multi";
        out.members += p.members;
    }
    out.month = profiles.front().month;
    if (profiles.back().month != out.month) out.month += ".." + profiles.back().month;

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double h = grid[i].altitude_m;
        if (h < lo || h > hi) continue;
        double sum = 0;
        for (const auto& p : profiles)
            sum += same_grid(p.samples, grid) ? p.samples[i].density_g_cm3 : interpolate(p.samples, h);
        out.samples.push_back({h, sum / static_cast<double>(profiles.size())});
    }
    if (out.samples.empty()) throw DomainError("profiles have non-overlapping altitude ranges");
    return out;
}

DensityProfile sample_profile(const LinsleyAtmosphere& atm, double step_m, double max_altitude_m, std::string site,
                              std::string month) {
    if (!(step_m > 0)) throw DomainError("sampling step must be positive");
    DensityProfile p;
    p.site = std::move(site);
    p.month = std::move(month);
    for (std::size_t k = 0;; ++k) {
        const double h = static_cast<double>(k) * step_m;
        if (h > max_altitude_m || h >= atm.top_m()) break;
        p.samples.push_back({h, atm.density_at(h)});
    }
    return p;
}

}  // namespace nrisk
