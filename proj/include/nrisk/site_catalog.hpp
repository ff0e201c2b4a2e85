#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nrisk {

/// Neutron energy ranges used by the barometric coefficients.
///   Full: E_n >= 50 MeV, Mid: 50 <= E_n <= 1000 MeV, High: E_n > 1000 MeV
enum class EnergyBand { Full = 0, Mid = 1, High = 2 };

constexpr std::size_t band_index(EnergyBand b) noexcept { return static_cast<std::size_t>(b); }
std::string_view band_name(EnergyBand b) noexcept;
/// Accepts "0"/"1"/"2" or "full"/"mid"/"high" (case-insensitive).
std::optional<EnergyBand> parse_band(std::string_view s);

struct Measured {
    double value = 0.0;
    double uncertainty = 0.0;  // absolute, same unit as value
};

struct BandModel {
    EnergyBand band = EnergyBand::Full;
    double ref_flux = 0.0;  // m^-2 h^-1
    double beta = 0.0;      // hPa^-1
};

struct SiteRecord {
    std::string code;
    std::string name;
    std::string country;
    double altitude_m = 0.0;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    Measured flux_all;      // all secondaries, m^-2 h^-1
    Measured flux_neutron;  // E_n >= 50 MeV, m^-2 h^-1
    Measured flux_muon;     // E_mu >= 15 MeV, m^-2 h^-1
    double ref_pressure_hpa = 0.0;
    std::array<BandModel, 3> bands{};

    const BandModel& band(EnergyBand b) const { return bands[band_index(b)]; }
};

/// One violated invariant found by validate_catalog.
struct Finding {
    std::string site_code;
    std::string field;
    std::string observed;
    std::string expected;
    std::string message;
};

/// Column header of the catalog file, in order.
extern const std::array<std::string_view, 19> kCatalogColumns;

/// Syntax-level parse of a catalog document: no invariant checks beyond field presence.
/// Throws ParseError (with line and field) or ValidationError("no sites").
std::vector<SiteRecord> parse_catalog(std::string_view document);

/// Every per-site and cross-site invariant; empty for the shipped catalog.
std::vector<Finding> validate_catalog(std::span<const SiteRecord> sites);

/// Canonical document: header plus one row per site, shortest round-trip numbers, no comments.
std::string serialize_catalog(std::span<const SiteRecord> sites);

/// Immutable, validated set of sites.
class SiteCatalog {
public:
    /// parse_catalog + validate_catalog; the first finding becomes a ValidationError.
    static SiteCatalog load(std::string_view document);
    static SiteCatalog load_file(const std::filesystem::path& path);
    /// The catalog shipped with the repository.
    static SiteCatalog load_default();
    static std::filesystem::path default_path();

    /// Case-insensitive exact match. Throws NotFoundError naming the nearest codes.
    const SiteRecord& get(std::string_view code) const;
    const SiteRecord* find(std::string_view code) const noexcept;

    std::span<const SiteRecord> sites() const noexcept { return sites_; }
    std::size_t size() const noexcept { return sites_.size(); }

    std::string serialize() const { return serialize_catalog(sites_); }
    /// Content hash of the canonical serialization.
    const std::string& version() const noexcept { return version_; }

private:
    explicit SiteCatalog(std::vector<SiteRecord> sites);

    std::vector<SiteRecord> sites_;
    std::string version_;
};

}  // namespace nrisk
