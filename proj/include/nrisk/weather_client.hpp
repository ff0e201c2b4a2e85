#pragma once

// Live surface-pressure feed. The network sits behind WeatherTransport so tests
// can substitute a canned responder.
//
// Reference mapping (generic JSON forecast API, Open-Meteo style): the response is
// either flat or nested under "current", with
//   "surface_pressure": hPa   -> station kind (preferred)
//   "pressure_msl":     hPa   -> mean-sea-level kind
//   "time":             ISO-8601 UTC string or unix seconds

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "nrisk/ingest.hpp"

namespace nrisk {

struct HttpResponse {
    int status = 0;
    std::string body;
};

class WeatherTransport {
public:
    virtual ~WeatherTransport() = default;
    /// Throws TransportError on connection failure or timeout.
    virtual HttpResponse get(const std::string& path_and_query) = 0;
};

struct WeatherClientConfig {
    std::string endpoint;  // e.g. "http://host:8080/v1/forecast"
    std::string api_key;   // optional, sent as &apikey=
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::seconds stale_after{3 * 3600};

    /// Reads NRISK_WEATHER_URL and NRISK_WEATHER_KEY; nullopt if the URL is unset.
    static std::optional<WeatherClientConfig> from_environment();
};

struct LiveReading {
    PressureSample sample;
    bool stale = false;  // observation older than stale_after
};

class WeatherClient {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;
    using Clock = std::function<std::int64_t()>;  // UTC seconds

    WeatherClient(WeatherClientConfig config, std::shared_ptr<WeatherTransport> transport,
                  Sleeper sleeper = {}, Clock clock = {});

    /// Plain-HTTP transport built on cpp-httplib for the configured endpoint.
    static WeatherClient http(WeatherClientConfig config);

    const WeatherClientConfig& config() const noexcept { return config_; }
    std::string request_path(double lat, double lon) const;

    LiveReading fetch_current_pressure(double lat, double lon) const;

private:
    WeatherClientConfig config_;
    std::shared_ptr<WeatherTransport> transport_;
    Sleeper sleep_;
    Clock now_;
};

/// Maps a provider payload to a sample; throws ParseError("malformed payload") on failure.
PressureSample parse_weather_payload(const std::string& body, const std::string& source);

}  // namespace nrisk
