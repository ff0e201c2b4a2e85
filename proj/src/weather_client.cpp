#include "nrisk/weather_client.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "nrisk/error.hpp"
#include "nrisk/text.hpp"

namespace nrisk {

std::optional<WeatherClientConfig> WeatherClientConfig::from_environment() {
    const char* url = std::getenv("NRISK_WEATHER_URL");
    if (!url || !*url) return std::nullopt;
    WeatherClientConfig c;
    c.endpoint = url;
    if (const char* key = std::getenv("NRISK_WEATHER_KEY")) c.api_key = key;
    return c;
}

namespace {

class HttplibTransport final : public WeatherTransport {
public:
    explicit HttplibTransport(std::string base) : client_(base) {
        client_.set_connection_timeout(5);
        client_.set_read_timeout(10);
    }

    HttpResponse get(const std::string& path_and_query) override {
        auto res = client_.Get(path_and_query);
        if (!res) throw TransportError("weather request failed: " + httplib::to_string(res.error()));
        return {res->status, res->body};
    }

private:
    httplib::Client client_;
};

std::int64_t system_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

// "http://host:port/path" -> ("http://host:port", "/path")
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const std::size_t scheme = endpoint.find("://");
    const std::size_t start = scheme == std::string::npos ? 0 : scheme + 3;
    const std::size_t slash = endpoint.find('/', start);
    if (slash == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

}  // namespace

WeatherClient::WeatherClient(WeatherClientConfig config, std::shared_ptr<WeatherTransport> transport,
                             Sleeper sleeper, Clock clock)
    : config_(std::move(config)), transport_(std::move(transport)), sleep_(std::move(sleeper)),
      now_(std::move(clock)) {
    if (!transport_) throw Error("weather client needs a transport");
    if (config_.max_attempts < 1) config_.max_attempts = 1;
    if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (!now_) now_ = system_now;
}

WeatherClient WeatherClient::http(WeatherClientConfig config) {
    auto base = split_endpoint(config.endpoint).first;
    return WeatherClient(std::move(config), std::make_shared<HttplibTransport>(base));
}

std::string WeatherClient::request_path(double lat, double lon) const {
    char coords[96];
    std::snprintf(coords, sizeof coords, "latitude=%.4f&longitude=%.4f", lat, lon);
    std::string path = split_endpoint(config_.endpoint).second;
    path += path.find('?') == std::string::npos ? '?' : '&';
    path += coords;
    path += "&current=surface_pressure,pressure_msl&timeformat=unixtime";
    if (!config_.api_key.empty()) path += "&apikey=" + config_.api_key;
    return path;
}

PressureSample parse_weather_payload(const std::string& body, const std::string& source) {
    const auto root = nlohmann::json::parse(body, nullptr, false);
    if (root.is_discarded() || !root.is_object()) throw ParseError(1, "", "malformed payload: not a JSON object");
    const auto& obj = root.contains("current") && root["current"].is_object() ? root["current"] : root;

    PressureSample s;
    s.source = source;
    if (auto it = obj.find("surface_pressure"); it != obj.end() && it->is_number()) {
        s.pressure_hpa = it->get<double>();
        s.kind = PressureKind::Station;
    } else if (auto it2 = obj.find("pressure_msl"); it2 != obj.end() && it2->is_number()) {
        s.pressure_hpa = it2->get<double>();
        s.kind = PressureKind::MeanSeaLevel;
    } else {
        throw ParseError(1, "pressure_msl", "malformed payload: no pressure field");
    }
    if (!(s.pressure_hpa > 300.0 && s.pressure_hpa < 1100.0))
        throw ParseError(1, "pressure", "malformed payload: pressure out of range");

    const auto t = obj.find("time");
    if (t == obj.end()) throw ParseError(1, "time", "malformed payload: no observation time");
    if (t->is_number_integer()) {
        s.timestamp = t->get<std::int64_t>();
    } else if (t->is_string()) {
        auto ts = text::parse_iso8601(t->get<std::string>());
        if (!ts) throw ParseError(1, "time", "malformed payload: unreadable observation time");
        s.timestamp = *ts;
    } else {
        throw ParseError(1, "time", "malformed payload: unreadable observation time");
    }
    return s;
}

LiveReading WeatherClient::fetch_current_pressure(double lat, double lon) const {
    if (!(std::abs(lat) <= 90.0) || !(std::abs(lon) <= 180.0)) throw DomainError("coordinates out of range");
    const std::string path = request_path(lat, lon);
    std::chrono::milliseconds backoff = config_.initial_backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        HttpResponse res;
        try {
            res = transport_->get(path);
        } catch (const TransportError& e) {
            last_error = e.what();
            res.status = 0;
        }
        if (res.status >= 200 && res.status < 300) {
            LiveReading r{parse_weather_payload(res.body, "weather:" + split_endpoint(config_.endpoint).first), false};
            r.stale = now_() - r.sample.timestamp > config_.stale_after.count();
            return r;
        }
        if (res.status >= 400 && res.status < 500)
            throw TransportError("weather provider rejected the request: HTTP " + std::to_string(res.status));
        if (res.status != 0) last_error = "HTTP " + std::to_string(res.status);
        if (attempt < config_.max_attempts) {
            sleep_(backoff);
            backoff *= 2;
        }
    }
    throw TransportError("weather fetch failed after " + std::to_string(config_.max_attempts) +
                         " attempts: " + last_error);
}

}  // namespace nrisk
