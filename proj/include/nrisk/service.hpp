#pragma once

// Read-only HTTP API over the site catalog, plus an optional polling loop that
// turns live surface pressure into logged forecasts.
//
//   GET /healthz
//   GET /sites                 GET /sites/{code}
//   GET /flux?site&pressure&band
//   GET /risk?site&pressure&band&sigma&fleet&ckpt_cost
//   GET /now/{code}            latest polled forecast; 503 while stale

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "nrisk/forecast_log.hpp"
#include "nrisk/site_catalog.hpp"
#include "nrisk/weather_client.hpp"

namespace httplib {
class Server;
}

namespace nrisk {

struct ApiResponse {
    int status = 200;
    nlohmann::ordered_json body;
};

using QueryParams = std::multimap<std::string, std::string>;

struct PollingConfig {
    std::vector<std::string> site_codes;
    std::chrono::seconds interval{15 * 60};
    std::optional<std::filesystem::path> log_path;
    std::chrono::seconds stale_after{3 * 3600};
};

class Service {
public:
    explicit Service(SiteCatalog catalog);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    const SiteCatalog& catalog() const noexcept { return catalog_; }

    /// Request dispatch independent of the HTTP transport.
    ApiResponse handle(const std::string& path, const QueryParams& params) const;

    /// Starts the background poller. The client is owned by the poller thread.
    void start_polling(WeatherClient client, PollingConfig config);
    /// Runs one polling pass synchronously (used by the loop and by tests).
    void poll_once();
    void stop_polling();

    /// Binds and serves until stop(). Returns false if binding failed.
    bool listen(const std::string& host, int port);
    /// Binds to an ephemeral port and serves on a background thread; returns the port.
    int start_background(const std::string& host = "127.0.0.1");
    void stop();

private:
    struct Latest {
        ForecastRecord record;
        bool stale = false;
    };

    ApiResponse now(const std::string& code) const;
    void install_routes();

    SiteCatalog catalog_;
    std::unique_ptr<httplib::Server> server_;
    std::thread server_thread_;

    std::optional<WeatherClient> client_;
    PollingConfig polling_;
    std::unique_ptr<ForecastLog> log_;
    std::thread poll_thread_;
    mutable std::mutex mutex_;
    std::condition_variable wake_;
    bool stopping_ = false;
    std::map<std::string, Latest> latest_;
    std::map<std::string, std::string> poll_errors_;
};

}  // namespace nrisk
