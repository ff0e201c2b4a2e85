#include "nrisk/service.hpp"

#include <httplib.h>

#include "nrisk/atmosphere.hpp"
#include "nrisk/barometric.hpp"
#include "nrisk/error.hpp"
#include "nrisk/json_io.hpp"
#include "nrisk/reliability.hpp"
#include "nrisk/text.hpp"

namespace nrisk {

namespace {

ApiResponse error_response(int status, const std::string& message) {
    return {status, {{"error", message}}};
}

class BadRequest : public Error {
public:
    using Error::Error;
};

std::optional<std::string> param(const QueryParams& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
}

std::string require(const QueryParams& params, const std::string& key) {
    auto v = param(params, key);
    if (!v || v->empty()) throw BadRequest("missing query parameter '" + key + "'");
    return *v;
}

double number(const std::string& key, const std::string& value) {
    auto v = text::parse_double(value);
    if (!v) throw BadRequest("query parameter '" + key + "' is not a number");
    return *v;
}

EnergyBand band_param(const QueryParams& params, EnergyBand fallback) {
    auto v = param(params, "band");
    if (!v) return fallback;
    auto b = parse_band(*v);
    if (!b) throw BadRequest("band must be 0, 1 or 2");
    return *b;
}

std::int64_t now_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

DeviceSensitivity builtin_sdc() {
    for (auto& d : builtin_sensitivities())
        if (d.kind == ErrorKind::SDC) return d;
    throw Error("no built-in SDC cross-section");
}

}  // namespace

Service::Service(SiteCatalog catalog) : catalog_(std::move(catalog)) {}

Service::~Service() {
    stop_polling();
    stop();
}

ApiResponse Service::handle(const std::string& path, const QueryParams& params) const {
    try {
        if (path == "/healthz")
            return {200, {{"status", "ok"}, {"sites", catalog_.size()}, {"catalog_version", catalog_.version()}}};
        if (path == "/sites") {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& s : catalog_.sites()) arr.push_back(to_json(s));
            return {200, arr};
        }
        if (path.starts_with("/sites/")) return {200, to_json(catalog_.get(path.substr(7)))};
        if (path.starts_with("/now/")) return now(path.substr(5));
        if (path == "/flux") {
            const SiteRecord& site = catalog_.get(require(params, "site"));
            const double p = number("pressure", require(params, "pressure"));
            return {200, to_json(predict_flux(site, band_param(params, EnergyBand::Full), p))};
        }
        if (path == "/risk") {
            const SiteRecord& site = catalog_.get(require(params, "site"));
            RiskQuery q;
            q.pressure_hpa = number("pressure", require(params, "pressure"));
            q.band = band_param(params, EnergyBand::Mid);
            if (auto f = param(params, "fleet")) {
                auto n = text::parse_int(*f);
                if (!n) throw BadRequest("query parameter 'fleet' is not an integer");
                q.fleet_size = *n;
            }
            if (auto c = param(params, "ckpt_cost")) q.checkpoint_cost_s = number("ckpt_cost", *c);
            DeviceSensitivity sens = builtin_sdc();
            if (auto s = param(params, "sigma")) {
                sens = {"user-supplied", ErrorKind::SDC, number("sigma", *s), 0.0, "query parameter"};
            }
            const std::vector<DeviceSensitivity> list{sens};
            return {200, to_json(assess_risk(site, list, q))};
        }
        return error_response(404, "no such endpoint: " + path);
    } catch (const NotFoundError& e) {
        return error_response(404, e.what());
    } catch (const Error& e) {
        return error_response(400, e.what());
    }
}

ApiResponse Service::now(const std::string& code) const {
    const SiteRecord& site = catalog_.get(code);
    std::lock_guard lock(mutex_);
    auto it = latest_.find(site.code);
    if (it == latest_.end()) {
        auto err = poll_errors_.find(site.code);
        return error_response(503, err != poll_errors_.end() ? "live feed unavailable: " + err->second
                                                             : "no live observation yet for " + site.code);
    }
    const bool stale = it->second.stale || now_seconds() - it->second.record.timestamp > polling_.stale_after.count();
    if (stale) {
        auto r = error_response(503, "live feed is stale for " + site.code);
        r.body["last"] = to_json(it->second.record);
        return r;
    }
    return {200, to_json(it->second.record)};
}

void Service::poll_once() {
    if (!client_) return;
    const auto shape = LinsleyAtmosphere::us_standard();
    const double sigma = builtin_sdc().sigma_cm2;
    for (const std::string& code : polling_.site_codes) {
        try {
            const SiteRecord& site = catalog_.get(code);
            const LiveReading reading = client_->fetch_current_pressure(site.latitude_deg, site.longitude_deg);
            double station = reading.sample.pressure_hpa;
            std::string source = reading.sample.source;
            if (reading.sample.kind == PressureKind::MeanSeaLevel) {
                station = msl_to_station_pressure(station, std::max(0.0, site.altitude_m), shape);
                source += " (msl->station via US-standard Linsley atmosphere)";
            }
            ForecastRecord rec = evaluate_forecast(catalog_, site.code, EnergyBand::Mid, station, sigma,
                                                   reading.sample.timestamp, source);
            if (log_) log_->append(rec);
            std::lock_guard lock(mutex_);
            latest_[site.code] = {std::move(rec), reading.stale};
            poll_errors_.erase(site.code);
        } catch (const Error& e) {
            std::lock_guard lock(mutex_);
            poll_errors_[code] = e.what();
        }
    }
}

void Service::start_polling(WeatherClient client, PollingConfig config) {
    stop_polling();
    client_.emplace(std::move(client));
    polling_ = std::move(config);
    if (polling_.log_path) log_ = std::make_unique<ForecastLog>(*polling_.log_path);
    {
        std::lock_guard lock(mutex_);
        stopping_ = false;
    }
    poll_thread_ = std::thread([this] {
        std::unique_lock lock(mutex_);
        while (!stopping_) {
            lock.unlock();
            poll_once();
            lock.lock();
            wake_.wait_for(lock, polling_.interval, [this] { return stopping_; });
        }
    });
}

void Service::stop_polling() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    wake_.notify_all();
    if (poll_thread_.joinable()) poll_thread_.join();
}

void Service::install_routes() {
    server_ = std::make_unique<httplib::Server>();
    server_->Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
        QueryParams params(req.params.begin(), req.params.end());
        const ApiResponse r = handle(req.path, params);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    });
}

bool Service::listen(const std::string& host, int port) {
    install_routes();
    return server_->listen(host, port);
}

int Service::start_background(const std::string& host) {
    install_routes();
    const int port = server_->bind_to_any_port(host);
    if (port <= 0) throw Error("cannot bind HTTP server on " + host);
    server_thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port;
}

void Service::stop() {
    if (server_) server_->stop();
    if (server_thread_.joinable()) server_thread_.join();
}

}  // namespace nrisk
