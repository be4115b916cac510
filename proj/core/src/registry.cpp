// Copyright 2026 The MX Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mx/registry.hpp"

#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <spdlog/spdlog.h>

#include "mx/envelope.hpp"

namespace mx {

std::shared_ptr<spdlog::logger> access_logger();

namespace {

Json read_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": cannot open registry store");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw Error(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(tmp.string() + ": cannot write registry store");
    out << contents;
    out.flush();
    if (!out) throw Error(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("record: missing field '") + key + "'");
  return *it;
}

}  // namespace

std::string_view to_string(Health health) {
  switch (health) {
    case Health::kUnknown:
      return "unknown";
    case Health::kHealthy:
      return "healthy";
    case Health::kUnhealthy:
      return "unhealthy";
  }
  return "unknown";
}

std::optional<Health> health_from_string(std::string_view name) {
  if (name == "unknown") return Health::kUnknown;
  if (name == "healthy") return Health::kHealthy;
  if (name == "unhealthy") return Health::kUnhealthy;
  return std::nullopt;
}

std::string format_timestamp(Clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000 - (ms % 1000 < 0 ? 1 : 0));
  const int millis = static_cast<int>(((ms % 1000) + 1000) % 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0')
      << millis << 'Z';
  return out.str();
}

Clock::time_point parse_timestamp(std::string_view text) {
  std::tm tm{};
  std::istringstream in{std::string(text)};
  in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%S");
  if (in.fail()) throw ValidationError("bad timestamp '" + std::string(text) + "'");
  int millis = 0;
  if (in.peek() == '.') {
    in.get();
    std::string digits;
    while (std::isdigit(in.peek())) digits.push_back(static_cast<char>(in.get()));
    if (digits.empty() || digits.size() > 3) {
      throw ValidationError("bad timestamp '" + std::string(text) + "'");
    }
    while (digits.size() < 3) digits.push_back('0');
    millis = std::stoi(digits);
  }
  if (in.get() != 'Z') throw ValidationError("bad timestamp '" + std::string(text) + "' (expected UTC 'Z')");
  const std::time_t secs = timegm(&tm);
  return Clock::time_point(std::chrono::seconds(secs)) + std::chrono::milliseconds(millis);
}

Json to_json(const ModelRecord& record) {
  return Json{{"id", record.id},
              {"url", record.url},
              {"metadata", record.metadata ? to_json(*record.metadata) : Json(nullptr)},
              {"health", std::string(to_string(record.health))},
              {"consecutive_failures", record.consecutive_failures},
              {"last_checked",
               record.last_checked ? Json(format_timestamp(*record.last_checked)) : Json(nullptr)}};
}

ModelRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("record: expected a JSON object");
  ModelRecord r;
  const auto& id = field(j, "id");
  const auto& url = field(j, "url");
  if (!id.is_string() || !url.is_string()) throw ValidationError("record: id and url must be strings");
  r.id = id.get<std::string>();
  r.url = url.get<std::string>();
  if (auto it = j.find("metadata"); it != j.end() && !it->is_null()) r.metadata = metadata_from_json(*it);
  if (auto it = j.find("health"); it != j.end()) {
    auto h = it->is_string() ? health_from_string(it->get<std::string>()) : std::nullopt;
    if (!h) throw ValidationError("record: bad health value");
    r.health = *h;
  }
  if (auto it = j.find("consecutive_failures"); it != j.end()) {
    if (!it->is_number_integer() || it->get<int>() < 0) {
      throw ValidationError("record: consecutive_failures must be a non-negative integer");
    }
    r.consecutive_failures = it->get<int>();
  }
  if (auto it = j.find("last_checked"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError("record: last_checked must be a string");
    r.last_checked = parse_timestamp(it->get<std::string>());
  }
  return r;
}

void validate(const RegistryConfig& config) {
  if (config.poll_interval.count() <= 0) throw ValidationError("poll_interval must be positive");
  if (config.failure_threshold < 1) throw ValidationError("failure_threshold must be at least 1");
  if (config.probe_timeout.count() <= 0) throw ValidationError("probe_timeout must be positive");
}

std::optional<ModelMetadata> HttpMetadataProber::probe(const std::string& url,
                                                       std::chrono::milliseconds timeout) const {
  try {
    const auto response = http_get(url, "/model/metadata", timeout);
    if (response.status != 200) return std::nullopt;
    auto metadata = metadata_from_json(Json::parse(response.body));
    if (!validate_metadata(metadata).empty()) return std::nullopt;
    return metadata;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

ModelRecord apply_probe(ModelRecord record, const std::optional<ModelMetadata>& probed,
                        int failure_threshold, Clock::time_point now) {
  record.last_checked = now;
  if (probed && probed->id == record.id) {
    record.health = Health::kHealthy;
    record.consecutive_failures = 0;
    record.metadata = *probed;
    return record;
  }
  record.consecutive_failures += 1;
  if (record.consecutive_failures >= failure_threshold) record.health = Health::kUnhealthy;
  return record;
}

ModelRecord poll_health(const ModelRecord& record, const RegistryConfig& config,
                        const MetadataProber& prober) {
  auto probed = prober.probe(record.url, config.probe_timeout);
  return apply_probe(record, probed, config.failure_threshold, Clock::now());
}

Registry::Registry(RegistryConfig config, std::shared_ptr<const MetadataProber> prober)
    : config_(std::move(config)), prober_(std::move(prober)) {
  validate(config_);
  if (!prober_) throw ValidationError("registry needs a metadata prober");
  if (!config_.store_path.empty() && std::filesystem::exists(config_.store_path)) load_store();
}

Registry::~Registry() { stop_polling(); }

void Registry::load_store() {
  const Json store = read_store(config_.store_path);
  const auto where = config_.store_path.string();
  if (!store.is_object() || !store.contains("version") || !store.contains("models")) {
    throw Error(where + ": expected {\"version\": 1, \"models\": [...]}");
  }
  if (store.at("version") != kStoreVersion) {
    throw Error(where + ": unsupported store version " + store.at("version").dump());
  }
  if (!store.at("models").is_array()) throw Error(where + ": field 'models' must be an array");
  std::unique_lock lock(catalog_mutex_);
  for (const auto& item : store.at("models")) {
    ModelRecord record;
    try {
      record = record_from_json(item);
    } catch (const ValidationError& e) {
      throw Error(where + ": " + e.what());
    }
    record.health = Health::kUnknown;
    record.consecutive_failures = 0;
    records_.insert_or_assign(record.id, std::move(record));
  }
}

void Registry::save_store_locked() const {
  if (config_.store_path.empty()) return;
  Json models = Json::array();
  for (const auto& [id, record] : records_) models.push_back(to_json(record));
  write_atomically(config_.store_path,
                   Json{{"version", kStoreVersion}, {"models", std::move(models)}}.dump(2) + "\n");
}

ModelRecord Registry::register_model(const std::string& id, const std::string& url) {
  if (!is_valid_model_id(id)) {
    throw ValidationError("id '" + id + "' must match [a-z0-9][a-z0-9-]* with length 1-64");
  }
  auto base = normalize_base_url(url);
  if (!base) throw ValidationError("url '" + url + "' is not an http base URL");
  {
    std::shared_lock lock(catalog_mutex_);
    if (records_.contains(id)) throw ConflictError("model '" + id + "' is already registered");
  }

  ModelRecord record;
  record.id = id;
  record.url = *base;
  record.last_checked = Clock::now();
  if (auto probed = prober_->probe(record.url, config_.probe_timeout)) {
    if (probed->id != id) {
      throw MetadataMismatchError("service at " + record.url + " reports id '" + probed->id +
                                  "', expected '" + id + "'");
    }
    record.metadata = std::move(probed);
    record.health = Health::kHealthy;
  }

  std::unique_lock lock(catalog_mutex_);
  if (records_.contains(id)) throw ConflictError("model '" + id + "' is already registered");
  records_.emplace(id, record);
  try {
    save_store_locked();
  } catch (...) {
    records_.erase(id);
    throw;
  }
  return record;
}

void Registry::deregister(const std::string& id) {
  std::unique_lock lock(catalog_mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) throw NotFoundError("model '" + id + "' is not registered");
  auto removed = std::move(it->second);
  records_.erase(it);
  try {
    save_store_locked();
  } catch (...) {
    records_.emplace(id, std::move(removed));
    throw;
  }
}

std::vector<ModelRecord> Registry::list_models() const {
  std::shared_lock lock(catalog_mutex_);
  std::vector<ModelRecord> out;
  out.reserve(records_.size());
  for (const auto& [id, record] : records_) out.push_back(record);
  return out;
}

std::optional<ModelRecord> Registry::find(const std::string& id) const {
  std::shared_lock lock(catalog_mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void Registry::poll_all() {
  std::lock_guard cycle(poll_cycle_mutex_);
  const auto snapshot = list_models();
  std::vector<ModelRecord> updates;
  updates.reserve(snapshot.size());
  for (const auto& record : snapshot) updates.push_back(poll_health(record, config_, *prober_));

  std::vector<ModelRecord> applied;
  {
    std::unique_lock lock(catalog_mutex_);
    bool metadata_changed = false;
    for (auto& updated : updates) {
      auto it = records_.find(updated.id);
      // Deregistered (or re-registered elsewhere) while we were probing.
      if (it == records_.end() || it->second.url != updated.url) continue;
      metadata_changed = metadata_changed || it->second.metadata != updated.metadata;
      it->second = updated;
      applied.push_back(std::move(updated));
    }
    if (metadata_changed) {
      try {
        save_store_locked();
      } catch (const std::exception& e) {
        access_logger()->error("registry: {}", e.what());
      }
    }
  }

  std::function<void(const ModelRecord&)> observer;
  {
    std::lock_guard lock(observer_mutex_);
    observer = observer_;
  }
  for (const auto& record : applied) {
    access_logger()->debug("registry: poll {} -> {} ({} failures)", record.id,
                           to_string(record.health), record.consecutive_failures);
    if (observer) observer(record);
  }
}

void Registry::start_polling() {
  std::lock_guard lock(poll_mutex_);
  if (poller_.joinable()) return;
  poll_stop_ = false;
  poller_ = std::thread([this] {
    std::unique_lock lock(poll_mutex_);
    while (!poll_cv_.wait_for(lock, config_.poll_interval, [this] { return poll_stop_; })) {
      lock.unlock();
      poll_all();
      lock.lock();
    }
  });
}

void Registry::stop_polling() {
  {
    std::lock_guard lock(poll_mutex_);
    poll_stop_ = true;
  }
  poll_cv_.notify_all();
  if (poller_.joinable()) poller_.join();
}

void Registry::set_poll_observer(std::function<void(const ModelRecord&)> observer) {
  std::lock_guard lock(observer_mutex_);
  observer_ = std::move(observer);
}

RegistryApi::RegistryApi(std::shared_ptr<Registry> registry, std::chrono::milliseconds proxy_timeout)
    : registry_(std::move(registry)), proxy_timeout_(proxy_timeout) {}

HttpResponse RegistryApi::handle(const HttpRequest& request) const {
  const auto& m = request.method;
  const std::string_view path = request.path;
  constexpr std::string_view prefix = "/v1/models";

  if (path == "/health" && (m == "GET" || m == "HEAD")) {
    auto r = HttpResponse::json(200, Json{{"status", "ok"}});
    if (m == "HEAD") r.body.clear();
    return r;
  }

  if (path == prefix) {
    if (m == "GET") {
      Json out = Json::array();
      for (const auto& record : registry_->list_models()) out.push_back(to_json(record));
      return HttpResponse::json(200, out);
    }
    if (m == "POST") {
      Json body;
      try {
        body = Json::parse(request.body);
      } catch (const Json::parse_error&) {
        return HttpResponse::error(400, "request body is not valid JSON");
      }
      if (!body.is_object() || !body.contains("id") || !body.contains("url") ||
          !body.at("id").is_string() || !body.at("url").is_string()) {
        return HttpResponse::error(400, "expected {\"id\": string, \"url\": string}");
      }
      try {
        auto record = registry_->register_model(body.at("id").get<std::string>(),
                                                body.at("url").get<std::string>());
        return HttpResponse::json(201, to_json(record));
      } catch (const ConflictError& e) {
        return HttpResponse::error(409, e.what());
      } catch (const MetadataMismatchError& e) {
        return HttpResponse::error(422, e.what());
      } catch (const ValidationError& e) {
        return HttpResponse::error(400, e.what());
      }
    }
    return HttpResponse::error(404, "no route for " + m + " " + request.path);
  }

  if (path.substr(0, prefix.size() + 1) == std::string(prefix) + "/") {
    auto rest = path.substr(prefix.size() + 1);
    constexpr std::string_view predict_suffix = "/predict";
    if (rest.size() > predict_suffix.size() &&
        rest.substr(rest.size() - predict_suffix.size()) == predict_suffix) {
      auto id = std::string(rest.substr(0, rest.size() - predict_suffix.size()));
      if (m == "POST" && id.find('/') == std::string::npos) return proxy_predict(id, request);
    } else if (rest.find('/') == std::string_view::npos && !rest.empty()) {
      const std::string id(rest);
      if (m == "GET") {
        auto record = registry_->find(id);
        if (!record) return HttpResponse::error(404, "model '" + id + "' is not registered");
        return HttpResponse::json(200, to_json(*record));
      }
      if (m == "DELETE") {
        try {
          registry_->deregister(id);
        } catch (const NotFoundError& e) {
          return HttpResponse::error(404, e.what());
        }
        return HttpResponse{204, "", ""};
      }
    }
  }
  return HttpResponse::error(404, "no route for " + m + " " + request.path);
}

HttpResponse RegistryApi::proxy_predict(const std::string& id, const HttpRequest& request) const {
  auto record = registry_->find(id);
  if (!record) return HttpResponse::error(404, "model '" + id + "' is not registered");

  std::string body = request.body;
  if (!request.parts.empty()) {
    // The transport has already split the form; rebuild it on the client's boundary.
    auto boundary = multipart_boundary(request.content_type);
    if (!boundary) return HttpResponse::error(400, "multipart request without a boundary");
    body = encode_multipart(request.parts, *boundary);
  }
  try {
    auto upstream = http_post(record->url, "/model/predict", body, request.content_type, proxy_timeout_);
    return HttpResponse{upstream.status, upstream.content_type, std::move(upstream.body)};
  } catch (const TransportError& e) {
    return HttpResponse::error(502, "upstream " + record->url + " unreachable: " + e.what());
  }
}

RegistryServer::RegistryServer(std::shared_ptr<Registry> registry, RegistryServerOptions options)
    : registry_(std::move(registry)) {
  HttpServerOptions http;
  http.host = options.host;
  http.port = options.port;
  http.max_body_bytes = options.max_body_bytes;
  http.log_name = "registry";
  auto api = std::make_shared<RegistryApi>(registry_);
  server_ = std::make_unique<HttpServer>([api](const HttpRequest& r) { return api->handle(r); }, http);
}

RegistryServer::~RegistryServer() { stop(); }

int RegistryServer::start() {
  const int port = server_->bind();
  server_->start();
  registry_->start_polling();
  return port;
}

void RegistryServer::stop() {
  registry_->stop_polling();
  server_->stop();
}

}  // namespace mx
