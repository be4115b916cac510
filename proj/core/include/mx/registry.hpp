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

#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "mx/http.hpp"
#include "mx/metadata.hpp"

namespace mx {

/// The service answered, but with metadata for a different id.
class MetadataMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class Health { kUnknown, kHealthy, kUnhealthy };

std::string_view to_string(Health health);
std::optional<Health> health_from_string(std::string_view name);

using Clock = std::chrono::system_clock;

/// One catalog entry of the exchange.
struct ModelRecord {
  std::string id;
  std::string url;
  std::optional<ModelMetadata> metadata;  // snapshot from the last good probe
  Health health = Health::kUnknown;
  int consecutive_failures = 0;
  std::optional<Clock::time_point> last_checked;

  bool operator==(const ModelRecord&) const = default;
};

Json to_json(const ModelRecord& record);
ModelRecord record_from_json(const Json& j);

/// ISO-8601 UTC with millisecond precision, e.g. "2026-01-02T03:04:05.678Z".
std::string format_timestamp(Clock::time_point t);
Clock::time_point parse_timestamp(std::string_view text);

struct RegistryConfig {
  std::chrono::milliseconds poll_interval{30'000};
  int failure_threshold = 3;
  std::chrono::milliseconds probe_timeout{5'000};
  std::filesystem::path store_path;  // empty keeps the catalog in memory only
};

/// Throws ValidationError on a non-positive interval, timeout or threshold.
void validate(const RegistryConfig& config);

/// Fetches {url}/model/metadata. Returns the metadata if the endpoint
/// answered 200 with a valid metadata document, nullopt otherwise.
class MetadataProber {
 public:
  virtual ~MetadataProber() = default;
  virtual std::optional<ModelMetadata> probe(const std::string& url,
                                             std::chrono::milliseconds timeout) const = 0;
};

class HttpMetadataProber final : public MetadataProber {
 public:
  std::optional<ModelMetadata> probe(const std::string& url,
                                     std::chrono::milliseconds timeout) const override;
};

/// Health state machine step. A success (metadata present and its id equal
/// to the record id) makes the record healthy immediately and resets the
/// counter. A failure increments the counter; the record turns unhealthy
/// once the counter reaches failure_threshold and otherwise keeps its
/// previous health.
ModelRecord apply_probe(ModelRecord record, const std::optional<ModelMetadata>& probed,
                        int failure_threshold, Clock::time_point now);

/// Probes the record's service and applies the result.
ModelRecord poll_health(const ModelRecord& record, const RegistryConfig& config,
                        const MetadataProber& prober);

inline constexpr int kStoreVersion = 1;

/// The catalog. Reads run concurrently; register/deregister and poll
/// updates are serialized, and each catalog mutation is persisted to
/// store_path (write temp file, then rename) before the call returns.
///
/// The health poller runs on its own thread and probes without holding the
/// catalog lock, so request handling never waits on a slow service.
class Registry {
 public:
  /// Loads store_path if it exists; loaded records start with health
  /// unknown and a zero failure counter.
  Registry(RegistryConfig config, std::shared_ptr<const MetadataProber> prober);
  ~Registry();

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  /// Probes {url}/model/metadata once. Success stores a healthy record with
  /// the metadata snapshot; probe failure stores health unknown.
  /// Throws ConflictError for a duplicate id, ValidationError for an
  /// invalid id/url and MetadataMismatchError when the probed metadata.id
  /// differs from id.
  ModelRecord register_model(const std::string& id, const std::string& url);

  /// Throws NotFoundError.
  void deregister(const std::string& id);

  /// All records sorted by id.
  std::vector<ModelRecord> list_models() const;
  std::optional<ModelRecord> find(const std::string& id) const;

  /// One poll of every record.
  void poll_all();

  void start_polling();
  void stop_polling();

  /// Called after every poll update, outside the catalog lock.
  void set_poll_observer(std::function<void(const ModelRecord&)> observer);

  const RegistryConfig& config() const { return config_; }

 private:
  void load_store();
  void save_store_locked() const;

  const RegistryConfig config_;
  const std::shared_ptr<const MetadataProber> prober_;

  mutable std::shared_mutex catalog_mutex_;
  std::map<std::string, ModelRecord> records_;

  std::mutex observer_mutex_;
  std::function<void(const ModelRecord&)> observer_;

  std::mutex poll_cycle_mutex_;  // one poll_all at a time

  std::mutex poll_mutex_;
  std::condition_variable poll_cv_;
  bool poll_stop_ = false;
  std::thread poller_;
};

/// REST front-end of the registry:
///   GET    /v1/models               catalog, sorted by id
///   POST   /v1/models               {"id":..,"url":..} -> 201 record
///   GET    /v1/models/{id}          record
///   DELETE /v1/models/{id}          204
///   POST   /v1/models/{id}/predict  forwarded verbatim to {url}/model/predict
///   GET    /health                  {"status":"ok"}
class RegistryApi {
 public:
  explicit RegistryApi(std::shared_ptr<Registry> registry,
                       std::chrono::milliseconds proxy_timeout = std::chrono::seconds(30));

  HttpResponse handle(const HttpRequest& request) const;

  /// Relays the upstream status, content type and body unmodified. Unknown
  /// id gives a 404 envelope; an unreachable upstream gives 502. Health is
  /// advisory: unhealthy records are still forwarded.
  HttpResponse proxy_predict(const std::string& id, const HttpRequest& request) const;

 private:
  std::shared_ptr<Registry> registry_;
  std::chrono::milliseconds proxy_timeout_;
};

struct RegistryServerOptions {
  std::string host = "0.0.0.0";
  int port = 8000;
  std::size_t max_body_bytes = 16 * 1024 * 1024;
};

/// Registry + its REST API on a socket, with the health poller running.
class RegistryServer {
 public:
  RegistryServer(std::shared_ptr<Registry> registry, RegistryServerOptions options);
  ~RegistryServer();

  /// Binds, starts serving and starts the poller. Returns the bound port.
  int start();
  void stop();

  std::string base_url() const { return server_->base_url(); }
  Registry& registry() { return *registry_; }

 private:
  std::shared_ptr<Registry> registry_;
  std::unique_ptr<HttpServer> server_;
};

}  // namespace mx
