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

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

#include "mx/http.hpp"
#include "mx/wrapper.hpp"

namespace mx {

inline constexpr std::size_t kDefaultMaxBodyBytes = 4'194'304;
inline constexpr std::size_t kMinMaxBodyBytes = 1024;

enum class LogLevel { kTrace, kDebug, kInfo, kWarn, kError, kOff };

std::optional<LogLevel> log_level_from_string(std::string_view name);

/// Sets the level of the access/diagnostic log (written to stderr).
void set_log_level(LogLevel level);

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 5000;
  std::filesystem::path model_dir;
  std::size_t max_body_bytes = kDefaultMaxBodyBytes;
  LogLevel log_level = LogLevel::kInfo;
};

/// Throws ValidationError if max_body_bytes < 1024 or the port is out of range.
void validate(const ServiceConfig& config);

/// Thrown by negotiate() with the HTTP code the request deserves.
class RequestError : public Error {
 public:
  RequestError(int code, const std::string& message) : Error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

/// The standard endpoint set for one model:
///   GET  /model/metadata   metadata card
///   POST /model/predict    prediction envelope
///   GET  /health           {"status":"ok"} once the model is loaded, 503 before
///   GET  /swagger.json     OpenAPI document
///
/// Until set_model() is called every model endpoint answers 503. After
/// that the wrapper is shared read-only between request threads.
class ModelService {
 public:
  explicit ModelService(std::size_t max_body_bytes = kDefaultMaxBodyBytes);

  /// Installs the wrapper and marks the service ready. Throws
  /// ValidationError if the wrapper's metadata is invalid.
  void set_model(std::shared_ptr<const ModelWrapper> wrapper);
  bool ready() const;

  HttpResponse handle(const HttpRequest& request) const;

  HttpResponse handle_metadata() const;
  HttpResponse handle_predict(const HttpRequest& request) const;
  HttpResponse handle_health(bool head_only = false) const;
  HttpResponse handle_openapi() const;

  /// Content negotiation against the model's IoDescriptor. Throws
  /// RequestError (413, 415, 400 or 422).
  static ParsedRequest negotiate(const IoDescriptor& io, const HttpRequest& request,
                                 std::size_t max_body_bytes);

  std::size_t max_body_bytes() const { return max_body_bytes_; }

 private:
  struct Loaded {
    std::shared_ptr<const ModelWrapper> wrapper;
    std::string metadata_body;
    std::string openapi_body;
  };

  std::shared_ptr<const Loaded> loaded() const;

  const std::size_t max_body_bytes_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Loaded> loaded_;
};

/// A ModelService bound to a socket.
class ModelServer {
 public:
  explicit ModelServer(const ServiceConfig& config);
  ~ModelServer();

  /// Binds and starts serving (503 until load()). Returns the bound port.
  int start();
  void load(std::shared_ptr<const ModelWrapper> wrapper);
  void stop();

  ModelService& service() { return *service_; }
  std::string base_url() const { return server_->base_url(); }
  int port() const { return server_->port(); }

 private:
  std::shared_ptr<ModelService> service_;
  std::unique_ptr<HttpServer> server_;
};

}  // namespace mx
