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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mx/json.hpp"

namespace mx {

struct FormPart {
  std::string name;
  std::string filename;
  std::string content_type;
  std::string content;
};

/// Transport-independent view of an HTTP request. The servers translate the
/// wire request into this so handlers can be exercised without sockets.
struct HttpRequest {
  std::string method = "GET";
  std::string path = "/";
  std::string content_type;
  std::string body;
  std::vector<FormPart> parts;  // populated for multipart/form-data
};

struct HttpResponse {
  int status = 200;
  std::string content_type;
  std::string body;

  static HttpResponse json(int status, const Json& body);
  /// {"status":"error","error":{"code":status,"message":...}}
  static HttpResponse error(int status, std::string message);
};

using HttpHandler = std::function<HttpResponse(const HttpRequest&)>;

struct HttpServerOptions {
  std::string host = "0.0.0.0";
  int port = 0;  // 0 picks an ephemeral port
  std::size_t max_body_bytes = 4 * 1024 * 1024;
  std::size_t worker_threads = 16;
  /// Prefix for access log lines, e.g. "model" or "registry".
  std::string log_name = "http";
};

/// Serves every method and path through one handler.
///
/// Request bodies larger than max_body_bytes are rejected with a 413 error
/// envelope before the handler runs. One access log line is written per
/// request (method, path, status, latency).
class HttpServer {
 public:
  HttpServer(HttpHandler handler, HttpServerOptions options);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket and returns the bound port. Throws Error
  /// when the address cannot be bound.
  int bind();
  /// Starts accepting on a background thread; bind() must have succeeded.
  void start();
  /// Stops accepting and waits for in-flight requests to finish.
  void stop();

  int port() const;
  /// http://127.0.0.1:<port> for wildcard binds, otherwise http://host:port.
  std::string base_url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ClientResponse {
  int status = 0;
  std::string content_type;
  std::string body;
};

/// Thrown when the peer cannot be reached or does not answer in time.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Minimal blocking HTTP/1.1 client over a base URL such as
/// "http://127.0.0.1:5000". Throws TransportError on connection failure,
/// timeout, or an unparsable base URL.
ClientResponse http_request(const std::string& base_url, const std::string& method,
                            const std::string& path, const std::string& body = {},
                            const std::string& content_type = {},
                            std::chrono::milliseconds timeout = std::chrono::seconds(5));

inline ClientResponse http_get(const std::string& base_url, const std::string& path,
                               std::chrono::milliseconds timeout = std::chrono::seconds(5)) {
  return http_request(base_url, "GET", path, {}, {}, timeout);
}

inline ClientResponse http_post(const std::string& base_url, const std::string& path,
                                const std::string& body, const std::string& content_type,
                                std::chrono::milliseconds timeout = std::chrono::seconds(5)) {
  return http_request(base_url, "POST", path, body, content_type, timeout);
}

/// Re-encodes form parts as a multipart/form-data body using boundary.
std::string encode_multipart(const std::vector<FormPart>& parts, const std::string& boundary);

/// The boundary parameter of a multipart content type, or nullopt.
std::optional<std::string> multipart_boundary(std::string_view content_type);

/// Accepts http://host[:port][/], returns it normalized without a trailing
/// slash, or nullopt if it is not an http URL.
std::optional<std::string> normalize_base_url(std::string_view url);

}  // namespace mx
