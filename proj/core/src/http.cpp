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

#include "mx/http.hpp"

#include <sys/socket.h>

#include <atomic>
#include <chrono>
#include <thread>

#define CPPHTTPLIB_LISTEN_BACKLOG 256
#include <httplib.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "mx/envelope.hpp"
#include "mx/metadata.hpp"

namespace mx {

std::shared_ptr<spdlog::logger> access_logger() {
  static const auto logger = [] {
    auto existing = spdlog::get("mx");
    return existing ? existing : spdlog::stderr_logger_mt("mx");
  }();
  return logger;
}

namespace {

using SteadyClock = std::chrono::steady_clock;

thread_local std::optional<SteadyClock::time_point> request_start;

HttpRequest to_request(const httplib::Request& req) {
  HttpRequest out;
  out.method = req.method;
  out.path = req.path;
  out.content_type = req.get_header_value("Content-Type");
  out.body = req.body;
  for (const auto& [name, file] : req.files) {
    out.parts.push_back(FormPart{file.name, file.filename, file.content_type, file.content});
  }
  return out;
}

void reuse_addr_only(socket_t sock) {
  int yes = 1;
  setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
}

}  // namespace

HttpResponse HttpResponse::json(int status, const Json& body) {
  return HttpResponse{status, "application/json", to_wire(body)};
}

HttpResponse HttpResponse::error(int status, std::string message) {
  return HttpResponse{status, "application/json", error_envelope(status, std::move(message))};
}

struct HttpServer::Impl {
  HttpHandler handler;
  HttpServerOptions options;
  httplib::Server server;
  std::thread thread;
  int port = -1;
  std::atomic<bool> stopped{false};
};

HttpServer::HttpServer(HttpHandler handler, HttpServerOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->handler = std::move(handler);
  impl_->options = std::move(options);
  auto& svr = impl_->server;
  const auto threads = impl_->options.worker_threads;
  svr.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  svr.set_socket_options(reuse_addr_only);
  svr.set_payload_max_length(impl_->options.max_body_bytes);

  auto dispatch = [impl = impl_.get()](const httplib::Request& req, httplib::Response& res) {
    HttpResponse out;
    try {
      out = impl->handler(to_request(req));
    } catch (const std::exception& e) {
      out = HttpResponse::error(500, e.what());
    }
    res.status = out.status;
    if (!out.body.empty() || !out.content_type.empty()) {
      res.set_content(out.body, out.content_type.empty() ? "application/octet-stream" : out.content_type);
    }
  };
  const std::string any = ".*";
  svr.Get(any, dispatch);
  svr.Post(any, dispatch);
  svr.Put(any, dispatch);
  svr.Delete(any, dispatch);
  svr.Patch(any, dispatch);
  svr.Options(any, dispatch);

  svr.set_pre_routing_handler([](const httplib::Request&, httplib::Response&) {
    request_start = SteadyClock::now();
    return httplib::Server::HandlerResponse::Unhandled;
  });

  // Failures raised by the transport itself (oversized or unreadable
  // bodies) still get an error envelope.
  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    if (!is_error_code(res.status)) res.status = 400;
    const std::string message = res.status == 413 ? "request body too large"
                                                  : httplib::status_message(res.status);
    res.set_content(error_envelope(res.status, message), "application/json");
    return httplib::Server::HandlerResponse::Handled;
  });

  svr.set_logger([name = impl_->options.log_name](const httplib::Request& req,
                                                  const httplib::Response& res) {
    double latency_ms = 0.0;
    if (request_start) {
      latency_ms = std::chrono::duration<double, std::milli>(SteadyClock::now() - *request_start).count();
      request_start.reset();
    }
    access_logger()->info("{} {} {} {} {:.3f}ms", name, req.method, req.path, res.status, latency_ms);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& o = impl_->options;
  int port = o.port == 0 ? impl_->server.bind_to_any_port(o.host)
                         : (impl_->server.bind_to_port(o.host, o.port) ? o.port : -1);
  if (port < 0) {
    throw Error("cannot bind " + o.host + ":" + std::to_string(o.port) +
                " (address in use or not available)");
  }
  impl_->port = port;
  return port;
}

void HttpServer::start() {
  if (impl_->port < 0) throw Error("HttpServer::start called before bind");
  impl_->thread = std::thread([impl = impl_.get()] { impl->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  if (impl_->stopped.exchange(true)) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::port() const { return impl_->port; }

std::string HttpServer::base_url() const {
  const auto& host = impl_->options.host;
  const std::string h = (host == "0.0.0.0" || host.empty()) ? "127.0.0.1" : host;
  return "http://" + h + ":" + std::to_string(impl_->port);
}

std::optional<std::string> normalize_base_url(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (url.substr(0, scheme.size()) != scheme) return std::nullopt;
  auto rest = url.substr(scheme.size());
  while (!rest.empty() && rest.back() == '/') rest.remove_suffix(1);
  if (rest.empty() || rest.find('/') != std::string_view::npos) return std::nullopt;
  auto colon = rest.rfind(':');
  if (colon != std::string_view::npos) {
    auto port = rest.substr(colon + 1);
    if (colon == 0 || port.empty() || port.size() > 5) return std::nullopt;
    for (char c : port) {
      if (c < '0' || c > '9') return std::nullopt;
    }
    if (std::stoi(std::string(port)) > 65535) return std::nullopt;
  }
  return std::string(scheme) + std::string(rest);
}

ClientResponse http_request(const std::string& base_url, const std::string& method,
                            const std::string& path, const std::string& body,
                            const std::string& content_type, std::chrono::milliseconds timeout) {
  auto base = normalize_base_url(base_url);
  if (!base) throw TransportError("not an http base URL: " + base_url);
  httplib::Client cli(*base);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  cli.set_keep_alive(false);

  httplib::Result res{nullptr, httplib::Error::Unknown};
  if (method == "GET") {
    res = cli.Get(path);
  } else if (method == "HEAD") {
    res = cli.Head(path);
  } else if (method == "DELETE") {
    res = cli.Delete(path);
  } else if (method == "POST") {
    res = cli.Post(path, body, content_type.empty() ? "application/octet-stream" : content_type);
  } else if (method == "PUT") {
    res = cli.Put(path, body, content_type.empty() ? "application/octet-stream" : content_type);
  } else {
    throw TransportError("unsupported method " + method);
  }
  if (!res) {
    throw TransportError(method + " " + *base + path + ": " + httplib::to_string(res.error()));
  }
  return ClientResponse{res->status, res->get_header_value("Content-Type"), res->body};
}

std::optional<std::string> multipart_boundary(std::string_view content_type) {
  if (media_type(content_type) != "multipart/form-data") return std::nullopt;
  std::string boundary;
  if (!httplib::detail::parse_multipart_boundary(std::string(content_type), boundary)) {
    return std::nullopt;
  }
  return boundary;
}

std::string encode_multipart(const std::vector<FormPart>& parts, const std::string& boundary) {
  std::string out;
  for (const auto& part : parts) {
    out += "--" + boundary + "\r\n";
    out += "Content-Disposition: form-data; name=\"" + part.name + "\"";
    if (!part.filename.empty()) out += "; filename=\"" + part.filename + "\"";
    out += "\r\n";
    if (!part.content_type.empty()) out += "Content-Type: " + part.content_type + "\r\n";
    out += "\r\n";
    out += part.content;
    out += "\r\n";
  }
  out += "--" + boundary + "--\r\n";
  return out;
}

}  // namespace mx
