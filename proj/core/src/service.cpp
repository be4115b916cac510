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

#include "mx/service.hpp"

#include <spdlog/spdlog.h>

#include "mx/openapi.hpp"

namespace mx {

std::shared_ptr<spdlog::logger> access_logger();

namespace {

const Json kHealthOk = Json{{"status", "ok"}};

ParsedRequest parse_text_request(const HttpRequest& request) {
  Json body;
  try {
    body = Json::parse(request.body);
  } catch (const Json::parse_error&) {
    throw RequestError(400, "request body is not valid JSON");
  }
  if (!body.is_object()) throw RequestError(400, "request body must be a JSON object");
  auto text = body.find("text");
  if (text == body.end()) throw RequestError(400, "missing field \"text\"");
  if (!text->is_array()) throw RequestError(400, "field \"text\" must be an array of strings");
  if (text->empty()) throw RequestError(422, "field \"text\" must contain at least one instance");
  std::vector<std::string> instances;
  instances.reserve(text->size());
  for (const auto& item : *text) {
    if (!item.is_string()) throw RequestError(400, "every entry of \"text\" must be a string");
    instances.push_back(item.get<std::string>());
  }
  return ParsedRequest{std::move(instances), request.content_type};
}

ParsedRequest parse_image_request(const HttpRequest& request, const std::string& mt) {
  if (mt == "multipart/form-data") {
    const FormPart* image = nullptr;
    for (const auto& part : request.parts) {
      if (part.name != "image") continue;
      if (image != nullptr) throw RequestError(400, "multipart field \"image\" given more than once");
      image = &part;
    }
    if (image == nullptr) throw RequestError(400, "missing multipart field \"image\"");
    if (image->content.empty()) throw RequestError(422, "multipart field \"image\" is empty");
    return ParsedRequest{ImageBytes(image->content.begin(), image->content.end()), request.content_type};
  }
  if (request.body.empty()) throw RequestError(422, "request body is empty");
  return ParsedRequest{ImageBytes(request.body.begin(), request.body.end()), request.content_type};
}

}  // namespace

std::optional<LogLevel> log_level_from_string(std::string_view name) {
  if (name == "trace") return LogLevel::kTrace;
  if (name == "debug") return LogLevel::kDebug;
  if (name == "info") return LogLevel::kInfo;
  if (name == "warn") return LogLevel::kWarn;
  if (name == "error") return LogLevel::kError;
  if (name == "off") return LogLevel::kOff;
  return std::nullopt;
}

void set_log_level(LogLevel level) {
  static constexpr spdlog::level::level_enum kLevels[] = {
      spdlog::level::trace, spdlog::level::debug, spdlog::level::info,
      spdlog::level::warn,  spdlog::level::err,   spdlog::level::off};
  access_logger()->set_level(kLevels[static_cast<int>(level)]);
}

void validate(const ServiceConfig& config) {
  if (config.max_body_bytes < kMinMaxBodyBytes) {
    throw ValidationError("max_body_bytes must be at least " + std::to_string(kMinMaxBodyBytes));
  }
  if (config.port < 0 || config.port > 65535) throw ValidationError("port must be in 0..65535");
}

ModelService::ModelService(std::size_t max_body_bytes) : max_body_bytes_(max_body_bytes) {}

void ModelService::set_model(std::shared_ptr<const ModelWrapper> wrapper) {
  auto loaded = std::make_shared<Loaded>();
  loaded->metadata_body = to_wire(to_json(wrapper->metadata()));
  loaded->openapi_body = to_wire(build_openapi(wrapper->metadata(), wrapper->io()));
  loaded->wrapper = std::move(wrapper);
  std::lock_guard lock(mutex_);
  loaded_ = std::move(loaded);
}

bool ModelService::ready() const { return loaded() != nullptr; }

std::shared_ptr<const ModelService::Loaded> ModelService::loaded() const {
  std::lock_guard lock(mutex_);
  return loaded_;
}

HttpResponse ModelService::handle(const HttpRequest& request) const {
  const auto& m = request.method;
  const auto& p = request.path;
  const bool get = m == "GET" || m == "HEAD";
  if (p == "/health" && get) return handle_health(m == "HEAD");
  if (p == "/model/metadata" && get) return handle_metadata();
  if (p == "/swagger.json" && get) return handle_openapi();
  if (p == "/model/predict" && m == "POST") return handle_predict(request);
  return HttpResponse::error(404, "no route for " + m + " " + p);
}

HttpResponse ModelService::handle_metadata() const {
  auto l = loaded();
  if (!l) return HttpResponse::error(503, "model is loading");
  return HttpResponse{200, "application/json", l->metadata_body};
}

HttpResponse ModelService::handle_openapi() const {
  auto l = loaded();
  if (!l) return HttpResponse::error(503, "model is loading");
  return HttpResponse{200, "application/json", l->openapi_body};
}

HttpResponse ModelService::handle_health(bool head_only) const {
  auto response = ready() ? HttpResponse::json(200, kHealthOk)
                          : HttpResponse::error(503, "model is loading");
  if (head_only) response.body.clear();
  return response;
}

HttpResponse ModelService::handle_predict(const HttpRequest& request) const {
  auto l = loaded();
  if (!l) return HttpResponse::error(503, "model is loading");
  ParsedRequest parsed;
  try {
    parsed = negotiate(l->wrapper->io(), request, max_body_bytes_);
  } catch (const RequestError& e) {
    return HttpResponse::error(e.code(), e.what());
  }
  const auto envelope = run_pipeline(*l->wrapper, parsed);
  return HttpResponse{envelope.http_status(), "application/json", envelope.serialize()};
}

ParsedRequest ModelService::negotiate(const IoDescriptor& io, const HttpRequest& request,
                                      std::size_t max_body_bytes) {
  std::size_t size = request.body.size();
  for (const auto& part : request.parts) size += part.content.size();
  if (size > max_body_bytes) {
    throw RequestError(413, "request body exceeds " + std::to_string(max_body_bytes) + " bytes");
  }
  const auto mt = media_type(request.content_type);
  if (mt.empty() || !io.accepts(mt)) {
    std::string accepted;
    for (const auto& t : io.accepted_content_types) accepted += (accepted.empty() ? "" : ", ") + t;
    throw RequestError(415, "unsupported content type '" + request.content_type + "' (accepted: " +
                                accepted + ")");
  }
  if (io.input_kind == InputKind::kJsonText) return parse_text_request(request);
  return parse_image_request(request, mt);
}

ModelServer::ModelServer(const ServiceConfig& config) {
  validate(config);
  service_ = std::make_shared<ModelService>(config.max_body_bytes);
  HttpServerOptions options;
  options.host = config.host;
  options.port = config.port;
  options.max_body_bytes = config.max_body_bytes;
  options.log_name = "model";
  server_ = std::make_unique<HttpServer>(
      [service = service_](const HttpRequest& r) { return service->handle(r); }, options);
}

ModelServer::~ModelServer() { stop(); }

int ModelServer::start() {
  const int port = server_->bind();
  server_->start();
  return port;
}

void ModelServer::load(std::shared_ptr<const ModelWrapper> wrapper) {
  service_->set_model(std::move(wrapper));
}

void ModelServer::stop() { server_->stop(); }

}  // namespace mx
