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

#include "commands.hpp"

#include <csignal>
#include <iostream>

#include "mx/conformance.hpp"
#include "mx/http.hpp"
#include "mx/registry.hpp"
#include "mx/scaffold.hpp"

namespace mx::cli {
namespace {

std::chrono::milliseconds seconds_to_ms(double s) {
  return std::chrono::milliseconds(static_cast<long long>(s * 1000.0 + 0.5));
}

// Blocks SIGINT/SIGTERM here and in every thread started afterwards;
// wait_for_shutdown() collects them with sigwait.
sigset_t block_shutdown_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

void wait_for_shutdown(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

}  // namespace

int run_new(const NewOptions& options) {
  auto kind = template_from_string(options.template_name);
  if (!kind) {
    std::cerr << "mx new: unknown template '" << options.template_name
              << "' (expected text-classifier or object-detector)\n";
    return 2;
  }
  const auto dir = options.dir.empty() ? std::filesystem::path(options.id) : options.dir;
  try {
    for (const auto& path : scaffold(*kind, options.id, dir)) std::cout << "created " << path.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "mx new: " << e.what() << "\n";
    return 1;
  }
  std::cout << "\nNext steps:\n  mx serve --model-dir " << dir.string() << " --port 5000\n"
            << "  mx validate http://127.0.0.1:5000\n";
  return 0;
}

int run_serve(const ServeOptions& options) {
  const auto signals = block_shutdown_signals();
  set_log_level(options.config.log_level);
  std::unique_ptr<ModelServer> server;
  try {
    server = std::make_unique<ModelServer>(options.config);
    server->start();
  } catch (const std::exception& e) {
    std::cerr << "mx serve: " << e.what() << "\n";
    return 1;
  }
  std::cout << "listening on " << server->base_url() << std::endl;

  try {
    server->load(load_model_dir(options.config.model_dir));
  } catch (const std::exception& e) {
    std::cerr << "mx serve: failed to load model: " << e.what() << "\n";
    server->stop();
    return 1;
  }
  std::cout << "model ready" << std::endl;

  wait_for_shutdown(signals);
  server->stop();
  return 0;
}

int run_registry_serve(const RegistryServeOptions& options) {
  const auto signals = block_shutdown_signals();
  set_log_level(options.log_level);
  std::unique_ptr<RegistryServer> server;
  try {
    RegistryConfig config;
    config.poll_interval = seconds_to_ms(options.poll_interval_s);
    config.failure_threshold = options.failure_threshold;
    config.probe_timeout = seconds_to_ms(options.probe_timeout_s);
    config.store_path = options.store;
    auto registry = std::make_shared<Registry>(config, std::make_shared<HttpMetadataProber>());
    server = std::make_unique<RegistryServer>(std::move(registry),
                                              RegistryServerOptions{options.host, options.port});
    server->start();
  } catch (const std::exception& e) {
    std::cerr << "mx registry serve: " << e.what() << "\n";
    return 1;
  }
  std::cout << "listening on " << server->base_url() << std::endl;
  wait_for_shutdown(signals);
  server->stop();
  return 0;
}

namespace {

int print_registry_response(const char* command, const ClientResponse& r, int expected) {
  if (r.status == expected) {
    if (!r.body.empty()) std::cout << Json::parse(r.body).dump(2) << "\n";
    return 0;
  }
  std::cerr << command << ": registry answered HTTP " << r.status;
  try {
    const auto j = Json::parse(r.body);
    std::cerr << ": " << j.at("error").at("message").get<std::string>();
  } catch (const std::exception&) {
  }
  std::cerr << "\n";
  return 1;
}

}  // namespace

int run_registry_register(const RegistryClientOptions& options) {
  try {
    const Json body{{"id", options.id}, {"url", options.url}};
    auto r = http_post(options.registry_url, "/v1/models", body.dump(), "application/json",
                       std::chrono::seconds(30));
    return print_registry_response("mx registry register", r, 201);
  } catch (const std::exception& e) {
    std::cerr << "mx registry register: " << e.what() << "\n";
    return 1;
  }
}

int run_registry_list(const RegistryClientOptions& options) {
  try {
    return print_registry_response("mx registry list", http_get(options.registry_url, "/v1/models"), 200);
  } catch (const std::exception& e) {
    std::cerr << "mx registry list: " << e.what() << "\n";
    return 1;
  }
}

int run_registry_deregister(const RegistryClientOptions& options) {
  try {
    auto r = http_request(options.registry_url, "DELETE", "/v1/models/" + options.id);
    return print_registry_response("mx registry deregister", r, 204);
  } catch (const std::exception& e) {
    std::cerr << "mx registry deregister: " << e.what() << "\n";
    return 1;
  }
}

int run_validate(const ValidateOptions& options) {
  ConformanceOptions conformance;
  conformance.timeout = seconds_to_ms(options.timeout_s);
  if (options.sample) {
    try {
      conformance.sample = load_sample_request(*options.sample);
    } catch (const std::exception& e) {
      std::cerr << "mx validate: " << e.what() << "\n";
      return 2;
    }
  }
  const auto report = validate_service(options.url, conformance);
  if (options.json) {
    std::cout << report.to_json().dump(2, ' ', false, Json::error_handler_t::replace) << "\n";
  } else {
    std::cout << report.to_text();
  }
  return report.passed() ? 0 : 1;
}

}  // namespace mx::cli
