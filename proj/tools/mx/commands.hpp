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
#include <filesystem>
#include <optional>
#include <string>

#include "mx/model_loader.hpp"
#include "mx/service.hpp"

namespace mx::cli {

struct NewOptions {
  std::string template_name;
  std::string id;
  std::filesystem::path dir;
};

struct ServeOptions {
  ServiceConfig config;
};

struct RegistryServeOptions {
  std::string host = "0.0.0.0";
  int port = 8000;
  std::filesystem::path store = "registry.json";
  double poll_interval_s = 30.0;
  int failure_threshold = 3;
  double probe_timeout_s = 5.0;
  LogLevel log_level = LogLevel::kInfo;
};

struct RegistryClientOptions {
  std::string registry_url = "http://127.0.0.1:8000";
  std::string id;
  std::string url;
};

struct ValidateOptions {
  std::string url;
  bool json = false;
  std::optional<std::filesystem::path> sample;
  double timeout_s = 5.0;
};

int run_new(const NewOptions& options);
int run_serve(const ServeOptions& options);
int run_registry_serve(const RegistryServeOptions& options);
int run_registry_register(const RegistryClientOptions& options);
int run_registry_list(const RegistryClientOptions& options);
int run_registry_deregister(const RegistryClientOptions& options);
int run_validate(const ValidateOptions& options);

}  // namespace mx::cli
