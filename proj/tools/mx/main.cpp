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

// mx: scaffold, serve, register and validate model services.
#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace mx::cli;

  CLI::App app{"mx - model exchange tooling"};
  app.require_subcommand(1);

  NewOptions new_opts;
  auto* new_cmd = app.add_subcommand("new", "Scaffold a new model service");
  new_cmd->add_option("template", new_opts.template_name, "text-classifier | object-detector")->required();
  new_cmd->add_option("id", new_opts.id, "Model id (URL-safe slug)")->required();
  new_cmd->add_option("dir", new_opts.dir, "Target directory (default: ./<id>)");

  ServeOptions serve_opts;
  std::string serve_log_level = "info";
  auto* serve_cmd = app.add_subcommand("serve", "Serve one model directory over HTTP");
  serve_cmd->add_option("--model-dir", serve_opts.config.model_dir, "Directory with metadata.json and weights.json")
      ->envname("MODEL_DIR")
      ->required();
  serve_cmd->add_option("--port", serve_opts.config.port, "Listening port (0 picks a free port)")
      ->envname("PORT")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", serve_opts.config.host, "Bind address");
  serve_cmd->add_option("--max-body-bytes", serve_opts.config.max_body_bytes, "Largest accepted request body")
      ->check(CLI::Range(static_cast<std::size_t>(mx::kMinMaxBodyBytes), std::numeric_limits<std::size_t>::max()));
  serve_cmd->add_option("--log-level", serve_log_level, "trace|debug|info|warn|error|off");

  auto* registry_cmd = app.add_subcommand("registry", "Run or talk to the model registry");
  registry_cmd->require_subcommand(1);

  RegistryServeOptions reg_opts;
  std::string reg_log_level = "info";
  auto* reg_serve = registry_cmd->add_subcommand("serve", "Run the registry");
  reg_serve->add_option("--store", reg_opts.store, "Catalog file")->envname("REGISTRY_STORE");
  reg_serve->add_option("--port", reg_opts.port, "Listening port")->envname("PORT")->check(CLI::Range(0, 65535));
  reg_serve->add_option("--host", reg_opts.host, "Bind address");
  reg_serve->add_option("--poll-interval", reg_opts.poll_interval_s, "Seconds between health polls")
      ->check(CLI::PositiveNumber);
  reg_serve->add_option("--failure-threshold", reg_opts.failure_threshold, "Failed polls before unhealthy")
      ->check(CLI::Range(1, 1'000'000));
  reg_serve->add_option("--probe-timeout", reg_opts.probe_timeout_s, "Seconds per health probe")
      ->check(CLI::PositiveNumber);
  reg_serve->add_option("--log-level", reg_log_level, "trace|debug|info|warn|error|off");

  RegistryClientOptions client_opts;
  if (const char* env = std::getenv("REGISTRY_URL")) client_opts.registry_url = env;
  auto add_registry_flag = [&](CLI::App* cmd) {
    cmd->add_option("--registry", client_opts.registry_url, "Registry base URL (env REGISTRY_URL)");
  };
  auto* reg_register = registry_cmd->add_subcommand("register", "Register a running model service");
  reg_register->add_option("id", client_opts.id, "Model id")->required();
  reg_register->add_option("url", client_opts.url, "Service base URL")->required();
  add_registry_flag(reg_register);
  auto* reg_list = registry_cmd->add_subcommand("list", "List registered models");
  add_registry_flag(reg_list);
  auto* reg_remove = registry_cmd->add_subcommand("deregister", "Remove a model from the registry");
  reg_remove->add_option("id", client_opts.id, "Model id")->required();
  add_registry_flag(reg_remove);

  ValidateOptions validate_opts;
  auto* validate_cmd = app.add_subcommand("validate", "Check a live service against the model service contract");
  validate_cmd->add_option("url", validate_opts.url, "Service base URL")->required();
  validate_cmd->add_flag("--json", validate_opts.json, "Print the report as JSON");
  validate_cmd->add_option("--sample", validate_opts.sample, "Sample request (.json or .pgm)");
  validate_cmd->add_option("--timeout", validate_opts.timeout_s, "Seconds per request")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  auto level_or_exit = [](const std::string& name) {
    auto level = mx::log_level_from_string(name);
    if (!level) {
      std::cerr << "unknown log level '" << name << "'\n";
      std::exit(2);
    }
    return *level;
  };

  if (*new_cmd) return run_new(new_opts);
  if (*serve_cmd) {
    serve_opts.config.log_level = level_or_exit(serve_log_level);
    return run_serve(serve_opts);
  }
  if (*reg_serve) {
    reg_opts.log_level = level_or_exit(reg_log_level);
    return run_registry_serve(reg_opts);
  }
  if (*reg_register) return run_registry_register(client_opts);
  if (*reg_list) return run_registry_list(client_opts);
  if (*reg_remove) return run_registry_deregister(client_opts);
  if (*validate_cmd) return run_validate(validate_opts);
  return 2;
}
