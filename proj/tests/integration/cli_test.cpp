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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mx/http.hpp"
#include "support/fixtures.hpp"
#include "support/process.hpp"

namespace mx {
namespace {

using namespace std::chrono_literals;
using testing::ChildProcess;
using testing::run_process;
using testing::TempDir;

const std::string kMx = MX_BINARY;

std::string scaffold_dir(const TempDir& tmp, const std::string& tmpl, const std::string& id) {
  const auto dir = (tmp.path() / id).string();
  const auto r = run_process({kMx, "new", tmpl, id, dir});
  EXPECT_EQ(r.exit_code, 0) << r.output;
  return dir;
}

TEST(Cli, ServeAnswersHealth) {
  TempDir tmp;
  const auto dir = scaffold_dir(tmp, "text-classifier", "cli-text");
  const int port = testing::unused_port();
  ChildProcess serve({kMx, "serve", "--model-dir", dir, "--port", std::to_string(port), "--host", "127.0.0.1"});
  const auto url = serve.wait_for_line("listening on ", 10s);
  ASSERT_TRUE(url.has_value());
  ASSERT_TRUE(serve.wait_for_line("model ready", 10s).has_value());
  const auto r = http_get(*url, "/health");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(Json::parse(r.body)["status"], "ok");
  serve.terminate();
  EXPECT_EQ(serve.wait(), 0);
}

TEST(Cli, ServeFailsWithoutWeights) {
  TempDir tmp;
  const auto dir = scaffold_dir(tmp, "text-classifier", "no-weights");
  std::filesystem::remove(std::filesystem::path(dir) / "weights.json");
  const auto r = run_process({kMx, "serve", "--model-dir", dir, "--port", std::to_string(testing::unused_port())});
  EXPECT_NE(r.exit_code, 0);
}

TEST(Cli, ServeFailsOnBoundPort) {
  TempDir tmp;
  const auto dir = scaffold_dir(tmp, "text-classifier", "busy-port");
  auto holder = testing::start_model_server(testing::sentiment_wrapper());
  const auto r = run_process({kMx, "serve", "--model-dir", dir, "--host", "127.0.0.1", "--port",
                              std::to_string(holder->port())});
  EXPECT_NE(r.exit_code, 0);
}

TEST(Cli, ServeRejectsTinyBodyCap) {
  TempDir tmp;
  const auto dir = scaffold_dir(tmp, "text-classifier", "tiny");
  EXPECT_NE(run_process({kMx, "serve", "--model-dir", dir, "--max-body-bytes", "10"}).exit_code, 0);
}

TEST(Cli, NewRefusesNonEmptyDirectory) {
  TempDir tmp;
  std::ofstream(tmp.path() / "existing.txt") << "x";
  const auto r = run_process({kMx, "new", "object-detector", "det", tmp.path().string()});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_EQ(testing::list_files(tmp.path()), std::vector<std::string>{"existing.txt"});
  EXPECT_NE(run_process({kMx, "new", "gan", "x", (tmp.path() / "g").string()}).exit_code, 0);
}

TEST(Cli, ValidateExitCodes) {
  auto server = testing::start_model_server(testing::detector_wrapper());
  EXPECT_EQ(run_process({kMx, "validate", server->base_url()}).exit_code, 0);
  const auto json = run_process({kMx, "validate", "--json", server->base_url()});
  EXPECT_EQ(json.exit_code, 0);
  EXPECT_EQ(Json::parse(json.output)["passed"], true);
  const auto dead = "http://127.0.0.1:" + std::to_string(testing::unused_port());
  EXPECT_NE(run_process({kMx, "validate", "--timeout", "1", dead}).exit_code, 0);
}

TEST(Cli, RegistryCommands) {
  TempDir tmp;
  auto model = testing::start_model_server(testing::sentiment_wrapper());
  const int port = testing::unused_port();
  ChildProcess registry({kMx, "registry", "serve", "--host", "127.0.0.1", "--port", std::to_string(port),
                         "--store", (tmp.path() / "store.json").string()});
  const auto url = registry.wait_for_line("listening on ", 10s);
  ASSERT_TRUE(url.has_value());

  const auto reg = run_process({kMx, "registry", "register", "text-sentiment", model->base_url(), "--registry", *url});
  EXPECT_EQ(reg.exit_code, 0);
  EXPECT_EQ(Json::parse(reg.output)["health"], "healthy");
  EXPECT_NE(run_process({kMx, "registry", "register", "text-sentiment", model->base_url(), "--registry", *url}).exit_code, 0);

  const auto list = run_process({kMx, "registry", "list", "--registry", *url});
  EXPECT_EQ(list.exit_code, 0);
  EXPECT_EQ(Json::parse(list.output).size(), 1u);

  EXPECT_EQ(run_process({kMx, "registry", "deregister", "text-sentiment", "--registry", *url}).exit_code, 0);
  EXPECT_NE(run_process({kMx, "registry", "deregister", "text-sentiment", "--registry", *url}).exit_code, 0);
  registry.terminate();
  EXPECT_EQ(registry.wait(), 0);
}

}  // namespace
}  // namespace mx
