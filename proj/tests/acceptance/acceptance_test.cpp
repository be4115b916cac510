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

// Acceptance suite. Prints one PASS/FAIL line per criterion with its
// runtime and budget; exits nonzero if any criterion fails.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "mx/detector.hpp"
#include "mx/envelope.hpp"
#include "mx/registry.hpp"
#include "mx/sentiment.hpp"
#include "mx/service.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

namespace {

using namespace std::chrono_literals;
using mx::Json;

/// Thrown by check() to fail the current criterion with a reason.
struct Failed {
  std::string why;
};

void check(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

int failures = 0;

void criterion(const std::string& name, std::chrono::milliseconds budget, const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string why;
  try {
    body();
  } catch (const Failed& f) {
    why = f.why;
  } catch (const std::exception& e) {
    why = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double limit = std::chrono::duration<double>(budget).count();
  if (why.empty() && secs >= limit) why = "over time budget";
  if (!why.empty()) ++failures;
  std::printf("%s %-28s %7.3fs (limit %.0fs)%s%s\n", why.empty() ? "PASS" : "FAIL", name.c_str(), secs, limit,
              why.empty() ? "" : "  ", why.c_str());
  std::fflush(stdout);
}

/// Replaces every scalar with its JSON type name, keeping keys and nesting.
Json shape(const Json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = shape(v);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(shape(v));
    return out;
  }
  return j.type_name();
}

// The published sentiment response listing.
constexpr const char* kPublishedEnvelope = R"({
  "status": "ok",
  "predictions": [
    [{"positive": 0.9977352619171143, "negative": 0.002264695707708597}],
    [{"positive": 0.001138084102421999, "negative": 0.9988619089126587}]
  ]
})";

void golden_envelope() {
  mx::ModelService service;
  service.set_model(mx::testing::sentiment_wrapper());
  const auto r = service.handle(mx::testing::json_predict(R"({"text": ["a good film", "a bad film"]})"));
  check(r.status == 200, "status " + std::to_string(r.status));
  const auto got = Json::parse(r.body);
  const auto want = Json::parse(kPublishedEnvelope);
  check(shape(got) == shape(want), "shape " + shape(got).dump() + " != " + shape(want).dump());
  std::vector<std::string> keys;
  for (const auto& [k, v] : got.items()) keys.push_back(k);
  check(keys == std::vector<std::string>{"status", "predictions"}, "top-level key order");
  for (const auto& p : got["predictions"]) {
    std::vector<std::string> inner;
    for (const auto& [k, v] : p[0].items()) inner.push_back(k);
    check(inner == std::vector<std::string>{"positive", "negative"}, "inner key order");
  }
}

void sentiment_oracle() {
  const auto w = mx::testing::fixture_weights();
  const std::map<std::string, double> vocab(w.vocab.begin(), w.vocab.end());
  const double want_good = mx::testing::oracle::positive_score(vocab, 0.0, {"good"});
  const double want_mixed = mx::testing::oracle::positive_score(vocab, 0.0, {"good", "bad"});
  check(std::abs(want_good - 0.8807970779778823) <= 1e-12, "oracle disagrees with the stated value");
  check(std::abs(want_mixed - 0.5) <= 1e-12, "oracle disagrees with the stated value");
  const auto s = mx::sentiment_predict(w, {{"good"}, {"good", "bad"}});
  check(std::abs(s[0].positive - 0.8807970779778823) <= 1e-12, "good -> " + std::to_string(s[0].positive));
  check(std::abs(s[1].positive - 0.5) <= 1e-12, "good bad -> " + std::to_string(s[1].positive));
  check(std::abs(s[0].positive + s[0].negative - 1.0) <= 1e-12, "not normalized");
  // Same numbers through the text pipeline.
  mx::ModelService service;
  service.set_model(mx::testing::sentiment_wrapper());
  const auto env = mx::PredictionEnvelope::from_json(
      Json::parse(service.handle(mx::testing::json_predict(R"({"text": ["Good!", "good, bad"]})")).body));
  check(std::abs(env.predictions()[0][0]["positive"].get<double>() - 0.8807970779778823) <= 1e-12, "service good");
  check(std::abs(env.predictions()[1][0]["positive"].get<double>() - 0.5) <= 1e-12, "service good bad");
}

void detector_oracle() {
  std::mt19937 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    auto img = mx::make_image(1 + rng() % 32, 1 + rng() % 32);
    for (auto& v : img.data) v = u(rng);
    const double threshold = i % 2 ? 0.5 : u(rng);
    const std::size_t min_area = 1 + rng() % 5;
    check(mx::detect_components(img, threshold, min_area) ==
              mx::testing::oracle::flood_fill_detect(img, threshold, min_area),
          "mismatch on image " + std::to_string(i));
  }
}

/// Serves a real ModelService with "status" stripped from predict bodies.
class StatuslessStub {
 public:
  StatuslessStub()
      : server_(
            [this](const mx::HttpRequest& r) {
              auto resp = service_.handle(r);
              if (r.path == "/model/predict") {
                auto j = Json::parse(resp.body);
                j.erase("status");
                resp.body = j.dump();
              }
              return resp;
            },
            mx::HttpServerOptions{"127.0.0.1", 0, mx::kDefaultMaxBodyBytes, 4, "stub"}) {
    service_.set_model(mx::testing::sentiment_wrapper());
    server_.bind();
    server_.start();
  }
  ~StatuslessStub() { server_.stop(); }
  std::string url() const { return server_.base_url(); }

 private:
  mx::ModelService service_;
  mx::HttpServer server_;
};

void conformance_closure() {
  mx::testing::TempDir tmp;
  for (const std::string tmpl : {"text-classifier", "object-detector"}) {
    const auto dir = (tmp.path() / tmpl).string();
    const auto made = mx::testing::run_process({MX_BINARY, "new", tmpl, "closure-" + tmpl, dir});
    check(made.exit_code == 0, "mx new " + tmpl + " exited " + std::to_string(made.exit_code));
    mx::testing::ChildProcess serve({MX_BINARY, "serve", "--model-dir", dir, "--host", "127.0.0.1", "--port",
                                     std::to_string(mx::testing::unused_port()), "--log-level", "warn"});
    const auto url = serve.wait_for_line("listening on ", 10s);
    check(url.has_value(), "mx serve " + tmpl + " did not start");
    check(serve.wait_for_line("model ready", 10s).has_value(), "mx serve " + tmpl + " did not load");
    const auto v = mx::testing::run_process({MX_BINARY, "validate", *url});
    check(v.exit_code == 0, "mx validate on " + tmpl + " exited " + std::to_string(v.exit_code));
    serve.terminate();
    serve.wait();
  }
  StatuslessStub stub;
  const auto v = mx::testing::run_process({MX_BINARY, "validate", stub.url()});
  check(v.exit_code != 0, "mx validate accepted a service without \"status\"");
}

void registry_health() {
  auto server = mx::testing::start_model_server(mx::testing::sentiment_wrapper());
  const int port = server->port();
  mx::RegistryConfig config;
  config.poll_interval = 100ms;
  config.failure_threshold = 3;
  config.probe_timeout = 500ms;
  mx::Registry registry(config, std::make_shared<mx::HttpMetadataProber>());
  const auto first = registry.register_model("text-sentiment", server->base_url());
  check(first.health == mx::Health::kHealthy, "not healthy after registration");

  std::mutex mu;
  std::vector<mx::ModelRecord> polls;
  registry.set_poll_observer([&](const mx::ModelRecord& r) {
    std::lock_guard lock(mu);
    polls.push_back(r);
  });
  auto wait_for = [&](const std::function<bool(const std::vector<mx::ModelRecord>&)>& pred) {
    const auto deadline = std::chrono::steady_clock::now() + 2s;
    while (std::chrono::steady_clock::now() < deadline) {
      {
        std::lock_guard lock(mu);
        if (pred(polls)) return true;
      }
      std::this_thread::sleep_for(5ms);
    }
    return false;
  };
  registry.start_polling();

  server.reset();  // stop the service
  std::size_t stop_mark;
  {
    std::lock_guard lock(mu);
    stop_mark = polls.size();
  }
  check(wait_for([&](const auto& p) { return !p.empty() && p.back().health == mx::Health::kUnhealthy; }),
        "never became unhealthy");
  {
    std::lock_guard lock(mu);
    // Walk the failures since the last success: healthy at 1 and 2, unhealthy at 3.
    std::size_t i = stop_mark;
    while (i < polls.size() && polls[i].consecutive_failures == 0) ++i;
    for (int n = 1; n <= 3; ++n, ++i) {
      check(i < polls.size(), "missing poll");
      check(polls[i].consecutive_failures == n, "failure counter out of step");
      const auto want = n < 3 ? mx::Health::kHealthy : mx::Health::kUnhealthy;
      check(polls[i].health == want, "health after " + std::to_string(n) + " failed polls is " +
                                         std::string(mx::to_string(polls[i].health)));
    }
  }

  mx::ServiceConfig restart;
  restart.host = "127.0.0.1";
  restart.port = port;
  mx::ModelServer again(restart);
  again.start();
  again.load(mx::testing::sentiment_wrapper());
  std::size_t restart_mark;
  {
    std::lock_guard lock(mu);
    restart_mark = polls.size();
  }
  check(wait_for([&](const auto& p) {
          for (std::size_t i = restart_mark; i < p.size(); ++i) {
            if (p[i].consecutive_failures == 0) return true;
          }
          return false;
        }),
        "no successful poll after restart");
  {
    std::lock_guard lock(mu);
    std::size_t i = restart_mark;
    while (polls[i].consecutive_failures != 0) ++i;
    check(i > 0 && polls[i - 1].health == mx::Health::kUnhealthy, "was not unhealthy before recovery");
    check(polls[i].health == mx::Health::kHealthy, "first successful poll did not restore health");
  }
  registry.stop_polling();
}

void proxy_transparency() {
  auto text = mx::testing::start_model_server(mx::testing::sentiment_wrapper());
  auto image = mx::testing::start_model_server(mx::testing::detector_wrapper());
  auto registry = std::make_shared<mx::Registry>(mx::RegistryConfig{}, std::make_shared<mx::HttpMetadataProber>());
  mx::RegistryServerOptions options;
  options.host = "127.0.0.1";
  options.port = 0;
  mx::RegistryServer server(registry, options);
  server.start();
  registry->register_model("text-sentiment", text->base_url());
  registry->register_model("object-detector", image->base_url());

  auto compare = [&](const std::string& base, const std::string& id, const std::string& body, const std::string& type) {
    const auto direct = mx::http_post(base, "/model/predict", body, type);
    const auto proxied = mx::http_post(server.base_url(), "/v1/models/" + id + "/predict", body, type);
    check(direct.status == proxied.status, id + ": status " + std::to_string(direct.status) + " vs " +
                                               std::to_string(proxied.status));
    check(direct.body == proxied.body, id + ": bodies differ");
    check(direct.content_type == proxied.content_type, id + ": content types differ");
  };
  compare(text->base_url(), "text-sentiment", R"({"text": ["good", "bad weather", ""]})", "application/json");
  compare(text->base_url(), "text-sentiment", R"({"text": []})", "application/json");
  const auto pgm = mx::encode_pgm(mx::testing::two_blob_image());
  compare(image->base_url(), "object-detector", pgm, mx::kPgmContentType);
  compare(image->base_url(), "object-detector", mx::encode_multipart({{"image", "a.pgm", mx::kPgmContentType, pgm}}, "acc"),
          "multipart/form-data; boundary=acc");
  server.stop();
}

void concurrency() {
  auto server = mx::testing::start_model_server(mx::testing::sentiment_wrapper());
  const std::string body = R"({"text": ["good", "bad", "good good bad", "nothing here"]})";
  const auto serial = mx::http_post(server->base_url(), "/model/predict", body, "application/json");
  check(serial.status == 200, "serial request failed");
  std::vector<mx::ClientResponse> results(32);
  std::vector<std::thread> threads;
  std::atomic<bool> go{false};
  for (std::size_t i = 0; i < results.size(); ++i) {
    threads.emplace_back([&, i] {
      while (!go) std::this_thread::yield();
      try {
        results[i] = mx::http_post(server->base_url(), "/model/predict", body, "application/json");
      } catch (const mx::TransportError& e) {
        results[i].body = e.what();
      }
    });
  }
  go = true;
  for (auto& t : threads) t.join();
  for (const auto& r : results) {
    check(r.status == 200 && r.body == serial.body, "concurrent response differs from serial");
  }
}

void persistence() {
  mx::testing::TempDir tmp;
  auto a = mx::testing::start_model_server(mx::testing::sentiment_wrapper());
  auto b = mx::testing::start_model_server(mx::testing::detector_wrapper());
  mx::RegistryConfig config;
  config.store_path = tmp.path() / "catalog.json";
  auto prober = std::make_shared<mx::HttpMetadataProber>();
  std::vector<mx::ModelRecord> before;
  {
    mx::Registry registry(config, prober);
    registry.register_model("text-sentiment", a->base_url());
    registry.register_model("object-detector", b->base_url());
    registry.register_model("offline-model", "http://127.0.0.1:" + std::to_string(mx::testing::unused_port()));
    before = registry.list_models();
  }
  mx::Registry reloaded(config, prober);
  const auto after = reloaded.list_models();
  check(after.size() == 3 && before.size() == 3, "catalog size changed");
  for (std::size_t i = 0; i < after.size(); ++i) {
    check(after[i].id == before[i].id && after[i].url == before[i].url && after[i].metadata == before[i].metadata,
          "record " + before[i].id + " changed");
    check(after[i].health == mx::Health::kUnknown, "health of " + after[i].id + " not reset to unknown");
  }
}

}  // namespace

int main() {
  mx::set_log_level(mx::LogLevel::kWarn);
  criterion("golden-envelope-shape", 1s, golden_envelope);
  criterion("sentiment-oracle", 1s, sentiment_oracle);
  criterion("detector-oracle-equivalence", 5s, detector_oracle);
  criterion("conformance-closure", 20s, conformance_closure);
  criterion("registry-health-machine", 5s, registry_health);
  criterion("proxy-transparency", 2s, proxy_transparency);
  criterion("concurrency-determinism", 5s, concurrency);
  criterion("persistence-round-trip", 2s, persistence);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
