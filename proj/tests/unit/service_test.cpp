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

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <thread>

#include "mx/envelope.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace mx {
namespace {

using testing::json_predict;

Json body_of(const HttpResponse& r) { return Json::parse(r.body); }

int error_code(const HttpResponse& r) {
  const auto env = PredictionEnvelope::from_json(body_of(r));
  EXPECT_FALSE(env.is_ok());
  return env.error().code;
}

class ServiceHandlers : public ::testing::Test {
 protected:
  void SetUp() override { service_.set_model(testing::sentiment_wrapper()); }
  ModelService service_;
};

TEST_F(ServiceHandlers, MetadataEndpoint) {
  const auto r = service_.handle({"GET", "/model/metadata", "", "", {}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "application/json");
  EXPECT_EQ(body_of(r), to_json(testing::sentiment_metadata()));
}

TEST_F(ServiceHandlers, PredictMatchesOracle) {
  const auto r = service_.handle(json_predict(R"({"text": ["Good movie!", "", "good bad"]})"));
  ASSERT_EQ(r.status, 200) << r.body;
  const auto env = PredictionEnvelope::from_json(body_of(r));
  ASSERT_TRUE(env.is_ok());
  ASSERT_EQ(env.predictions().size(), 3u);
  const double z[] = {2.0, 0.0, 0.0};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = env.predictions()[i];
    ASSERT_TRUE(p.is_array());
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0]["positive"].get<double>(), testing::oracle::sigmoid(z[i]));
    EXPECT_EQ(p[0]["negative"].get<double>(), testing::oracle::sigmoid(-z[i]));
  }
}

TEST_F(ServiceHandlers, GoldenEnvelopeBytes) {
  const auto r = service_.handle(json_predict(R"({"text": ["good"]})"));
  EXPECT_EQ(r.body,
            R"({"status":"ok","predictions":[[{"positive":0.8807970779778823,"negative":0.11920292202211755}]]})");
}

TEST_F(ServiceHandlers, UnknownRouteAndWrongMethod) {
  EXPECT_EQ(service_.handle({"GET", "/nope", "", "", {}}).status, 404);
  EXPECT_EQ(error_code(service_.handle({"GET", "/model/predict", "", "", {}})), 404);
  EXPECT_EQ(error_code(service_.handle({"DELETE", "/health", "", "", {}})), 404);
}

TEST_F(ServiceHandlers, UnsupportedContentType) {
  auto req = json_predict("a,b");
  req.content_type = "text/csv";
  const auto r = service_.handle(req);
  EXPECT_EQ(r.status, 415);
  EXPECT_EQ(error_code(r), 415);
  req.content_type = "";
  EXPECT_EQ(service_.handle(req).status, 415);
}

TEST_F(ServiceHandlers, ContentTypeParametersAreIgnored) {
  auto req = json_predict(R"({"text": ["x"]})");
  req.content_type = "Application/JSON; charset=utf-8";
  EXPECT_EQ(service_.handle(req).status, 200);
}

TEST_F(ServiceHandlers, EmptyBatchIs422) {
  const auto r = service_.handle(json_predict(R"({"text": []})"));
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(error_code(r), 422);
}

TEST_F(ServiceHandlers, MalformedBodiesAre400) {
  for (const char* body : {"", "{", "[]", "42", R"({"txt": ["a"]})", R"({"text": "a"})", R"({"text": [1]})",
                           R"({"text": ["a", null]})"}) {
    const auto r = service_.handle(json_predict(body));
    EXPECT_EQ(r.status, 400) << body;
    EXPECT_EQ(error_code(r), 400) << body;
  }
}

TEST_F(ServiceHandlers, HealthAndOpenApi) {
  const auto h = service_.handle({"GET", "/health", "", "", {}});
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(body_of(h), Json({{"status", "ok"}}));
  const auto head = service_.handle({"HEAD", "/health", "", "", {}});
  EXPECT_EQ(head.status, 200);
  EXPECT_TRUE(head.body.empty());
  const auto doc = service_.handle({"GET", "/swagger.json", "", "", {}});
  EXPECT_EQ(doc.status, 200);
  EXPECT_EQ(doc.content_type, "application/json");
  EXPECT_EQ(body_of(doc)["openapi"], "3.0.3");
}

TEST(ServiceLifecycle, Answers503UntilLoaded) {
  ModelService service;
  EXPECT_FALSE(service.ready());
  EXPECT_EQ(service.handle({"GET", "/health", "", "", {}}).status, 503);
  EXPECT_EQ(service.handle({"HEAD", "/health", "", "", {}}).status, 503);
  EXPECT_EQ(error_code(service.handle({"GET", "/model/metadata", "", "", {}})), 503);
  EXPECT_EQ(error_code(service.handle(json_predict(R"({"text": ["good"]})"))), 503);
  service.set_model(testing::sentiment_wrapper());
  EXPECT_TRUE(service.ready());
  EXPECT_EQ(service.handle({"GET", "/health", "", "", {}}).status, 200);
}

TEST(ServiceConfigValidation, Bounds) {
  ServiceConfig c;
  EXPECT_NO_THROW(validate(c));
  c.max_body_bytes = kMinMaxBodyBytes - 1;
  EXPECT_THROW(validate(c), ValidationError);
  c.max_body_bytes = kMinMaxBodyBytes;
  c.port = 70000;
  EXPECT_THROW(validate(c), ValidationError);
}

TEST(LogLevels, Parse) {
  EXPECT_EQ(log_level_from_string("debug"), LogLevel::kDebug);
  EXPECT_EQ(log_level_from_string("off"), LogLevel::kOff);
  EXPECT_FALSE(log_level_from_string("loud").has_value());
}

// Any request, however malformed, gets a well-formed envelope whose code
// equals the HTTP status.
TEST(ServiceFuzz, EnvelopeIsTotal) {
  ModelService text;
  text.set_model(testing::sentiment_wrapper());
  ModelService image(2048);
  image.set_model(testing::detector_wrapper());

  std::mt19937 rng(7);
  const std::vector<std::string> types = {"application/json", "text/plain", "", "multipart/form-data",
                                          "image/x-portable-graymap", "application/json; charset=utf-8"};
  const std::vector<std::string> seeds = {R"({"text": ["good"]})", R"({"text": []})", "P5 2 2 255\n\x01\x02\x03\x04",
                                          "P2 1 1 255\n9", "", "null"};
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) {
    HttpRequest req = json_predict(seeds[rng() % seeds.size()]);
    req.content_type = types[rng() % types.size()];
    const int mutations = rng() % 4;
    for (int m = 0; m < mutations && !req.body.empty(); ++m) {
      const std::size_t pos = rng() % req.body.size();
      switch (rng() % 3) {
        case 0: req.body[pos] = static_cast<char>(rng()); break;
        case 1: req.body.erase(pos, 1); break;
        default: req.body.insert(pos, 1, static_cast<char>(rng())); break;
      }
    }
    if (rng() % 5 == 0) req.body.append(3000, 'x');
    if (rng() % 4 == 0) req.parts.push_back({rng() % 2 ? "image" : "file", "x.pgm", "", req.body});
    for (const ModelService* s : {&text, &image}) {
      const auto r = s->handle(req);
      Json j;
      ASSERT_NO_THROW(j = Json::parse(r.body)) << r.body;
      PredictionEnvelope env = PredictionEnvelope::failure(500, "");
      ASSERT_NO_THROW(env = PredictionEnvelope::from_json(j)) << r.body;
      EXPECT_EQ(env.http_status(), r.status);
      seen.insert(r.status);
    }
  }
  for (int code : seen) EXPECT_TRUE(code == 200 || is_error_code(code)) << code;
  EXPECT_TRUE(seen.count(200) && seen.count(400) && seen.count(413) && seen.count(415));
}

TEST(ServiceImage, RawAndMultipartInputs) {
  ModelService service;
  service.set_model(testing::detector_wrapper());
  const auto pgm = encode_pgm(testing::two_blob_image());

  const auto raw = service.handle(testing::pgm_predict(pgm));
  ASSERT_EQ(raw.status, 200) << raw.body;
  const auto env = PredictionEnvelope::from_json(body_of(raw));
  ASSERT_EQ(env.predictions().size(), 1u);
  ASSERT_EQ(env.predictions()[0].size(), 2u);

  HttpRequest multipart{"POST", "/model/predict", "multipart/form-data; boundary=b", "",
                        {{"image", "a.pgm", kPgmContentType, pgm}}};
  EXPECT_EQ(service.handle(multipart).body, raw.body);

  multipart.parts[0].name = "picture";
  EXPECT_EQ(error_code(service.handle(multipart)), 400);

  const auto bad = service.handle(testing::pgm_predict("P6 1 1 255\n\x01\x02\x03"));
  EXPECT_EQ(error_code(bad), 400);
  EXPECT_EQ(error_code(service.handle(testing::pgm_predict(""))), 422);
}

TEST(ServiceNetwork, PayloadCap) {
  const std::size_t cap = 4096;
  auto server = testing::start_model_server(testing::sentiment_wrapper(), cap);
  const std::string prefix = R"({"text": [")";
  const std::string suffix = R"("]})";
  auto body_of_size = [&](std::size_t n) { return prefix + std::string(n - prefix.size() - suffix.size(), 'a') + suffix; };

  const auto at_cap = http_post(server->base_url(), "/model/predict", body_of_size(cap), "application/json");
  EXPECT_EQ(at_cap.status, 200) << at_cap.body;
  const auto over = http_post(server->base_url(), "/model/predict", body_of_size(cap + 1), "application/json");
  EXPECT_EQ(over.status, 413);
  const auto env = PredictionEnvelope::from_json(Json::parse(over.body));
  EXPECT_EQ(env.error().code, 413);
}

TEST(ServiceNetwork, UnknownPathAndHead) {
  auto server = testing::start_model_server(testing::sentiment_wrapper());
  const auto r = http_get(server->base_url(), "/does/not/exist");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(PredictionEnvelope::from_json(Json::parse(r.body)).error().code, 404);
  const auto head = http_request(server->base_url(), "HEAD", "/health");
  EXPECT_EQ(head.status, 200);
  EXPECT_TRUE(head.body.empty());
}

TEST(ServiceNetwork, ConcurrentRequestsAreDeterministic) {
  auto server = testing::start_model_server(testing::sentiment_wrapper());
  const std::string body = R"({"text": ["good good bad", "bad", "a good day"]})";
  const auto expected = http_post(server->base_url(), "/model/predict", body, "application/json").body;
  std::vector<std::string> results(32);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < results.size(); ++i) {
    threads.emplace_back([&, i] {
      try {
        results[i] = http_post(server->base_url(), "/model/predict", body, "application/json").body;
      } catch (const TransportError& e) {
        results[i] = e.what();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& r : results) EXPECT_EQ(r, expected);
}

TEST(ServiceNetwork, MultipartOverTheWire) {
  auto server = testing::start_model_server(testing::detector_wrapper());
  const auto pgm = encode_pgm(testing::two_blob_image());
  const auto body = encode_multipart({{"image", "x.pgm", kPgmContentType, pgm}}, "XyZ");
  const auto r = http_post(server->base_url(), "/model/predict", body, "multipart/form-data; boundary=XyZ");
  ASSERT_EQ(r.status, 200) << r.body;
  const auto env = PredictionEnvelope::from_json(Json::parse(r.body));
  EXPECT_EQ(env.predictions()[0][0]["detection_box"], Json::parse("[0.0,0.0,0.25,0.25]"));
}

TEST(ServiceNetwork, BindConflictThrows) {
  auto server = testing::start_model_server(testing::sentiment_wrapper());
  ServiceConfig config;
  config.host = "127.0.0.1";
  config.port = server->port();
  ModelServer second(config);
  EXPECT_THROW(second.start(), Error);
}

}  // namespace
}  // namespace mx
