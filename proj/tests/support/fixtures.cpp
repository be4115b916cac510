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

#include "support/fixtures.hpp"

#include <random>

namespace mx::testing {

SentimentWeights fixture_weights() {
  SentimentWeights w;
  w.vocab = {{"good", 2.0}, {"bad", -2.0}};
  w.bias = 0.0;
  return w;
}

ModelMetadata sentiment_metadata() {
  return {"text-sentiment", "Sentiment", "Sentiment classifier fixture", "text-classification",
          "Apache-2.0", "local"};
}

ModelMetadata detector_metadata() {
  return {"object-detector", "Object Detector", "Connected-components detector fixture",
          "object-detection", "Apache-2.0", "local"};
}

std::shared_ptr<const SentimentWrapper> sentiment_wrapper() {
  return std::make_shared<const SentimentWrapper>(sentiment_metadata(), fixture_weights());
}

std::shared_ptr<const DetectorWrapper> detector_wrapper(DetectorParams params) {
  return std::make_shared<const DetectorWrapper>(detector_metadata(), params);
}

HttpRequest json_predict(const std::string& body) {
  return HttpRequest{"POST", "/model/predict", "application/json", body, {}};
}

HttpRequest pgm_predict(const std::string& pgm) {
  return HttpRequest{"POST", "/model/predict", kPgmContentType, pgm, {}};
}

GrayImage two_blob_image() {
  auto img = make_image(4, 4);
  img.at(0, 0) = 1.0;
  img.at(3, 3) = 1.0;
  return img;
}

std::unique_ptr<ModelServer> start_model_server(std::shared_ptr<const ModelWrapper> wrapper,
                                                std::size_t max_body_bytes) {
  ServiceConfig config;
  config.host = "127.0.0.1";
  config.port = 0;
  config.max_body_bytes = max_body_bytes;
  auto server = std::make_unique<ModelServer>(config);
  server->start();
  server->load(std::move(wrapper));
  return server;
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("mx-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<std::string> list_files(const std::filesystem::path& root) {
  std::vector<std::string> out;
  if (!std::filesystem::exists(root)) return out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) out.push_back(std::filesystem::relative(entry.path(), root).string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mx::testing
