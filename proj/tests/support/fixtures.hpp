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

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mx/detector.hpp"
#include "mx/http.hpp"
#include "mx/metadata.hpp"
#include "mx/sentiment.hpp"
#include "mx/service.hpp"

namespace mx::testing {

/// vocab {good: +2, bad: -2}, bias 0.
SentimentWeights fixture_weights();

ModelMetadata sentiment_metadata();  // id "text-sentiment", name "Sentiment"
ModelMetadata detector_metadata();   // id "object-detector"

std::shared_ptr<const SentimentWrapper> sentiment_wrapper();
std::shared_ptr<const DetectorWrapper> detector_wrapper(DetectorParams params = {0.5, 1});

HttpRequest json_predict(const std::string& body);
HttpRequest pgm_predict(const std::string& pgm);

/// 4x4 image with single bright pixels at (0,0) and (3,3).
GrayImage two_blob_image();

/// A ModelServer on an ephemeral loopback port, model already loaded.
std::unique_ptr<ModelServer> start_model_server(std::shared_ptr<const ModelWrapper> wrapper,
                                                std::size_t max_body_bytes = kDefaultMaxBodyBytes);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Every regular file under root, as sorted relative paths.
std::vector<std::string> list_files(const std::filesystem::path& root);

}  // namespace mx::testing
