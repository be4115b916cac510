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
#include <optional>
#include <string>
#include <vector>

#include "mx/http.hpp"
#include "mx/json.hpp"

namespace mx {

struct ConformanceCheck {
  std::string check_id;
  std::string description;
  bool passed = false;
  std::string detail;
};

struct ConformanceReport {
  std::string target_url;
  std::vector<ConformanceCheck> checks;

  /// AND of all checks; false for an empty report.
  bool passed() const;

  Json to_json() const;
  std::string to_text() const;
};

/// A predict request to send during validation.
struct SampleRequest {
  std::string content_type;
  std::string body;
  std::size_t instances = 1;
};

/// Reads a sample fixture: *.json is sent as application/json (instance
/// count = length of "text"), *.pgm as image/x-portable-graymap.
SampleRequest load_sample_request(const std::filesystem::path& path);

struct ConformanceOptions {
  /// When absent, a sample is derived from the request content types the
  /// service advertises in its OpenAPI document.
  std::optional<SampleRequest> sample;
  std::chrono::milliseconds timeout{5'000};
};

/// Runs the contract checks against a live model service:
///   health              GET /health answers 200
///   metadata            GET /model/metadata is a valid metadata document
///   openapi             GET /swagger.json parses and documents /model/predict
///   predict-envelope    the sample predict returns an ok envelope
///   predict-alignment   predictions has one entry per sample instance
///   error-envelope      a malformed predict body gets an error envelope
///                       whose error.code equals the HTTP status
/// An unreachable target fails every check.
ConformanceReport validate_service(const std::string& url, const ConformanceOptions& options = {});

}  // namespace mx
