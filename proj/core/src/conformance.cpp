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

#include "mx/conformance.hpp"

#include <fstream>
#include <sstream>

#include "mx/detector.hpp"
#include "mx/envelope.hpp"
#include "mx/metadata.hpp"
#include "mx/pgm.hpp"

namespace mx {
namespace {

constexpr const char* kCheckHealth = "health";
constexpr const char* kCheckMetadata = "metadata";
constexpr const char* kCheckOpenApi = "openapi";
constexpr const char* kCheckPredictEnvelope = "predict-envelope";
constexpr const char* kCheckPredictAlignment = "predict-alignment";
constexpr const char* kCheckErrorEnvelope = "error-envelope";

const std::vector<std::pair<const char*, const char*>>& check_catalog() {
  static const std::vector<std::pair<const char*, const char*>> catalog{
      {kCheckHealth, "GET /health answers 200"},
      {kCheckMetadata, "GET /model/metadata returns valid model metadata"},
      {kCheckOpenApi, "GET /swagger.json parses and documents /model/predict"},
      {kCheckPredictEnvelope, "POST /model/predict with the sample returns an ok envelope"},
      {kCheckPredictAlignment, "predictions has one entry per input instance"},
      {kCheckErrorEnvelope, "a malformed predict body yields an error envelope with error.code = HTTP status"},
  };
  return catalog;
}

std::string sample_pgm() {
  auto image = make_image(4, 4);
  image.at(0, 0) = image.at(0, 1) = image.at(1, 0) = image.at(1, 1) = 1.0;
  return encode_pgm(image);
}

constexpr const char* kBoundary = "mx-conformance-boundary";

std::string multipart_type() { return std::string("multipart/form-data; boundary=") + kBoundary; }

std::string multipart_image(const std::string& bytes) {
  return encode_multipart({FormPart{"image", "sample.pgm", kPgmContentType, bytes}}, kBoundary);
}

// Picks a request the service claims to accept, preferring JSON text.
std::optional<SampleRequest> derive_sample(const Json& openapi) {
  const Json::json_pointer ptr("/paths/~1model~1predict/post/requestBody/content");
  if (!openapi.contains(ptr) || !openapi.at(ptr).is_object()) return std::nullopt;
  const auto& content = openapi.at(ptr);
  if (content.contains("application/json")) {
    return SampleRequest{"application/json", R"({"text":["good","bad"]})", 2};
  }
  if (content.contains(kPgmContentType)) return SampleRequest{kPgmContentType, sample_pgm(), 1};
  if (content.contains(kMultipartContentType)) {
    return SampleRequest{multipart_type(), multipart_image(sample_pgm()), 1};
  }
  return std::nullopt;
}

SampleRequest malformed_like(const SampleRequest& sample) {
  const auto mt = media_type(sample.content_type);
  if (mt == "application/json") return SampleRequest{sample.content_type, R"({"text": [)", 0};
  if (mt == kMultipartContentType) {
    return SampleRequest{multipart_type(), multipart_image("not an image"), 0};
  }
  return SampleRequest{sample.content_type, "not an image", 0};
}

class Checks {
 public:
  explicit Checks(std::string url) { report_.target_url = std::move(url); }

  void record(const char* id, bool passed, std::string detail) {
    for (const auto& [cid, description] : check_catalog()) {
      if (std::string_view(cid) == id) {
        report_.checks.push_back({cid, description, passed, std::move(detail)});
        return;
      }
    }
  }
  ConformanceReport take() { return std::move(report_); }

 private:
  ConformanceReport report_;
};

}  // namespace

bool ConformanceReport::passed() const {
  if (checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

Json ConformanceReport::to_json() const {
  Json list = Json::array();
  for (const auto& c : checks) {
    list.push_back(Json{{"check_id", c.check_id},
                        {"description", c.description},
                        {"passed", c.passed},
                        {"detail", c.detail}});
  }
  return Json{{"target_url", target_url}, {"passed", passed()}, {"checks", std::move(list)}};
}

std::string ConformanceReport::to_text() const {
  std::ostringstream out;
  out << "Conformance report for " << target_url << "\n";
  std::size_t failed = 0;
  for (const auto& c : checks) {
    out << (c.passed ? "  PASS  " : "  FAIL  ") << c.check_id << ": " << c.description;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
    if (!c.passed) ++failed;
  }
  out << (passed() ? "PASSED" : "FAILED") << ": " << (checks.size() - failed) << "/" << checks.size()
      << " checks passed\n";
  return out.str();
}

SampleRequest load_sample_request(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open sample request");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto ext = path.extension().string();
  if (ext == ".json") {
    SampleRequest sample{"application/json", buffer.str(), 0};
    try {
      const auto j = Json::parse(sample.body);
      if (!j.contains("text") || !j.at("text").is_array()) {
        throw ValidationError(path.string() + ": expected {\"text\": [...]}");
      }
      sample.instances = j.at("text").size();
    } catch (const Json::parse_error& e) {
      throw ValidationError(path.string() + ": invalid JSON: " + e.what());
    }
    return sample;
  }
  if (ext == ".pgm") return SampleRequest{kPgmContentType, buffer.str(), 1};
  throw ValidationError(path.string() + ": sample must be a .json or .pgm file");
}

ConformanceReport validate_service(const std::string& url, const ConformanceOptions& options) {
  auto base = normalize_base_url(url);
  Checks checks(base.value_or(url));
  if (!base) {
    for (const auto& [id, description] : check_catalog()) checks.record(id, false, "not an http base URL");
    return checks.take();
  }
  const auto t = options.timeout;

  try {
    auto r = http_get(*base, "/health", t);
    checks.record(kCheckHealth, r.status == 200, "HTTP " + std::to_string(r.status));
  } catch (const std::exception& e) {
    checks.record(kCheckHealth, false, e.what());
  }

  try {
    auto r = http_get(*base, "/model/metadata", t);
    if (r.status != 200) {
      checks.record(kCheckMetadata, false, "HTTP " + std::to_string(r.status));
    } else {
      auto violations = validate_metadata(metadata_from_json(Json::parse(r.body)));
      std::string detail;
      for (const auto& v : violations) detail += v.field + " " + v.message + "; ";
      checks.record(kCheckMetadata, violations.empty(), detail);
    }
  } catch (const std::exception& e) {
    checks.record(kCheckMetadata, false, e.what());
  }

  std::optional<SampleRequest> sample = options.sample;
  try {
    auto r = http_get(*base, "/swagger.json", t);
    if (r.status != 200) {
      checks.record(kCheckOpenApi, false, "HTTP " + std::to_string(r.status));
    } else {
      const auto doc = Json::parse(r.body);
      const bool ok = doc.is_object() && doc.contains("openapi") && doc.contains("paths") &&
                      doc.at("paths").is_object() && doc.at("paths").contains("/model/predict");
      checks.record(kCheckOpenApi, ok, ok ? "" : "document lacks paths./model/predict");
      if (!sample) sample = derive_sample(doc);
    }
  } catch (const std::exception& e) {
    checks.record(kCheckOpenApi, false, e.what());
  }

  if (!sample) {
    checks.record(kCheckPredictEnvelope, false, "no sample request available");
    checks.record(kCheckPredictAlignment, false, "no sample request available");
    checks.record(kCheckErrorEnvelope, false, "no sample request available");
    return checks.take();
  }

  try {
    auto r = http_post(*base, "/model/predict", sample->body, sample->content_type, t);
    std::optional<PredictionEnvelope> envelope;
    std::string problem;
    try {
      envelope = PredictionEnvelope::from_json(Json::parse(r.body));
    } catch (const std::exception& e) {
      problem = e.what();
    }
    const bool ok = r.status == 200 && envelope && envelope->is_ok();
    if (ok) {
      checks.record(kCheckPredictEnvelope, true, "");
      const auto n = envelope->predictions().size();
      checks.record(kCheckPredictAlignment, n == sample->instances,
                    std::to_string(n) + " predictions for " + std::to_string(sample->instances) +
                        " instances");
    } else {
      const auto detail = "HTTP " + std::to_string(r.status) + (problem.empty() ? "" : ": " + problem);
      checks.record(kCheckPredictEnvelope, false, detail);
      checks.record(kCheckPredictAlignment, false, "no ok envelope to compare");
    }
  } catch (const std::exception& e) {
    checks.record(kCheckPredictEnvelope, false, e.what());
    checks.record(kCheckPredictAlignment, false, e.what());
  }

  try {
    const auto bad = malformed_like(*sample);
    auto r = http_post(*base, "/model/predict", bad.body, bad.content_type, t);
    auto envelope = PredictionEnvelope::from_json(Json::parse(r.body));
    const bool ok = !envelope.is_ok() && r.status >= 400 && envelope.error().code == r.status;
    checks.record(kCheckErrorEnvelope, ok,
                  "HTTP " + std::to_string(r.status) +
                      (envelope.is_ok() ? ", status ok" : ", error.code " + std::to_string(envelope.error().code)));
  } catch (const std::exception& e) {
    checks.record(kCheckErrorEnvelope, false, e.what());
  }

  return checks.take();
}

}  // namespace mx
