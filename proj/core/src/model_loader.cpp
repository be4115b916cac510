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

#include "mx/model_loader.hpp"

#include <fstream>
#include <sstream>

#include "mx/detector.hpp"
#include "mx/sentiment.hpp"

namespace mx {
namespace {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelLoadError(path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ModelLoadError(path.string() + ": invalid JSON: " + e.what());
  }
}

template <typename F>
auto with_file_context(const std::filesystem::path& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ModelLoadError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::kTextClassifier:
      return "text-classifier";
    case TemplateKind::kObjectDetector:
      return "object-detector";
  }
  return "unknown";
}

std::optional<TemplateKind> template_from_string(std::string_view name) {
  if (name == "text-classifier") return TemplateKind::kTextClassifier;
  if (name == "object-detector") return TemplateKind::kObjectDetector;
  return std::nullopt;
}

std::shared_ptr<const ModelWrapper> load_model_dir(const std::filesystem::path& dir) {
  const auto metadata_path = dir / kMetadataFile;
  const auto weights_path = dir / kWeightsFile;
  const auto config_path = dir / kServiceConfigFile;

  const auto metadata =
      with_file_context(metadata_path, [&] { return metadata_from_json(read_json_file(metadata_path)); });
  if (auto violations = validate_metadata(metadata); !violations.empty()) {
    throw ModelLoadError(metadata_path.string() + ": field '" + violations.front().field + "' " +
                         violations.front().message);
  }

  const Json weights = read_json_file(weights_path);

  std::optional<TemplateKind> kind;
  if (std::filesystem::exists(config_path)) {
    const Json config = read_json_file(config_path);
    auto it = config.find("template");
    if (it != config.end()) {
      if (!it->is_string() || !(kind = template_from_string(it->get<std::string>()))) {
        throw ModelLoadError(config_path.string() + ": field 'template' must be \"text-classifier\" or \"object-detector\"");
      }
    }
  }
  if (!kind && weights.is_object()) {
    if (weights.contains("vocab")) kind = TemplateKind::kTextClassifier;
    else if (weights.contains("threshold")) kind = TemplateKind::kObjectDetector;
  }
  if (!kind) {
    throw ModelLoadError(weights_path.string() + ": cannot tell the model kind (expected field 'vocab' or 'threshold')");
  }

  if (*kind == TemplateKind::kTextClassifier) {
    auto w = with_file_context(weights_path, [&] { return sentiment_weights_from_json(weights); });
    return std::make_shared<const SentimentWrapper>(metadata, std::move(w));
  }
  auto p = with_file_context(weights_path, [&] { return detector_params_from_json(weights); });
  return std::make_shared<const DetectorWrapper>(metadata, p);
}

}  // namespace mx
