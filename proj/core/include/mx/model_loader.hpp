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
#include <optional>
#include <string_view>

#include "mx/wrapper.hpp"

namespace mx {

/// The skeleton a model directory was generated from; also selects which
/// reference model a directory holds.
enum class TemplateKind { kTextClassifier, kObjectDetector };

std::string_view to_string(TemplateKind kind);
std::optional<TemplateKind> template_from_string(std::string_view name);

inline constexpr const char* kMetadataFile = "metadata.json";
inline constexpr const char* kWeightsFile = "weights.json";
inline constexpr const char* kServiceConfigFile = "service.json";

/// Thrown when a model directory cannot be loaded. The message names the
/// file and, where relevant, the field.
class ModelLoadError : public Error {
 public:
  using Error::Error;
};

/// Loads metadata.json and weights.json from dir. The model kind comes from
/// service.json's "template" key when present, otherwise from the shape of
/// weights.json ("vocab" -> text classifier, "threshold" -> detector).
std::shared_ptr<const ModelWrapper> load_model_dir(const std::filesystem::path& dir);

}  // namespace mx
