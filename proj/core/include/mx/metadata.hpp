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

#include <string>
#include <vector>

#include "mx/json.hpp"

namespace mx {

/// Identity card every model service publishes at /model/metadata.
struct ModelMetadata {
  std::string id;           // URL-safe slug: [a-z0-9][a-z0-9-]*, 1..64 chars
  std::string name;
  std::string description;
  std::string model_type;   // free-form domain tag, e.g. "object-detection"
  std::string license;      // SPDX identifier
  std::string source;       // URL or "local"

  bool operator==(const ModelMetadata&) const = default;
};

struct Violation {
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Empty result means the metadata is valid.
std::vector<Violation> validate_metadata(const ModelMetadata& m);

bool is_valid_model_id(std::string_view id);

Json to_json(const ModelMetadata& m);

/// Parses the six metadata keys. Throws ValidationError when a key is
/// missing or not a string; does not check the field invariants.
ModelMetadata metadata_from_json(const Json& j);

enum class InputKind { kJsonText, kImage };

std::string_view to_string(InputKind kind);

/// Describes how a model takes its input and what each prediction looks like.
struct IoDescriptor {
  InputKind input_kind = InputKind::kJsonText;
  std::string output_schema_id;  // e.g. "sentiment.v1", "detection.v1"
  std::vector<std::string> accepted_content_types;

  bool accepts(std::string_view mime) const;
};

std::vector<Violation> validate_io(const IoDescriptor& io);

/// Lowercased media type with parameters stripped ("Application/JSON; charset=utf-8" -> "application/json").
std::string media_type(std::string_view content_type);

}  // namespace mx
