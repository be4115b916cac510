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

#include "mx/metadata.hpp"

#include <algorithm>
#include <cctype>

namespace mx {
namespace {

constexpr std::size_t kMaxIdLength = 64;

bool is_id_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'; }

std::string required_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("metadata: missing field '") + key + "'");
  if (!it->is_string()) {
    throw ValidationError(std::string("metadata: field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

bool is_valid_model_id(std::string_view id) {
  if (id.empty() || id.size() > kMaxIdLength) return false;
  if (id.front() == '-') return false;
  return std::all_of(id.begin(), id.end(), is_id_char);
}

std::vector<Violation> validate_metadata(const ModelMetadata& m) {
  std::vector<Violation> out;
  if (!is_valid_model_id(m.id)) {
    out.push_back({"id", "must match [a-z0-9][a-z0-9-]* with length 1-64"});
  }
  if (m.name.empty()) out.push_back({"name", "must not be empty"});
  if (m.description.empty()) out.push_back({"description", "must not be empty"});
  return out;
}

Json to_json(const ModelMetadata& m) {
  return Json{{"id", m.id},
              {"name", m.name},
              {"description", m.description},
              {"model_type", m.model_type},
              {"license", m.license},
              {"source", m.source}};
}

ModelMetadata metadata_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("metadata: expected a JSON object");
  ModelMetadata m;
  m.id = required_string(j, "id");
  m.name = required_string(j, "name");
  m.description = required_string(j, "description");
  m.model_type = required_string(j, "model_type");
  m.license = required_string(j, "license");
  m.source = required_string(j, "source");
  return m;
}

std::string_view to_string(InputKind kind) {
  switch (kind) {
    case InputKind::kJsonText:
      return "json_text";
    case InputKind::kImage:
      return "image";
  }
  return "unknown";
}

std::string media_type(std::string_view content_type) {
  auto end = content_type.find(';');
  auto mt = content_type.substr(0, end);
  while (!mt.empty() && std::isspace(static_cast<unsigned char>(mt.front()))) mt.remove_prefix(1);
  while (!mt.empty() && std::isspace(static_cast<unsigned char>(mt.back()))) mt.remove_suffix(1);
  std::string out(mt);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool IoDescriptor::accepts(std::string_view mime) const {
  const auto wanted = media_type(mime);
  return std::any_of(accepted_content_types.begin(), accepted_content_types.end(),
                     [&](const std::string& t) { return media_type(t) == wanted; });
}

std::vector<Violation> validate_io(const IoDescriptor& io) {
  std::vector<Violation> out;
  if (io.accepted_content_types.empty()) {
    out.push_back({"accepted_content_types", "must not be empty"});
  }
  if (io.input_kind == InputKind::kJsonText && !io.accepts("application/json")) {
    out.push_back({"accepted_content_types", "json_text input requires application/json"});
  }
  if (io.output_schema_id.empty()) out.push_back({"output_schema_id", "must not be empty"});
  return out;
}

}  // namespace mx
