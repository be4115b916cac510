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

#include "mx/json.hpp"
#include "mx/metadata.hpp"

namespace mx {

inline constexpr const char* kOpenApiVersion = "3.0.3";

/// Builds the OpenAPI 3.0 document for a model service: /model/metadata,
/// /model/predict and /health, with the envelope and metadata schemas under
/// components. Throws ValidationError if the metadata or io descriptor is
/// invalid.
Json build_openapi(const ModelMetadata& metadata, const IoDescriptor& io);

}  // namespace mx
