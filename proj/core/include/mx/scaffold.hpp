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
#include <string>
#include <vector>

#include "mx/model_loader.hpp"

namespace mx {

/// Relative paths every generated skeleton contains, in creation order.
std::vector<std::string> template_files(TemplateKind kind);

/// Generates a runnable model service skeleton for id in target_dir:
/// metadata.json, weights.json, service.json, Dockerfile, a sample request
/// (sample-request.json or sample-request.pgm) and tests/conformance_test.sh.
///
/// Returns the created paths. Throws ValidationError for an invalid id and
/// Error if target_dir exists and is not an empty directory. On failure the
/// filesystem is left as it was.
std::vector<std::filesystem::path> scaffold(TemplateKind kind, const std::string& id,
                                            const std::filesystem::path& target_dir);

}  // namespace mx
