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

#include "mx/wrapper.hpp"

namespace mx {

std::size_t ParsedRequest::instance_count() const {
  if (const auto* texts = std::get_if<std::vector<std::string>>(&instances)) return texts->size();
  return 1;
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kPreProcess:
      return "pre_process";
    case Stage::kPredict:
      return "predict";
    case Stage::kPostProcess:
      return "post_process";
  }
  return "unknown";
}

PredictionEnvelope run_pipeline(const ModelWrapper& wrapper, const ParsedRequest& request) {
  try {
    auto predictions = wrapper.run_stages(request);
    if (predictions.size() != request.instance_count()) {
      return PredictionEnvelope::failure(
          500, "model returned " + std::to_string(predictions.size()) + " predictions for " +
                   std::to_string(request.instance_count()) + " instances");
    }
    return PredictionEnvelope::ok(std::move(predictions));
  } catch (const StageError& e) {
    const int code = e.stage() == Stage::kPreProcess ? 400 : 500;
    return PredictionEnvelope::failure(code, std::string(to_string(e.stage())) + ": " + e.what());
  } catch (const std::exception& e) {
    return PredictionEnvelope::failure(500, e.what());
  }
}

}  // namespace mx
