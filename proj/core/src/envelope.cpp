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

#include "mx/envelope.hpp"

#include <array>
#include <algorithm>

namespace mx {
namespace {

constexpr std::array kErrorCodes{400, 404, 409, 413, 415, 422, 500, 502, 503};

}  // namespace

bool is_error_code(int code) {
  return std::find(kErrorCodes.begin(), kErrorCodes.end(), code) != kErrorCodes.end();
}

PredictionEnvelope PredictionEnvelope::ok(std::vector<Json> predictions) {
  PredictionEnvelope e;
  e.status_ = Status::kOk;
  e.predictions_ = std::move(predictions);
  return e;
}

PredictionEnvelope PredictionEnvelope::failure(int code, std::string message) {
  if (!is_error_code(code)) code = 500;
  PredictionEnvelope e;
  e.status_ = Status::kError;
  e.error_ = ErrorBody{code, std::move(message)};
  return e;
}

Json PredictionEnvelope::to_json() const {
  if (is_ok()) {
    Json preds = Json::array();
    for (const auto& p : *predictions_) preds.push_back(p);
    return Json{{"status", "ok"}, {"predictions", std::move(preds)}};
  }
  return Json{{"status", "error"},
              {"error", Json{{"code", error_->code}, {"message", error_->message}}}};
}

PredictionEnvelope PredictionEnvelope::from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("envelope: expected a JSON object");
  auto status = j.find("status");
  if (status == j.end() || !status->is_string()) {
    throw ValidationError("envelope: missing string field 'status'");
  }
  const bool has_predictions = j.contains("predictions");
  const bool has_error = j.contains("error");
  if (*status == "ok") {
    if (!has_predictions || has_error) {
      throw ValidationError("envelope: status ok requires predictions and no error");
    }
    const auto& preds = j.at("predictions");
    if (!preds.is_array()) throw ValidationError("envelope: predictions must be an array");
    return ok(std::vector<Json>(preds.begin(), preds.end()));
  }
  if (*status == "error") {
    if (!has_error || has_predictions) {
      throw ValidationError("envelope: status error requires error and no predictions");
    }
    const auto& err = j.at("error");
    if (!err.is_object() || !err.contains("code") || !err.at("code").is_number_integer() ||
        !err.contains("message") || !err.at("message").is_string()) {
      throw ValidationError("envelope: error must be {code: integer, message: string}");
    }
    const int code = err.at("code").get<int>();
    if (!is_error_code(code)) {
      throw ValidationError("envelope: error.code " + std::to_string(code) + " is not allowed");
    }
    return failure(code, err.at("message").get<std::string>());
  }
  throw ValidationError("envelope: status must be \"ok\" or \"error\"");
}

std::string error_envelope(int code, std::string message) {
  return PredictionEnvelope::failure(code, std::move(message)).serialize();
}

}  // namespace mx
