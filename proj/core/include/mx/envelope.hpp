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

#include <optional>
#include <string>
#include <vector>

#include "mx/json.hpp"

namespace mx {

enum class Status { kOk, kError };

struct ErrorBody {
  int code = 500;       // mirrors the HTTP status
  std::string message;  // human readable, never a stack trace

  bool operator==(const ErrorBody&) const = default;
};

/// True for the HTTP codes an error envelope may carry.
bool is_error_code(int code);

/// The standardized response wrapper: {"status":"ok","predictions":[...]}
/// or {"status":"error","error":{"code":...,"message":...}}.
///
/// Exactly one of predictions / error is engaged, matching status. Use the
/// factories; they are the only way to build an envelope.
class PredictionEnvelope {
 public:
  static PredictionEnvelope ok(std::vector<Json> predictions);
  static PredictionEnvelope failure(int code, std::string message);

  Status status() const { return status_; }
  bool is_ok() const { return status_ == Status::kOk; }
  const std::vector<Json>& predictions() const { return *predictions_; }
  const ErrorBody& error() const { return *error_; }

  /// HTTP status this envelope should be sent with.
  int http_status() const { return is_ok() ? 200 : error_->code; }

  Json to_json() const;
  std::string serialize() const { return to_wire(to_json()); }

  /// Strict parse: rejects anything that is not a well-formed envelope.
  static PredictionEnvelope from_json(const Json& j);

  bool operator==(const PredictionEnvelope&) const = default;

 private:
  PredictionEnvelope() = default;

  Status status_ = Status::kOk;
  std::optional<std::vector<Json>> predictions_;
  std::optional<ErrorBody> error_;
};

/// Error body in envelope form, used by the registry for its own failures.
std::string error_envelope(int code, std::string message);

}  // namespace mx
