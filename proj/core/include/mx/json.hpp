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

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace mx {

// Insertion-ordered JSON: the wire format fixes key order.
using Json = nlohmann::ordered_json;

// Serializes with no whitespace. Doubles use the shortest representation
// that round-trips.
/// Compact serialization; invalid UTF-8 in strings becomes U+FFFD.
inline std::string to_wire(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value that breaks a documented invariant (bad id, malformed weights...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace mx
