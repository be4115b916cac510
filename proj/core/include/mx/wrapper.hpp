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

#include <cstdint>
#include <exception>
#include <string>
#include <variant>
#include <vector>

#include "mx/envelope.hpp"
#include "mx/metadata.hpp"

namespace mx {

using ImageBytes = std::vector<std::uint8_t>;

/// A request after content negotiation: either a batch of text instances or
/// one encoded image.
struct ParsedRequest {
  std::variant<std::vector<std::string>, ImageBytes> instances;
  std::string declared_content_type;

  std::size_t instance_count() const;
};

enum class Stage { kPreProcess, kPredict, kPostProcess };

std::string_view to_string(Stage stage);

/// A failure inside one of the three pipeline stages.
class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& message)
      : Error(message), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

/// Type-erased model wrapper. Immutable once constructed; every member is
/// safe to call from multiple threads.
class ModelWrapper {
 public:
  virtual ~ModelWrapper() = default;

  virtual const ModelMetadata& metadata() const = 0;
  virtual const IoDescriptor& io() const = 0;

  /// Runs pre_process -> predict -> post_process and returns one JSON value
  /// per input instance. Throws StageError tagged with the failing stage.
  virtual std::vector<Json> run_stages(const ParsedRequest& request) const = 0;
};

/// Base for concrete models. Subclasses implement the three stages; the
/// stage plumbing and error tagging live here.
template <typename ModelInput, typename RawOutput>
class PipelineWrapper : public ModelWrapper {
 public:
  PipelineWrapper(ModelMetadata metadata, IoDescriptor io)
      : metadata_(std::move(metadata)), io_(std::move(io)) {}

  const ModelMetadata& metadata() const final { return metadata_; }
  const IoDescriptor& io() const final { return io_; }

  std::vector<Json> run_stages(const ParsedRequest& request) const final {
    auto input = guarded(Stage::kPreProcess, [&] { return pre_process(request); });
    auto raw = guarded(Stage::kPredict, [&] { return predict(input); });
    return guarded(Stage::kPostProcess, [&] { return post_process(raw); });
  }

 protected:
  virtual ModelInput pre_process(const ParsedRequest& request) const = 0;
  virtual RawOutput predict(const ModelInput& input) const = 0;
  virtual std::vector<Json> post_process(const RawOutput& raw) const = 0;

 private:
  template <typename F>
  static auto guarded(Stage stage, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    } catch (...) {
      throw StageError(stage, "unknown failure");
    }
  }

  ModelMetadata metadata_;
  IoDescriptor io_;
};

/// Runs the wrapper over a negotiated request. Never throws: a pre_process
/// failure becomes a 400 envelope, predict/post_process failures and batch
/// misalignment become 500.
PredictionEnvelope run_pipeline(const ModelWrapper& wrapper, const ParsedRequest& request);

}  // namespace mx
