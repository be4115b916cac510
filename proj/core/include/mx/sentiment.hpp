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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mx/json.hpp"
#include "mx/wrapper.hpp"

namespace mx {

/// Lowercased maximal runs of ASCII alphanumerics; everything else separates.
std::vector<std::string> tokenize(std::string_view text);

/// Sparse linear model over a token vocabulary.
struct SentimentWeights {
  std::map<std::string, double, std::less<>> vocab;
  double bias = 0.0;

  /// Tokens must be lowercase, non-empty and whitespace free.
  std::vector<std::string> invalid_tokens() const;
};

struct SentimentScore {
  double positive = 0.5;
  double negative = 0.5;

  bool operator==(const SentimentScore&) const = default;
};

/// z = bias + sum of token weights (multiplicity counts, unknown tokens add
/// 0); positive = 1/(1+e^-z), negative = 1/(1+e^z).
std::vector<SentimentScore> sentiment_predict(
    const SentimentWeights& weights, const std::vector<std::vector<std::string>>& instances);

/// Weight file: {"vocab": {token: weight}, "bias": number}. Throws
/// ValidationError naming the offending field.
SentimentWeights sentiment_weights_from_json(const Json& j);
Json to_json(const SentimentWeights& w);

/// Weights used by the scaffold template and the test fixtures.
SentimentWeights default_sentiment_weights();

inline constexpr const char* kSentimentSchemaId = "sentiment.v1";

IoDescriptor sentiment_io();

using TokenBatch = std::vector<std::vector<std::string>>;

/// Text classifier wrapper. Each prediction is [{"positive":p,"negative":n}].
class SentimentWrapper final : public PipelineWrapper<TokenBatch, std::vector<SentimentScore>> {
 public:
  SentimentWrapper(ModelMetadata metadata, SentimentWeights weights);

  const SentimentWeights& weights() const { return weights_; }

 protected:
  TokenBatch pre_process(const ParsedRequest& request) const override;
  std::vector<SentimentScore> predict(const TokenBatch& input) const override;
  std::vector<Json> post_process(const std::vector<SentimentScore>& raw) const override;

 private:
  const SentimentWeights weights_;
};

}  // namespace mx
