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

#include "mx/sentiment.hpp"

#include <cctype>
#include <cmath>

namespace mx {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_ascii_alnum(c)) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> SentimentWeights::invalid_tokens() const {
  std::vector<std::string> bad;
  for (const auto& [token, weight] : vocab) {
    bool ok = !token.empty();
    for (char c : token) {
      const auto u = static_cast<unsigned char>(c);
      if (std::isspace(u) || std::isupper(u)) ok = false;
    }
    if (!ok) bad.push_back(token);
  }
  return bad;
}

std::vector<SentimentScore> sentiment_predict(const SentimentWeights& weights,
                                              const std::vector<std::vector<std::string>>& instances) {
  std::vector<SentimentScore> scores;
  scores.reserve(instances.size());
  for (const auto& tokens : instances) {
    double z = weights.bias;
    for (const auto& token : tokens) {
      if (auto it = weights.vocab.find(token); it != weights.vocab.end()) z += it->second;
    }
    // negative is sigmoid(-z), not 1 - positive, so both sides keep full precision.
    scores.push_back({sigmoid(z), sigmoid(-z)});
  }
  return scores;
}

SentimentWeights sentiment_weights_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  SentimentWeights w;
  auto vocab = j.find("vocab");
  if (vocab == j.end()) throw ValidationError("missing field 'vocab'");
  if (!vocab->is_object()) throw ValidationError("field 'vocab' must be an object");
  for (const auto& [token, weight] : vocab->items()) {
    if (!weight.is_number()) {
      throw ValidationError("field 'vocab." + token + "' must be a number");
    }
    w.vocab.emplace(token, weight.get<double>());
  }
  auto bias = j.find("bias");
  if (bias == j.end()) throw ValidationError("missing field 'bias'");
  if (!bias->is_number()) throw ValidationError("field 'bias' must be a number");
  w.bias = bias->get<double>();
  if (auto bad = w.invalid_tokens(); !bad.empty()) {
    throw ValidationError("field 'vocab' has invalid token '" + bad.front() +
                          "' (tokens must be lowercase, non-empty, without whitespace)");
  }
  return w;
}

Json to_json(const SentimentWeights& w) {
  Json vocab = Json::object();
  for (const auto& [token, weight] : w.vocab) vocab[token] = weight;
  return Json{{"vocab", std::move(vocab)}, {"bias", w.bias}};
}

SentimentWeights default_sentiment_weights() {
  SentimentWeights w;
  w.vocab = {{"good", 2.0},      {"great", 2.5},   {"excellent", 3.0}, {"love", 2.0},
             {"wonderful", 2.5}, {"best", 1.5},    {"fun", 1.0},       {"bad", -2.0},
             {"terrible", -3.0}, {"awful", -2.5},  {"worst", -2.5},    {"boring", -1.5},
             {"hate", -2.0},     {"poor", -1.5},   {"not", -0.5}};
  w.bias = 0.0;
  return w;
}

IoDescriptor sentiment_io() {
  return IoDescriptor{InputKind::kJsonText, kSentimentSchemaId, {"application/json"}};
}

SentimentWrapper::SentimentWrapper(ModelMetadata metadata, SentimentWeights weights)
    : PipelineWrapper(std::move(metadata), sentiment_io()), weights_(std::move(weights)) {}

TokenBatch SentimentWrapper::pre_process(const ParsedRequest& request) const {
  const auto* texts = std::get_if<std::vector<std::string>>(&request.instances);
  if (texts == nullptr) throw Error("text model received a non-text request");
  TokenBatch batch;
  batch.reserve(texts->size());
  for (const auto& text : *texts) batch.push_back(tokenize(text));
  return batch;
}

std::vector<SentimentScore> SentimentWrapper::predict(const TokenBatch& input) const {
  return sentiment_predict(weights_, input);
}

std::vector<Json> SentimentWrapper::post_process(const std::vector<SentimentScore>& raw) const {
  std::vector<Json> out;
  out.reserve(raw.size());
  for (const auto& s : raw) {
    out.push_back(Json::array({Json{{"positive", s.positive}, {"negative", s.negative}}}));
  }
  return out;
}

}  // namespace mx
