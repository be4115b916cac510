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

#include "mx/openapi.hpp"

#include <string>

namespace mx {
namespace {

Json ref(const std::string& name) { return Json{{"$ref", "#/components/schemas/" + name}}; }

Json json_content(const Json& schema) {
  return Json{{"application/json", Json{{"schema", schema}}}};
}

Json request_schema(const std::string& content_type) {
  const auto mt = media_type(content_type);
  if (mt == "application/json") {
    return Json{{"type", "object"},
                {"required", Json::array({"text"})},
                {"properties",
                 Json{{"text", Json{{"type", "array"},
                                    {"minItems", 1},
                                    {"items", Json{{"type", "string"}}}}}}}};
  }
  if (mt == "multipart/form-data") {
    return Json{{"type", "object"},
                {"required", Json::array({"image"})},
                {"properties", Json{{"image", Json{{"type", "string"}, {"format", "binary"}}}}}};
  }
  return Json{{"type", "string"}, {"format", "binary"}};
}

Json number_in_unit_interval() { return Json{{"type", "number"}, {"minimum", 0}, {"maximum", 1}}; }

// Shape of one entry of "predictions", keyed by output_schema_id.
Json prediction_schema(const std::string& schema_id) {
  if (schema_id == "sentiment.v1") {
    return Json{{"type", "array"},
                {"items", Json{{"type", "object"},
                               {"required", Json::array({"positive", "negative"})},
                               {"properties", Json{{"positive", number_in_unit_interval()},
                                                   {"negative", number_in_unit_interval()}}}}}};
  }
  if (schema_id == "detection.v1") {
    return Json{
        {"type", "array"},
        {"items",
         Json{{"type", "object"},
              {"required", Json::array({"label_id", "label", "probability", "detection_box"})},
              {"properties",
               Json{{"label_id", Json{{"type", "string"}}},
                    {"label", Json{{"type", "string"}}},
                    {"probability", number_in_unit_interval()},
                    {"detection_box", Json{{"type", "array"},
                                           {"minItems", 4},
                                           {"maxItems", 4},
                                           {"items", number_in_unit_interval()}}}}}}}};
  }
  return Json::object();
}

Json components(const IoDescriptor& io) {
  Json string_type{{"type", "string"}};
  Json metadata{{"type", "object"},
                {"required", Json::array({"id", "name", "description", "model_type", "license",
                                          "source"})},
                {"properties", Json{{"id", Json{{"type", "string"},
                                                {"pattern", "^[a-z0-9][a-z0-9-]*$"},
                                                {"maxLength", 64}}},
                                    {"name", Json{{"type", "string"}, {"minLength", 1}}},
                                    {"description", Json{{"type", "string"}, {"minLength", 1}}},
                                    {"model_type", string_type},
                                    {"license", string_type},
                                    {"source", string_type}}}};
  Json error_body{{"type", "object"},
                  {"required", Json::array({"code", "message"})},
                  {"properties", Json{{"code", Json{{"type", "integer"}}},
                                      {"message", string_type}}}};
  Json envelope{{"type", "object"},
                {"required", Json::array({"status", "predictions"})},
                {"properties",
                 Json{{"status", Json{{"type", "string"}, {"enum", Json::array({"ok"})}}},
                      {"predictions", Json{{"type", "array"}, {"items", ref("Prediction")}}}}}};
  Json error_envelope{{"type", "object"},
                      {"required", Json::array({"status", "error"})},
                      {"properties",
                       Json{{"status", Json{{"type", "string"}, {"enum", Json::array({"error"})}}},
                            {"error", ref("ErrorBody")}}}};
  Json prediction = prediction_schema(io.output_schema_id);
  prediction["x-schema-id"] = io.output_schema_id;
  return Json{{"schemas", Json{{"ModelMetadata", std::move(metadata)},
                               {"Prediction", std::move(prediction)},
                               {"PredictionEnvelope", std::move(envelope)},
                               {"ErrorBody", std::move(error_body)},
                               {"ErrorEnvelope", std::move(error_envelope)}}}};
}

Json error_response(const char* description) {
  return Json{{"description", description}, {"content", json_content(ref("ErrorEnvelope"))}};
}

}  // namespace

Json build_openapi(const ModelMetadata& metadata, const IoDescriptor& io) {
  auto violations = validate_metadata(metadata);
  auto io_violations = validate_io(io);
  violations.insert(violations.end(), io_violations.begin(), io_violations.end());
  if (!violations.empty()) {
    std::string msg = "cannot build OpenAPI document:";
    for (const auto& v : violations) msg += " " + v.field + " " + v.message + ";";
    throw ValidationError(msg);
  }

  Json request_content = Json::object();
  for (const auto& ct : io.accepted_content_types) {
    request_content[media_type(ct)] = Json{{"schema", request_schema(ct)}};
  }

  Json metadata_op{
      {"summary", "Return the model metadata"},
      {"operationId", "getMetadata"},
      {"tags", Json::array({"model"})},
      {"responses", Json{{"200", Json{{"description", "Model metadata"},
                                      {"content", json_content(ref("ModelMetadata"))}}},
                         {"503", error_response("Model not loaded yet")}}}};

  Json predict_op{
      {"summary", "Run a prediction"},
      {"operationId", "predict"},
      {"tags", Json::array({"model"})},
      {"requestBody", Json{{"required", true}, {"content", std::move(request_content)}}},
      {"responses",
       Json{{"200", Json{{"description", "One prediction per input instance"},
                         {"content", json_content(ref("PredictionEnvelope"))}}},
            {"400", error_response("Malformed request")},
            {"413", error_response("Request body too large")},
            {"415", error_response("Unsupported content type")},
            {"422", error_response("Empty instance list")},
            {"500", error_response("Model failure")},
            {"503", error_response("Model not loaded yet")}}}};

  Json health_op{
      {"summary", "Liveness and readiness"},
      {"operationId", "health"},
      {"tags", Json::array({"service"})},
      {"responses",
       Json{{"200", Json{{"description", "Model loaded and serving"},
                         {"content",
                          json_content(Json{{"type", "object"},
                                            {"properties", Json{{"status", Json{{"type",
                                                                                  "string"}}}}}})}}},
            {"503", error_response("Model not loaded yet")}}}};

  return Json{{"openapi", kOpenApiVersion},
              {"info", Json{{"title", metadata.name},
                            {"description", metadata.description},
                            {"version", "1.0.0"},
                            {"license", Json{{"name", metadata.license}}},
                            {"x-model-id", metadata.id},
                            {"x-model-type", metadata.model_type},
                            {"x-input-kind", std::string(to_string(io.input_kind))}}},
              {"paths", Json{{"/model/metadata", Json{{"get", std::move(metadata_op)}}},
                             {"/model/predict", Json{{"post", std::move(predict_op)}}},
                             {"/health", Json{{"get", std::move(health_op)}}}}},
              {"components", components(io)}};
}

}  // namespace mx
