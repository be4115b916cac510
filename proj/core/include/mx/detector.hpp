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

#include <array>
#include <string>
#include <vector>

#include "mx/json.hpp"
#include "mx/pgm.hpp"
#include "mx/wrapper.hpp"

namespace mx {

struct Detection {
  std::string label_id = "1";
  std::string label = "object";
  double probability = 0.0;
  // [ymin, xmin, ymax, xmax], normalized to [0,1]
  std::array<double, 4> detection_box{};

  bool operator==(const Detection&) const = default;
};

Json to_json(const Detection& d);

struct DetectorParams {
  double threshold = 0.5;    // foreground iff intensity > threshold
  std::size_t min_area = 4;  // smallest component kept, in pixels
};

/// Throws ValidationError naming the offending field.
DetectorParams detector_params_from_json(const Json& j);
Json to_json(const DetectorParams& p);

/// Thresholds the image, labels 4-connected foreground components and
/// reports one Detection per component with at least min_area pixels.
///
/// probability is the mean intensity of the component, summed in row-major
/// order. Output is sorted by probability descending, then (ymin, xmin)
/// ascending; remaining ties fall back to (ymax, xmax) and then to the
/// component's first pixel in row-major order.
std::vector<Detection> detect_components(const GrayImage& image, double threshold = 0.5,
                                         std::size_t min_area = 4);

inline constexpr const char* kDetectionSchemaId = "detection.v1";
inline constexpr const char* kPgmContentType = "image/x-portable-graymap";
inline constexpr const char* kMultipartContentType = "multipart/form-data";

IoDescriptor detector_io();

/// Object detector wrapper. The single prediction is an array of detections.
class DetectorWrapper final : public PipelineWrapper<GrayImage, std::vector<Detection>> {
 public:
  DetectorWrapper(ModelMetadata metadata, DetectorParams params);

  const DetectorParams& params() const { return params_; }

 protected:
  GrayImage pre_process(const ParsedRequest& request) const override;
  std::vector<Detection> predict(const GrayImage& input) const override;
  std::vector<Json> post_process(const std::vector<Detection>& raw) const override;

 private:
  const DetectorParams params_;
};

}  // namespace mx
