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

#include "mx/detector.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace mx {
namespace {

class DisjointSet {
 public:
  std::size_t make() {
    parent_.push_back(parent_.size());
    return parent_.back();
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Component {
  std::size_t first_pixel = 0;  // row-major index, unique per component
  std::size_t area = 0;
  double sum = 0.0;
  std::size_t r0 = 0, c0 = 0, r1 = 0, c1 = 0;
};

constexpr std::size_t kBackground = static_cast<std::size_t>(-1);

}  // namespace

Json to_json(const Detection& d) {
  return Json{{"label_id", d.label_id},
              {"label", d.label},
              {"probability", d.probability},
              {"detection_box", Json::array({d.detection_box[0], d.detection_box[1],
                                             d.detection_box[2], d.detection_box[3]})}};
}

DetectorParams detector_params_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  DetectorParams p;
  if (auto it = j.find("threshold"); it != j.end()) {
    if (!it->is_number()) throw ValidationError("field 'threshold' must be a number");
    p.threshold = it->get<double>();
    if (!(p.threshold >= 0.0 && p.threshold <= 1.0)) {
      throw ValidationError("field 'threshold' must lie in [0, 1]");
    }
  } else {
    throw ValidationError("missing field 'threshold'");
  }
  if (auto it = j.find("min_area"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1) {
      throw ValidationError("field 'min_area' must be an integer >= 1");
    }
    p.min_area = it->get<std::size_t>();
  } else {
    throw ValidationError("missing field 'min_area'");
  }
  return p;
}

Json to_json(const DetectorParams& p) {
  return Json{{"threshold", p.threshold}, {"min_area", p.min_area}};
}

std::vector<Detection> detect_components(const GrayImage& image, double threshold,
                                         std::size_t min_area) {
  const std::size_t w = image.width;
  const std::size_t h = image.height;
  std::vector<std::size_t> labels(w * h, kBackground);
  DisjointSet sets;

  // First pass: provisional labels from the up and left neighbours.
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      if (!(image.data[i] > threshold)) continue;
      const std::size_t up = r > 0 ? labels[i - w] : kBackground;
      const std::size_t left = c > 0 ? labels[i - 1] : kBackground;
      if (up == kBackground && left == kBackground) {
        labels[i] = sets.make();
      } else if (up == kBackground) {
        labels[i] = left;
      } else {
        labels[i] = up;
        if (left != kBackground) sets.unite(up, left);
      }
    }
  }

  // Second pass: accumulate per-component statistics in row-major order.
  std::vector<Component> components;
  std::vector<std::size_t> slot;  // root label -> index into components
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kBackground) continue;
    const std::size_t root = sets.find(labels[i]);
    if (root >= slot.size()) slot.resize(root + 1, kBackground);
    const std::size_t r = i / w;
    const std::size_t c = i % w;
    if (slot[root] == kBackground) {
      slot[root] = components.size();
      components.push_back(Component{i, 0, 0.0, r, c, r, c});
    }
    auto& comp = components[slot[root]];
    comp.area += 1;
    comp.sum += image.data[i];
    comp.r0 = std::min(comp.r0, r);
    comp.r1 = std::max(comp.r1, r);
    comp.c0 = std::min(comp.c0, c);
    comp.c1 = std::max(comp.c1, c);
  }

  struct Ranked {
    Detection detection;
    std::size_t first_pixel;
  };
  std::vector<Ranked> ranked;
  const auto hd = static_cast<double>(h);
  const auto wd = static_cast<double>(w);
  for (const auto& comp : components) {
    if (comp.area < min_area) continue;
    Detection d;
    d.probability = comp.sum / static_cast<double>(comp.area);
    d.detection_box = {static_cast<double>(comp.r0) / hd, static_cast<double>(comp.c0) / wd,
                       static_cast<double>(comp.r1 + 1) / hd, static_cast<double>(comp.c1 + 1) / wd};
    ranked.push_back({std::move(d), comp.first_pixel});
  }

  // Probability descending, then (ymin, xmin) ascending. Nested components
  // can share a top-left corner, so (ymax, xmax) and the first pixel in
  // row-major order complete the order.
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    const auto& ba = a.detection.detection_box;
    const auto& bb = b.detection.detection_box;
    if (a.detection.probability != b.detection.probability) {
      return a.detection.probability > b.detection.probability;
    }
    return std::tie(ba[0], ba[1], ba[2], ba[3], a.first_pixel) <
           std::tie(bb[0], bb[1], bb[2], bb[3], b.first_pixel);
  });

  std::vector<Detection> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) out.push_back(std::move(r.detection));
  return out;
}

IoDescriptor detector_io() {
  return IoDescriptor{InputKind::kImage, kDetectionSchemaId, {kMultipartContentType, kPgmContentType}};
}

DetectorWrapper::DetectorWrapper(ModelMetadata metadata, DetectorParams params)
    : PipelineWrapper(std::move(metadata), detector_io()), params_(params) {}

GrayImage DetectorWrapper::pre_process(const ParsedRequest& request) const {
  const auto* bytes = std::get_if<ImageBytes>(&request.instances);
  if (bytes == nullptr) throw Error("image model received a non-image request");
  return decode_pgm(std::span<const std::uint8_t>(*bytes));
}

std::vector<Detection> DetectorWrapper::predict(const GrayImage& input) const {
  return detect_components(input, params_.threshold, params_.min_area);
}

std::vector<Json> DetectorWrapper::post_process(const std::vector<Detection>& raw) const {
  Json detections = Json::array();
  for (const auto& d : raw) detections.push_back(to_json(d));
  return {std::move(detections)};
}

}  // namespace mx
