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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mx {

/// Row-major grayscale image with intensities in [0,1].
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> data;

  double at(std::size_t row, std::size_t col) const { return data[row * width + col]; }
  double& at(std::size_t row, std::size_t col) { return data[row * width + col]; }

  bool operator==(const GrayImage&) const = default;
};

/// Zero-filled image. Throws ValidationError for a zero dimension.
GrayImage make_image(std::size_t width, std::size_t height);

/// Decodes a P2 (ASCII) or P5 (binary) PGM with maxval <= 255. Samples are
/// divided by maxval. Throws DecodeError on any malformed or truncated input.
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
GrayImage decode_pgm(std::string_view bytes);

/// Encodes as binary P5 with maxval 255; intensities are rounded.
std::string encode_pgm(const GrayImage& image);

}  // namespace mx
