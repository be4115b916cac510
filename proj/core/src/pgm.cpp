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

#include "mx/pgm.hpp"

#include <cmath>
#include <string>

#include "mx/json.hpp"

namespace mx {
namespace {

constexpr std::size_t kMaxDimension = 1 << 16;

bool is_pnm_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ >= bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::uint8_t peek() const { return bytes_[pos_]; }
  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

  // Whitespace and '#' comments, which run to the end of the line.
  void skip_separators() {
    while (!at_end()) {
      if (is_pnm_space(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_unsigned(const char* what) {
    skip_separators();
    if (at_end()) throw DecodeError(std::string("pgm: truncated before ") + what);
    if (peek() < '0' || peek() > '9') {
      throw DecodeError(std::string("pgm: expected a decimal ") + what);
    }
    std::size_t value = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      value = value * 10 + (peek() - '0');
      if (value > (std::size_t{1} << 32)) throw DecodeError(std::string("pgm: ") + what + " too large");
      ++pos_;
    }
    if (!at_end() && !is_pnm_space(peek()) && peek() != '#') {
      throw DecodeError(std::string("pgm: malformed ") + what);
    }
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage make_image(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw ValidationError("image dimensions must be at least 1x1");
  return GrayImage{width, height, std::vector<double>(width * height, 0.0)};
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (in.remaining() < 2 || in.rest()[0] != 'P') throw DecodeError("pgm: missing magic number");
  const std::uint8_t kind = in.rest()[1];
  if (kind != '2' && kind != '5') {
    throw DecodeError(std::string("pgm: unsupported magic P") + static_cast<char>(kind));
  }
  in.advance(2);
  if (!in.at_end() && !is_pnm_space(in.peek()) && in.peek() != '#') {
    throw DecodeError("pgm: malformed magic number");
  }

  const auto width = in.read_unsigned("width");
  const auto height = in.read_unsigned("height");
  const auto maxval = in.read_unsigned("maxval");
  if (width == 0 || height == 0) throw DecodeError("pgm: width and height must be positive");
  if (width > kMaxDimension || height > kMaxDimension) throw DecodeError("pgm: image too large");
  if (maxval == 0 || maxval > 255) throw DecodeError("pgm: maxval must be in 1..255");

  GrayImage image{width, height, std::vector<double>(width * height)};
  const double scale = static_cast<double>(maxval);

  if (kind == '5') {
    // Exactly one whitespace byte separates the header from the raster.
    if (in.at_end() || !is_pnm_space(in.peek())) throw DecodeError("pgm: truncated header");
    in.advance(1);
    if (in.remaining() < image.data.size()) throw DecodeError("pgm: truncated pixel data");
    auto raster = in.rest();
    for (std::size_t i = 0; i < image.data.size(); ++i) {
      if (raster[i] > maxval) throw DecodeError("pgm: sample exceeds maxval");
      image.data[i] = raster[i] / scale;
    }
  } else {
    for (std::size_t i = 0; i < image.data.size(); ++i) {
      in.skip_separators();
      if (in.at_end()) throw DecodeError("pgm: truncated pixel data");
      const auto sample = in.read_unsigned("sample");
      if (sample > maxval) throw DecodeError("pgm: sample exceeds maxval");
      image.data[i] = static_cast<double>(sample) / scale;
    }
  }
  return image;
}

GrayImage decode_pgm(std::string_view bytes) {
  return decode_pgm(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.data.size());
  for (double v : image.data) {
    const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    out.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(clamped * 255.0))));
  }
  return out;
}

}  // namespace mx
