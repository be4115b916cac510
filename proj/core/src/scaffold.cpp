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

#include "mx/scaffold.hpp"

#include <fstream>
#include <random>

#include "mx/detector.hpp"
#include "mx/metadata.hpp"
#include "mx/pgm.hpp"
#include "mx/sentiment.hpp"
#include "mx/service.hpp"

namespace mx {
namespace {

namespace fs = std::filesystem;

struct GeneratedFile {
  std::string path;
  std::string contents;
  bool executable = false;
};

std::string display_name(const std::string& id) {
  std::string out;
  bool word_start = true;
  for (char c : id) {
    if (c == '-') {
      out.push_back(' ');
      word_start = true;
    } else {
      out.push_back(word_start && c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
      word_start = false;
    }
  }
  return out;
}

std::string sample_file(TemplateKind kind) {
  return kind == TemplateKind::kTextClassifier ? "sample-request.json" : "sample-request.pgm";
}

// 8x8 frame with two bright 2x2 squares.
std::string sample_image() {
  auto image = make_image(8, 8);
  for (std::size_t r : {1, 2}) {
    for (std::size_t c : {1, 2}) image.at(r, c) = 1.0;
  }
  for (std::size_t r : {5, 6}) {
    for (std::size_t c : {4, 5}) image.at(r, c) = 0.8;
  }
  return encode_pgm(image);
}

std::string dockerfile(TemplateKind kind, const std::string& id) {
  return "# Container image for the '" + id + "' " + std::string(to_string(kind)) +
         " service.\n"
         "# Build the mx runtime image first (see the mx README), then:\n"
         "#   docker build -t " + id + " .\n"
         "#   docker run -p 5000:5000 " + id + "\n"
         "ARG MX_IMAGE=mx-runtime:latest\n"
         "FROM ${MX_IMAGE}\n"
         "\n"
         "COPY metadata.json weights.json service.json /opt/model/\n"
         "\n"
         "ENV MODEL_DIR=/opt/model\n"
         "ENV PORT=5000\n"
         "EXPOSE 5000\n"
         "\n"
         "HEALTHCHECK --interval=30s --timeout=5s CMD curl -fsS http://localhost:5000/health || exit 1\n"
         "\n"
         "CMD [\"mx\", \"serve\", \"--model-dir\", \"/opt/model\", \"--port\", \"5000\"]\n";
}

std::string conformance_script(TemplateKind kind) {
  return "#!/bin/sh\n"
         "# Starts the service from this directory and checks it against the\n"
         "# standard model service contract. Requires `mx` on PATH.\n"
         "set -eu\n"
         "cd \"$(dirname \"$0\")/..\"\n"
         "PORT=\"${PORT:-5055}\"\n"
         "mx serve --model-dir . --port \"$PORT\" &\n"
         "SERVER=$!\n"
         "trap 'kill $SERVER 2>/dev/null || true' EXIT INT TERM\n"
         "i=0\n"
         "until curl -fs \"http://127.0.0.1:$PORT/health\" >/dev/null 2>&1; do\n"
         "  i=$((i + 1)); [ \"$i\" -gt 50 ] && { echo 'service did not start' >&2; exit 1; }\n"
         "  sleep 0.1\n"
         "done\n"
         "mx validate \"http://127.0.0.1:$PORT\" --sample " + sample_file(kind) + "\n";
}

std::vector<GeneratedFile> render(TemplateKind kind, const std::string& id) {
  const bool text = kind == TemplateKind::kTextClassifier;
  ModelMetadata metadata{
      id,
      display_name(id),
      text ? "Sparse linear sentiment classifier over a token vocabulary."
           : "Threshold and connected-components object detector for grayscale images.",
      text ? "text-classification" : "object-detection",
      "Apache-2.0",
      "local"};
  const Json weights = text ? to_json(default_sentiment_weights()) : to_json(DetectorParams{});
  const Json service{{"template", std::string(to_string(kind))},
                     {"port", 5000},
                     {"max_body_bytes", kDefaultMaxBodyBytes}};
  const std::string sample =
      text ? Json{{"text", Json::array({"a good movie with a great cast", "terrible and boring"})}}
                     .dump(2) + "\n"
           : sample_image();

  return {
      {kMetadataFile, to_json(metadata).dump(2) + "\n"},
      {kWeightsFile, weights.dump(2) + "\n"},
      {kServiceConfigFile, service.dump(2) + "\n"},
      {"Dockerfile", dockerfile(kind, id)},
      {sample_file(kind), sample},
      {"tests/conformance_test.sh", conformance_script(kind), true},
  };
}

void write_file(const fs::path& path, const std::string& contents, bool executable) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path.string() + ": cannot create file");
  out << contents;
  if (!out.flush()) throw Error(path.string() + ": write failed");
  if (executable) {
    fs::permissions(path, fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec,
                    fs::perm_options::add);
  }
}

}  // namespace

std::vector<std::string> template_files(TemplateKind kind) {
  std::vector<std::string> out;
  for (const auto& f : render(kind, "x")) out.push_back(f.path);
  return out;
}

std::vector<fs::path> scaffold(TemplateKind kind, const std::string& id, const fs::path& target_dir) {
  if (!is_valid_model_id(id)) {
    throw ValidationError("id '" + id + "' must match [a-z0-9][a-z0-9-]* with length 1-64");
  }
  const bool target_exists = fs::exists(target_dir);
  if (target_exists && !(fs::is_directory(target_dir) && fs::is_empty(target_dir))) {
    throw Error(target_dir.string() + " exists and is not an empty directory; refusing to overwrite");
  }

  const auto absolute = fs::absolute(target_dir).lexically_normal();
  const auto parent = absolute.has_filename() ? absolute.parent_path() : absolute.parent_path().parent_path();
  const auto name = absolute.has_filename() ? absolute.filename() : absolute.parent_path().filename();
  fs::path first_missing;  // topmost ancestor we are about to create
  for (auto p = parent; !p.empty() && !fs::exists(p); p = p.parent_path()) {
    first_missing = p;
    if (p == p.parent_path()) break;
  }
  std::random_device rd;
  const auto staging = parent / ("." + name.string() + ".mx-staging-" + std::to_string(rd()));

  try {
    fs::create_directories(staging);
    for (const auto& file : render(kind, id)) write_file(staging / file.path, file.contents, file.executable);
    if (target_exists) fs::remove(absolute);
    fs::rename(staging, absolute);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    if (target_exists && !fs::exists(absolute)) fs::create_directory(absolute, ec);
    if (!first_missing.empty()) fs::remove_all(first_missing, ec);
    throw;
  }

  std::vector<fs::path> created;
  for (const auto& file : render(kind, id)) created.push_back(target_dir / file.path);
  return created;
}

}  // namespace mx
