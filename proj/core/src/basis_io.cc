// Copyright 2026 The codec-lens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "codec_lens/basis_io.h"

#include <cstdio>

#include "codec_lens/error.h"
#include "codec_lens/image_io.h"
#include "codec_lens/render.h"

namespace codec_lens {
namespace {

std::string TileName(std::size_t channel) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "channel_%03zu.png", channel);
  return buf;
}

}  // namespace

nlohmann::json basis_index(const BasisSet& basis) {
  nlohmann::json entries = nlohmann::json::array();
  for (const BasisEntry& e : basis.entries) {
    const auto data = e.image.data();
    entries.push_back({{"channel", e.channel},
                       {"amplitude", e.amplitude},
                       {"rank", e.rank ? nlohmann::json(*e.rank) : nlohmann::json(nullptr)},
                       {"file", TileName(e.channel)},
                       {"shape", {e.image.channels(), e.image.height(), e.image.width()}},
                       {"values", std::vector<double>(data.begin(), data.end())}});
  }
  return {{"decoder", basis.decoder_name},
          {"offset_free", basis.offset_free},
          {"impulse_extent", basis.impulse_extent},
          {"entries", entries}};
}

BasisSet basis_from_index(const nlohmann::json& index) {
  BasisSet basis;
  try {
    basis.decoder_name = index.value("decoder", std::string());
    basis.offset_free = index.value("offset_free", false);
    basis.impulse_extent = index.value("impulse_extent", std::size_t{1});
    for (const auto& je : index.at("entries")) {
      BasisEntry e;
      e.channel = je.at("channel").get<std::size_t>();
      e.amplitude = je.at("amplitude").get<double>();
      if (!je.at("rank").is_null()) e.rank = je.at("rank").get<std::size_t>();
      const auto shape = je.at("shape").get<std::vector<std::size_t>>();
      if (shape.size() != 3) throw ShapeError("basis index: shape must have 3 entries");
      e.image = Tensor3(Shape3{shape[0], shape[1], shape[2]},
                        je.at("values").get<std::vector<double>>());
      basis.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("basis index: ") + e.what());
  }
  if (basis.entries.empty()) throw ValueError("basis index has no entries");
  return basis;
}

void save_basis_set(const std::filesystem::path& dir, const BasisSet& basis) {
  std::filesystem::create_directories(dir);
  for (const BasisEntry& e : basis.entries) {
    write_file_atomic(dir / TileName(e.channel),
                      encode_png(scale_to_raster(e.image, ScaleMode::kSymmetricZero),
                                 {{"codec-lens:scale", "symmetric-zero"}}));
  }
  write_file_atomic(dir / "index.json", basis_index(basis).dump(2) + "\n");
}

BasisSet load_basis_set(const std::filesystem::path& dir) {
  const auto bytes = read_file(dir / "index.json");
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw IoError((dir / "index.json").string() + ": " + e.what());
  }
  return basis_from_index(index);
}

}  // namespace codec_lens
