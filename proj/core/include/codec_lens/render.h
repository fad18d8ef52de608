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

#ifndef CODEC_LENS_RENDER_H_
#define CODEC_LENS_RENDER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codec_lens/analysis.h"
#include "codec_lens/image_io.h"
#include "codec_lens/tensor.h"

namespace codec_lens {

enum class ScaleMode {
  // Each tile maps its own [min, max] to [0, 1].
  kMinMax,
  // Each tile maps [-a, a] to [0, 1], a = max |value|; zero is mid-gray.
  kSymmetricZero,
  // One [min, max] over all tiles.
  kGlobal,
};

enum class LabelMode { kNone, kRank };

std::string to_string(ScaleMode mode);
ScaleMode parse_scale_mode(const std::string& name);

struct GridLayout {
  std::size_t columns = 8;
  // Longer tile side in pixels; the shorter side follows the tile aspect.
  std::size_t tile_size = 16;
  std::size_t gutter = 2;
  LabelMode labels = LabelMode::kRank;
  ScaleMode scale = ScaleMode::kSymmetricZero;

  void Validate() const;
  // Recorded in the PNG text chunk.
  std::string Describe() const;
};

// Height of the digit band drawn above each tile row when labels are on.
inline constexpr std::size_t kLabelBand = 9;

struct GridTile {
  Tensor3 image;
  std::optional<std::size_t> label;
};

// White canvas, tiles in row-major order. Canvas width is
// columns * tile_w + (columns - 1) * gutter (fewer columns when there are
// fewer tiles).
Raster8 render_grid(const std::vector<GridTile>& tiles, const GridLayout& layout);
std::vector<std::uint8_t> encode_grid_png(const Raster8& raster, const GridLayout& layout);

// Tiles ordered by rate rank when present, labeled with the rank; `top`
// limits the tile count (0 = all).
std::vector<std::uint8_t> render_basis_grid(const BasisSet& basis, const GridLayout& layout,
                                            std::size_t top = 0);
// Tiles in the given order, labeled with their position.
std::vector<std::uint8_t> render_decomposition_mosaic(const std::vector<Tensor3>& components,
                                                      const GridLayout& layout);

// Single tensor mapped to 8-bit with the given scale mode.
Raster8 scale_to_raster(const Tensor3& image, ScaleMode mode);

}  // namespace codec_lens

#endif  // CODEC_LENS_RENDER_H_
