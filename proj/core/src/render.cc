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

#include "codec_lens/render.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "codec_lens/error.h"

namespace codec_lens {
namespace {

// 5x7 digit glyphs, one row per byte, bit 4 = leftmost column.
constexpr std::array<std::array<std::uint8_t, 7>, 10> kDigits = {{
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
}};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

Range MinMax(const Tensor3& t) {
  auto d = t.data();
  if (d.empty()) return {};
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  return {*lo, *hi};
}

double Normalize(double v, ScaleMode mode, Range range) {
  if (mode == ScaleMode::kSymmetricZero) {
    const double a = std::max(std::abs(range.lo), std::abs(range.hi));
    return a == 0.0 ? 0.5 : 0.5 + v / (2.0 * a);
  }
  if (range.hi == range.lo) return 0.5;
  return (v - range.lo) / (range.hi - range.lo);
}

Raster8 ToRaster(const Tensor3& image, ScaleMode mode, Range range, std::size_t channels) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw ShapeError("render: tiles must have 1 or 3 channels, got " + image.shape().ToString());
  }
  Raster8 r{image.width(), image.height(), channels, {}};
  r.samples.resize(image.width() * image.height() * channels);
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        const std::size_t src_c = image.channels() == 1 ? 0 : c;
        r.samples[(y * image.width() + x) * channels + c] =
            to_byte(Normalize(image(src_c, y, x), mode, range));
      }
    }
  }
  return r;
}

void DrawDigits(Raster8& canvas, std::size_t left, std::size_t top, std::size_t max_width,
                std::size_t value) {
  const std::string text = std::to_string(value);
  std::size_t pen = left + 1;
  for (char ch : text) {
    if (pen + 5 > left + max_width) break;
    const auto& glyph = kDigits[static_cast<std::size_t>(ch - '0')];
    for (std::size_t gy = 0; gy < 7; ++gy) {
      for (std::size_t gx = 0; gx < 5; ++gx) {
        if (!(glyph[gy] & (0x10 >> gx))) continue;
        const std::size_t px = pen + gx;
        const std::size_t py = top + 1 + gy;
        for (std::size_t c = 0; c < canvas.channels; ++c) {
          canvas.samples[(py * canvas.width + px) * canvas.channels + c] = 0;
        }
      }
    }
    pen += 6;
  }
}

}  // namespace

std::string to_string(ScaleMode mode) {
  switch (mode) {
    case ScaleMode::kMinMax: return "min-max";
    case ScaleMode::kSymmetricZero: return "symmetric-zero";
    case ScaleMode::kGlobal: return "global";
  }
  return "unknown";
}

ScaleMode parse_scale_mode(const std::string& name) {
  for (ScaleMode m : {ScaleMode::kMinMax, ScaleMode::kSymmetricZero, ScaleMode::kGlobal}) {
    if (to_string(m) == name) return m;
  }
  throw ValueError("unknown scale mode '" + name + "'");
}

void GridLayout::Validate() const {
  if (columns < 1) throw ValueError("grid layout: columns must be >= 1");
  if (tile_size < 8) throw ValueError("grid layout: tile size must be >= 8");
}

std::string GridLayout::Describe() const {
  return "columns=" + std::to_string(columns) + " tile=" + std::to_string(tile_size) +
         " gutter=" + std::to_string(gutter) +
         " labels=" + (labels == LabelMode::kRank ? "rank" : "none") +
         " scale=" + to_string(scale);
}

Raster8 scale_to_raster(const Tensor3& image, ScaleMode mode) {
  return ToRaster(image, mode, MinMax(image), image.channels());
}

Raster8 render_grid(const std::vector<GridTile>& tiles, const GridLayout& layout) {
  layout.Validate();
  if (tiles.empty()) throw ValueError("render: no tiles");
  const Shape3 shape = tiles.front().image.shape();
  std::size_t channels = 1;
  for (const GridTile& t : tiles) {
    if (t.image.height() != shape.height || t.image.width() != shape.width) {
      throw ShapeError("render: tile " + t.image.shape().ToString() +
                       " differs from " + shape.ToString());
    }
    if (t.image.channels() == 3) channels = 3;
  }
  if (shape.height == 0 || shape.width == 0) throw ShapeError("render: empty tiles");
  const std::size_t longest = std::max(shape.height, shape.width);
  const std::size_t tile_h = std::max<std::size_t>(1, layout.tile_size * shape.height / longest);
  const std::size_t tile_w = std::max<std::size_t>(1, layout.tile_size * shape.width / longest);
  const std::size_t band = layout.labels == LabelMode::kRank ? kLabelBand : 0;
  const std::size_t cols = std::min(layout.columns, tiles.size());
  const std::size_t rows = (tiles.size() + cols - 1) / cols;

  Raster8 canvas;
  canvas.width = cols * tile_w + (cols - 1) * layout.gutter;
  canvas.height = rows * (tile_h + band) + (rows - 1) * layout.gutter;
  canvas.channels = channels;
  canvas.samples.assign(canvas.width * canvas.height * channels, 255);

  Range global{};
  if (layout.scale == ScaleMode::kGlobal) {
    global = MinMax(tiles.front().image);
    for (const GridTile& t : tiles) {
      const Range r = MinMax(t.image);
      global.lo = std::min(global.lo, r.lo);
      global.hi = std::max(global.hi, r.hi);
    }
  }
  for (std::size_t k = 0; k < tiles.size(); ++k) {
    const Tensor3& img = tiles[k].image;
    const ScaleMode mode =
        layout.scale == ScaleMode::kGlobal ? ScaleMode::kMinMax : layout.scale;
    const Raster8 tile =
        ToRaster(img, mode, layout.scale == ScaleMode::kGlobal ? global : MinMax(img), channels);
    const std::size_t left = (k % cols) * (tile_w + layout.gutter);
    const std::size_t top = (k / cols) * (tile_h + band + layout.gutter);
    if (band && tiles[k].label) DrawDigits(canvas, left, top, tile_w, *tiles[k].label);
    for (std::size_t y = 0; y < tile_h; ++y) {
      const std::size_t sy = y * shape.height / tile_h;
      for (std::size_t x = 0; x < tile_w; ++x) {
        const std::size_t sx = x * shape.width / tile_w;
        for (std::size_t c = 0; c < channels; ++c) {
          canvas.samples[((top + band + y) * canvas.width + left + x) * channels + c] =
              tile.samples[(sy * shape.width + sx) * channels + c];
        }
      }
    }
  }
  return canvas;
}

std::vector<std::uint8_t> encode_grid_png(const Raster8& raster, const GridLayout& layout) {
  return encode_png(raster, {{"codec-lens:layout", layout.Describe()}});
}

std::vector<std::uint8_t> render_basis_grid(const BasisSet& basis, const GridLayout& layout,
                                            std::size_t top) {
  if (basis.entries.empty()) throw ValueError("render_basis_grid: empty basis set");
  std::vector<GridTile> tiles;
  const auto ordered = basis.ordered();
  const std::size_t count = top == 0 ? ordered.size() : std::min(top, ordered.size());
  for (std::size_t k = 0; k < count; ++k) {
    const BasisEntry* e = ordered[k];
    tiles.push_back({e->image, e->rank ? *e->rank : e->channel});
  }
  return encode_grid_png(render_grid(tiles, layout), layout);
}

std::vector<std::uint8_t> render_decomposition_mosaic(const std::vector<Tensor3>& components,
                                                      const GridLayout& layout) {
  if (components.empty()) throw ValueError("render_decomposition_mosaic: no components");
  std::vector<GridTile> tiles;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (components[k].shape() != components.front().shape()) {
      throw ShapeError("render_decomposition_mosaic: component " + std::to_string(k) +
                       " has shape " + components[k].shape().ToString() + ", expected " +
                       components.front().shape().ToString());
    }
    tiles.push_back({components[k], k});
  }
  return encode_grid_png(render_grid(tiles, layout), layout);
}

}  // namespace codec_lens
