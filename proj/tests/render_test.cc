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

#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "codec_lens/error.h"
#include "codec_lens/image_io.h"
#include "codec_lens/linear_transforms.h"
#include "codec_lens/random.h"
#include "test_util.h"

namespace codec_lens {
namespace {

BasisSet DctBasisSet(std::size_t n) {
  const Basis2D b = basis_2d(dct_matrix(n));
  BasisSet set;
  set.decoder_name = "dct";
  for (std::size_t i = 0; i < b.images.size(); ++i) set.entries.push_back({i, 1.0, b.images[i], {}});
  return set;
}

TEST(ScaleTest, ZeroTileIsMidGray) {
  const Raster8 r = scale_to_raster(Tensor3(1, 4, 4), ScaleMode::kSymmetricZero);
  for (std::uint8_t v : r.samples) EXPECT_EQ(v, 128);
  GridLayout layout;
  layout.labels = LabelMode::kNone;
  const Raster8 grid = render_grid({{Tensor3(1, 16, 16), std::nullopt}}, layout);
  EXPECT_EQ(grid.width, 16u);
  EXPECT_EQ(grid.height, 16u);
  for (std::uint8_t v : grid.samples) EXPECT_EQ(v, 128);
}

TEST(ScaleTest, ModesStayInRange) {
  const Tensor3 t(Shape3{1, 1, 4}, std::vector<double>{-2.0, -1.0, 0.0, 4.0});
  const Raster8 minmax = scale_to_raster(t, ScaleMode::kMinMax);
  EXPECT_EQ(minmax.samples.front(), 0);
  EXPECT_EQ(minmax.samples.back(), 255);
  const Raster8 sym = scale_to_raster(t, ScaleMode::kSymmetricZero);
  EXPECT_EQ(sym.samples[2], 128);
  EXPECT_EQ(sym.samples[3], 255);
  EXPECT_EQ(sym.samples[0], to_byte(0.25));
  EXPECT_EQ(parse_scale_mode("global"), ScaleMode::kGlobal);
  EXPECT_EQ(to_string(ScaleMode::kMinMax), "min-max");
  EXPECT_THROW(parse_scale_mode("log"), ValueError);
}

TEST(GridTest, LayoutArithmetic) {
  std::vector<GridTile> tiles;
  Rng rng(1);
  for (std::size_t i = 0; i < 24; ++i) tiles.push_back({rng.normal_tensor({1, 4, 4}), i});
  GridLayout layout;
  layout.columns = 8;
  layout.tile_size = 16;
  layout.gutter = 3;
  const Raster8 r = render_grid(tiles, layout);
  EXPECT_EQ(r.width, 8u * 16u + 7u * 3u);
  EXPECT_EQ(r.height, 3u * (16u + kLabelBand) + 2u * 3u);
  layout.labels = LabelMode::kNone;
  EXPECT_EQ(render_grid(tiles, layout).height, 3u * 16u + 2u * 3u);
  layout.columns = 0;
  EXPECT_THROW(layout.Validate(), ValueError);
  layout.columns = 2;
  layout.tile_size = 4;
  EXPECT_THROW(render_grid(tiles, layout), ValueError);
}

TEST(GridTest, GlobalScaleSharesRange) {
  GridLayout layout;
  layout.labels = LabelMode::kNone;
  layout.scale = ScaleMode::kGlobal;
  layout.gutter = 0;
  layout.columns = 2;
  layout.tile_size = 8;
  const Raster8 r = render_grid({{Tensor3(1, 8, 8, 0.0), {}}, {Tensor3(1, 8, 8, 1.0), {}}}, layout);
  EXPECT_EQ(r.samples[0], 0);
  EXPECT_EQ(r.samples[8], 255);
}

TEST(GridTest, BasisGridIsDeterministicAndTagged) {
  const BasisSet set = DctBasisSet(4);
  GridLayout layout;
  const auto a = render_basis_grid(set, layout);
  const auto b = render_basis_grid(set, layout);
  EXPECT_EQ(a, b);
  EXPECT_EQ(decode_png(a).width, 8u * 16u + 7u * 2u);
  const std::string raw(a.begin(), a.end());
  EXPECT_NE(raw.find("codec-lens:layout"), std::string::npos);
  EXPECT_NE(raw.find(layout.Describe()), std::string::npos);
  EXPECT_THROW(render_basis_grid(BasisSet{}, layout), ValueError);
}

TEST(GridTest, TopLimitsTiles) {
  const BasisSet set = DctBasisSet(4);
  GridLayout layout;
  layout.labels = LabelMode::kNone;
  const auto png = render_basis_grid(set, layout, 3);
  const auto decoded = decode_png(png);
  EXPECT_EQ(decoded.width, 3u * 16u + 2u * 2u);
  EXPECT_EQ(decoded.height, 16u);
}

TEST(GridTest, LabelsDrawDarkPixelsInBand) {
  GridLayout layout;
  layout.columns = 1;
  const Raster8 r = render_grid({{Tensor3(1, 16, 16), 7}}, layout);
  const auto band_end = r.samples.begin() + static_cast<std::ptrdiff_t>(kLabelBand * r.width);
  EXPECT_TRUE(std::any_of(r.samples.begin(), band_end, [](std::uint8_t v) { return v == 0; }));
  layout.labels = LabelMode::kNone;
  const Raster8 plain = render_grid({{Tensor3(1, 16, 16), 7}}, layout);
  EXPECT_TRUE(std::none_of(plain.samples.begin(), plain.samples.end(), [](std::uint8_t v) { return v == 0; }));
}

TEST(MosaicTest, Cases) {
  GridLayout layout;
  layout.labels = LabelMode::kNone;
  layout.scale = ScaleMode::kMinMax;
  const Tensor3 img = testing::SyntheticPhoto(16, 16, 3, 1).pixels();
  const auto one = decode_png(render_decomposition_mosaic({img}, layout));
  EXPECT_EQ(one.channels, 3u);
  EXPECT_EQ(one.width, 16u);

  std::vector<Tensor3> nine(9, img);
  layout.columns = 3;
  const auto grid = decode_png(render_decomposition_mosaic(nine, layout));
  EXPECT_EQ(grid.width, 3u * 16u + 2u * 2u);
  EXPECT_EQ(grid.height, 3u * 16u + 2u * 2u);

  EXPECT_THROW(render_decomposition_mosaic({}, layout), ValueError);
  EXPECT_THROW(render_decomposition_mosaic({img, Tensor3(3, 8, 8)}, layout), ShapeError);
}

}  // namespace
}  // namespace codec_lens
