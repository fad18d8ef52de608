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

#ifndef CODEC_LENS_IMAGE_IO_H_
#define CODEC_LENS_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "codec_lens/tensor.h"

namespace codec_lens {

// Interleaved 8-bit raster, row-major, `channels` samples per pixel.
struct Raster8 {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 0;
  std::vector<std::uint8_t> samples;

  bool operator==(const Raster8&) const = default;
};

using TextChunks = std::vector<std::pair<std::string, std::string>>;

// Maps v in [0, 1] to round(v * 255) with halves away from zero; values
// outside [0, 1] are clamped first.
std::uint8_t to_byte(double v);

Raster8 to_raster(const ImagePlane& image);
ImagePlane from_raster(const Raster8& raster);

std::vector<std::uint8_t> encode_png(const Raster8& raster,
                                     const TextChunks& text = {});
Raster8 decode_png(const std::vector<std::uint8_t>& bytes);
// Binary P5 (gray) or P6 (RGB).
std::vector<std::uint8_t> encode_pnm(const Raster8& raster);
Raster8 decode_pnm(const std::vector<std::uint8_t>& bytes);

// Reads PNG or binary PGM/PPM, detected by content.
ImagePlane read_image(const std::filesystem::path& path);
// Format chosen by extension: .png, .pgm/.ppm/.pnm.
void write_image(const std::filesystem::path& path, const ImagePlane& image,
                 const TextChunks& text = {});

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
// Writes to a temporary sibling and renames over the target.
void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes);
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text);

}  // namespace codec_lens

#endif  // CODEC_LENS_IMAGE_IO_H_
