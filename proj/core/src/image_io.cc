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

#include "codec_lens/image_io.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "codec_lens/error.h"

namespace codec_lens {
namespace {

struct ReadCursor {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void PngWriteToVector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void PngFlushNoop(png_structp) {}

void PngReadFromVector(png_structp png, png_bytep data, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->bytes->size()) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(data, cursor->bytes->data() + cursor->offset, length);
  cursor->offset += length;
}

[[noreturn]] void PngErrorHandler(png_structp, png_const_charp message) {
  throw IoError(std::string("png: ") + message);
}

void PngWarningHandler(png_structp, png_const_charp) {}

void ValidateRaster(const Raster8& r) {
  if (r.channels != 1 && r.channels != 3) {
    throw ShapeError("raster must have 1 or 3 channels");
  }
  if (r.samples.size() != r.width * r.height * r.channels) {
    throw ShapeError("raster sample count does not match dimensions");
  }
  if (r.width == 0 || r.height == 0) throw ShapeError("empty raster");
}

// Skips whitespace and '#' comments in a PNM header.
std::size_t PnmNextToken(const std::vector<std::uint8_t>& b, std::size_t& pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t value = 0;
  bool any = false;
  while (pos < b.size() && std::isdigit(b[pos])) {
    value = value * 10 + (b[pos] - '0');
    ++pos;
    any = true;
  }
  if (!any) throw IoError("malformed PNM header");
  return value;
}

}  // namespace

std::uint8_t to_byte(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

Raster8 to_raster(const ImagePlane& image) {
  const Tensor3& t = image.pixels();
  Raster8 r{t.width(), t.height(), t.channels(), {}};
  r.samples.resize(t.size());
  for (std::size_t y = 0; y < t.height(); ++y) {
    for (std::size_t x = 0; x < t.width(); ++x) {
      for (std::size_t c = 0; c < t.channels(); ++c) {
        r.samples[(y * t.width() + x) * t.channels() + c] = to_byte(t(c, y, x));
      }
    }
  }
  return r;
}

ImagePlane from_raster(const Raster8& r) {
  ValidateRaster(r);
  Tensor3 t(r.channels, r.height, r.width);
  for (std::size_t y = 0; y < r.height; ++y) {
    for (std::size_t x = 0; x < r.width; ++x) {
      for (std::size_t c = 0; c < r.channels; ++c) {
        t(c, y, x) = r.samples[(y * r.width + x) * r.channels + c] / 255.0;
      }
    }
  }
  return ImagePlane(std::move(t));
}

std::vector<std::uint8_t> encode_png(const Raster8& raster,
                                     const TextChunks& text) {
  ValidateRaster(raster);
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            PngErrorHandler, PngWarningHandler);
  if (png == nullptr) throw IoError("png: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_write_struct(png, info); }
  } guard{&png, &info};
  if (info == nullptr) throw IoError("png: cannot create info struct");

  png_set_write_fn(png, &out, PngWriteToVector, PngFlushNoop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width),
               static_cast<png_uint_32>(raster.height), 8,
               raster.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  std::vector<png_text> chunks(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    chunks[i].compression = PNG_TEXT_COMPRESSION_NONE;
    chunks[i].key = const_cast<char*>(text[i].first.c_str());
    chunks[i].text = const_cast<char*>(text[i].second.c_str());
    chunks[i].text_length = text[i].second.size();
  }
  if (!chunks.empty()) {
    png_set_text(png, info, chunks.data(), static_cast<int>(chunks.size()));
  }
  png_write_info(png, info);
  const std::size_t stride = raster.width * raster.channels;
  for (std::size_t y = 0; y < raster.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(raster.samples.data() + y * stride));
  }
  png_write_end(png, nullptr);
  return out;
}

Raster8 decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw IoError("not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           PngErrorHandler, PngWarningHandler);
  if (png == nullptr) throw IoError("png: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_read_struct(png, info, nullptr); }
  } guard{&png, &info};
  if (info == nullptr) throw IoError("png: cannot create info struct");

  ReadCursor cursor{&bytes, 0};
  png_set_read_fn(png, &cursor, PngReadFromVector);
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth == 16) throw IoError("16-bit PNG is not supported");
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  Raster8 r;
  r.width = png_get_image_width(png, info);
  r.height = png_get_image_height(png, info);
  r.channels = png_get_channels(png, info);
  if (r.channels == 4 || r.channels == 2) {
    throw IoError("unsupported PNG channel layout");
  }
  const std::size_t stride = png_get_rowbytes(png, info);
  r.samples.resize(stride * r.height);
  std::vector<png_bytep> rows(r.height);
  for (std::size_t y = 0; y < r.height; ++y) rows[y] = r.samples.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  ValidateRaster(r);
  return r;
}

std::vector<std::uint8_t> encode_pnm(const Raster8& raster) {
  ValidateRaster(raster);
  const std::string header = std::string(raster.channels == 1 ? "P5" : "P6") +
                             "\n" + std::to_string(raster.width) + " " +
                             std::to_string(raster.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), raster.samples.begin(), raster.samples.end());
  return out;
}

Raster8 decode_pnm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw IoError("not a binary PGM/PPM file");
  }
  std::size_t pos = 2;
  Raster8 r;
  r.channels = bytes[1] == '5' ? 1 : 3;
  r.width = PnmNextToken(bytes, pos);
  r.height = PnmNextToken(bytes, pos);
  const std::size_t maxval = PnmNextToken(bytes, pos);
  if (maxval != 255) throw IoError("only 8-bit PNM (maxval 255) is supported");
  ++pos;  // single whitespace before raster
  const std::size_t n = r.width * r.height * r.channels;
  if (pos + n > bytes.size()) throw IoError("truncated PNM raster");
  r.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  ValidateRaster(r);
  return r;
}

ImagePlane read_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
      return from_raster(decode_png(bytes));
    }
    return from_raster(decode_pnm(bytes));
  } catch (const Error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_image(const std::filesystem::path& path, const ImagePlane& image,
                 const TextChunks& text) {
  const Raster8 r = to_raster(image);
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") {
    write_file_atomic(path, encode_png(r, text));
  } else if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
    write_file_atomic(path, encode_pnm(r));
  } else {
    throw IoError("unknown image extension: " + path.string());
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  write_file_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace codec_lens
