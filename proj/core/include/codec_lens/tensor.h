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

#ifndef CODEC_LENS_TENSOR_H_
#define CODEC_LENS_TENSOR_H_

#include <cstddef>
#include <compare>
#include <span>
#include <string>
#include <vector>

namespace codec_lens {

struct Shape3 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return channels * height * width; }
  std::size_t plane() const { return height * width; }
  std::string ToString() const;

  auto operator<=>(const Shape3&) const = default;
};

// Dense (channel, height, width) array of doubles, row-major.
//
// Every element is finite; constructors and arithmetic reject NaN/Inf.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Shape3 shape, double fill = 0.0);
  Tensor3(std::size_t channels, std::size_t height, std::size_t width,
          double fill = 0.0)
      : Tensor3(Shape3{channels, height, width}, fill) {}
  Tensor3(Shape3 shape, std::vector<double> data);

  const Shape3& shape() const { return shape_; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(std::size_t c, std::size_t y, std::size_t x) const {
    return (c * shape_.height + y) * shape_.width + x;
  }
  double& operator()(std::size_t c, std::size_t y, std::size_t x) {
    return data_[index(c, y, x)];
  }
  double operator()(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[index(c, y, x)];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> channel(std::size_t c);
  std::span<const double> channel(std::size_t c) const;

  // Throws ValueError if any element is NaN or infinite.
  void CheckFinite() const;

  bool operator==(const Tensor3& other) const = default;

 private:
  Shape3 shape_;
  std::vector<double> data_;
};

Tensor3 zeros_like(const Tensor3& t);
Tensor3 add(const Tensor3& a, const Tensor3& b);
Tensor3 sub(const Tensor3& a, const Tensor3& b);
Tensor3 scale(const Tensor3& t, double factor);
// In-place a += b.
void accumulate(Tensor3& a, const Tensor3& b);

// Per-element squared error (a - b)^2.
Tensor3 squared_error(const Tensor3& a, const Tensor3& b);
double mse(const Tensor3& a, const Tensor3& b);

struct MseStats {
  double mse = 0.0;
  // Population standard deviation of the per-element squared errors.
  double std_dev = 0.0;
  std::size_t count = 0;
};
MseStats mse_stats(const Tensor3& a, const Tensor3& b);

// Signed maximum of channel i.
double channel_max(const Tensor3& z, std::size_t i);
// Largest magnitude in channel i.
double channel_abs_max(const Tensor3& z, std::size_t i);

// Edge-replicating pad so height and width become multiples of `multiple`.
Tensor3 pad_to_multiple(const Tensor3& t, std::size_t multiple);
// Top-left crop to (height, width).
Tensor3 crop(const Tensor3& t, std::size_t height, std::size_t width);
// Mean over channels; returns a single-channel tensor.
Tensor3 channel_mean(const Tensor3& t);

// Pixel image: a Tensor3 with 1 (gray) or 3 (RGB) channels. Values are
// nominally in [0, 1] but only clamped when written to disk.
class ImagePlane {
 public:
  ImagePlane() = default;
  explicit ImagePlane(Tensor3 pixels);

  const Tensor3& pixels() const { return pixels_; }
  Tensor3& mutable_pixels() { return pixels_; }
  std::size_t channels() const { return pixels_.channels(); }
  std::size_t height() const { return pixels_.height(); }
  std::size_t width() const { return pixels_.width(); }

 private:
  Tensor3 pixels_;
};

}  // namespace codec_lens

#endif  // CODEC_LENS_TENSOR_H_
