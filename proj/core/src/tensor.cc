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

#include "codec_lens/tensor.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "codec_lens/error.h"

namespace codec_lens {
namespace {

void RequireSameShape(const Tensor3& a, const Tensor3& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     a.shape().ToString() + " vs " + b.shape().ToString());
  }
}

void RequireChannel(const Tensor3& z, std::size_t i) {
  if (i >= z.channels()) {
    throw IndexError("channel index " + std::to_string(i) +
                     " out of range for " + z.shape().ToString());
  }
}

}  // namespace

std::string Shape3::ToString() const {
  std::ostringstream os;
  os << "(" << channels << ", " << height << ", " << width << ")";
  return os.str();
}

Tensor3::Tensor3(Shape3 shape, double fill)
    : shape_(shape), data_(shape.size(), fill) {
  if (!std::isfinite(fill)) throw ValueError("non-finite fill value");
}

Tensor3::Tensor3(Shape3 shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size()) {
    throw ShapeError("data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_.ToString());
  }
  CheckFinite();
}

std::span<double> Tensor3::channel(std::size_t c) {
  return std::span<double>(data_).subspan(c * shape_.plane(), shape_.plane());
}

std::span<const double> Tensor3::channel(std::size_t c) const {
  return std::span<const double>(data_).subspan(c * shape_.plane(),
                                                shape_.plane());
}

void Tensor3::CheckFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) throw ValueError("tensor contains non-finite value");
  }
}

Tensor3 zeros_like(const Tensor3& t) { return Tensor3(t.shape()); }

Tensor3 add(const Tensor3& a, const Tensor3& b) {
  Tensor3 out = a;
  accumulate(out, b);
  return out;
}

Tensor3 sub(const Tensor3& a, const Tensor3& b) {
  RequireSameShape(a, b, "sub");
  Tensor3 out(a.shape());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] - y[i];
  out.CheckFinite();
  return out;
}

Tensor3 scale(const Tensor3& t, double factor) {
  if (!std::isfinite(factor)) throw ValueError("non-finite scale factor");
  Tensor3 out(t.shape());
  auto o = out.data();
  auto x = t.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * factor;
  out.CheckFinite();
  return out;
}

void accumulate(Tensor3& a, const Tensor3& b) {
  RequireSameShape(a, b, "add");
  auto o = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += y[i];
  a.CheckFinite();
}

Tensor3 squared_error(const Tensor3& a, const Tensor3& b) {
  RequireSameShape(a, b, "mse");
  Tensor3 out(a.shape());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) {
    const double d = x[i] - y[i];
    o[i] = d * d;
  }
  return out;
}

double mse(const Tensor3& a, const Tensor3& b) { return mse_stats(a, b).mse; }

MseStats mse_stats(const Tensor3& a, const Tensor3& b) {
  const Tensor3 sq = squared_error(a, b);
  MseStats stats;
  stats.count = sq.size();
  if (stats.count == 0) return stats;
  double sum = 0.0;
  for (double v : sq.data()) sum += v;
  stats.mse = sum / static_cast<double>(stats.count);
  double var = 0.0;
  for (double v : sq.data()) var += (v - stats.mse) * (v - stats.mse);
  stats.std_dev = std::sqrt(var / static_cast<double>(stats.count));
  return stats;
}

double channel_max(const Tensor3& z, std::size_t i) {
  RequireChannel(z, i);
  auto ch = z.channel(i);
  if (ch.empty()) throw ShapeError("channel_max on empty channel");
  return *std::max_element(ch.begin(), ch.end());
}

double channel_abs_max(const Tensor3& z, std::size_t i) {
  RequireChannel(z, i);
  auto ch = z.channel(i);
  if (ch.empty()) throw ShapeError("channel_abs_max on empty channel");
  double best = 0.0;
  for (double v : ch) best = std::max(best, std::abs(v));
  return best;
}

Tensor3 pad_to_multiple(const Tensor3& t, std::size_t multiple) {
  if (multiple == 0) throw ValueError("pad multiple must be positive");
  if (t.height() == 0 || t.width() == 0) {
    throw ShapeError("cannot pad empty tensor " + t.shape().ToString());
  }
  const std::size_t h = (t.height() + multiple - 1) / multiple * multiple;
  const std::size_t w = (t.width() + multiple - 1) / multiple * multiple;
  if (h == t.height() && w == t.width()) return t;
  Tensor3 out(t.channels(), h, w);
  for (std::size_t c = 0; c < t.channels(); ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t sy = std::min(y, t.height() - 1);
      for (std::size_t x = 0; x < w; ++x) {
        out(c, y, x) = t(c, sy, std::min(x, t.width() - 1));
      }
    }
  }
  return out;
}

Tensor3 crop(const Tensor3& t, std::size_t height, std::size_t width) {
  if (height > t.height() || width > t.width()) {
    throw ShapeError("crop size exceeds tensor " + t.shape().ToString());
  }
  Tensor3 out(t.channels(), height, width);
  for (std::size_t c = 0; c < t.channels(); ++c) {
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) out(c, y, x) = t(c, y, x);
    }
  }
  return out;
}

Tensor3 channel_mean(const Tensor3& t) {
  Tensor3 out(1, t.height(), t.width());
  if (t.channels() == 0) return out;
  auto o = out.data();
  for (std::size_t c = 0; c < t.channels(); ++c) {
    auto ch = t.channel(c);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += ch[i];
  }
  for (double& v : o) v /= static_cast<double>(t.channels());
  return out;
}

ImagePlane::ImagePlane(Tensor3 pixels) : pixels_(std::move(pixels)) {
  if (pixels_.channels() != 1 && pixels_.channels() != 3) {
    throw ShapeError("image must have 1 or 3 channels, got " +
                     pixels_.shape().ToString());
  }
}

}  // namespace codec_lens
