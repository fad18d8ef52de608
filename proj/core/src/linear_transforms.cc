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

#include "codec_lens/linear_transforms.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "codec_lens/eigen.h"
#include "codec_lens/error.h"

namespace codec_lens {
namespace {

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t SignChanges(std::span<const double> row) {
  std::size_t changes = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if ((row[i] < 0) != (row[i - 1] < 0)) ++changes;
  }
  return changes;
}

void RequireLength(const OrthogonalTransform& t, std::size_t n, const char* op) {
  if (n != t.dim()) {
    throw ShapeError(std::string(op) + ": vector length " + std::to_string(n) +
                     " does not match transform dimension " +
                     std::to_string(t.dim()));
  }
}

// Applies the transform (or its transpose) to a row-major block x block tile
// in place.
void TransformTile(const OrthogonalTransform& t, std::vector<double>& tile,
                   std::size_t block, bool transpose) {
  if (t.dim() == block * block && block != 1) {
    tile = transpose ? inverse(t, tile) : forward(t, tile);
    return;
  }
  std::vector<double> line(block);
  // Rows.
  for (std::size_t y = 0; y < block; ++y) {
    std::copy_n(tile.begin() + static_cast<std::ptrdiff_t>(y * block), block,
                line.begin());
    const auto out = transpose ? inverse(t, line) : forward(t, line);
    std::copy(out.begin(), out.end(),
              tile.begin() + static_cast<std::ptrdiff_t>(y * block));
  }
  // Columns.
  for (std::size_t x = 0; x < block; ++x) {
    for (std::size_t y = 0; y < block; ++y) line[y] = tile[y * block + x];
    const auto out = transpose ? inverse(t, line) : forward(t, line);
    for (std::size_t y = 0; y < block; ++y) tile[y * block + x] = out[y];
  }
}

}  // namespace

OrthogonalTransform::OrthogonalTransform(std::string name, std::size_t dim,
                                         std::vector<double> matrix)
    : name_(std::move(name)), dim_(dim), matrix_(std::move(matrix)) {
  if (dim_ == 0) throw ValueError("transform dimension must be positive");
  if (matrix_.size() != dim_ * dim_) {
    throw ShapeError("transform matrix must have dim^2 entries");
  }
  for (double v : matrix_) {
    if (!std::isfinite(v)) throw ValueError("transform matrix is not finite");
  }
  const double err = orthonormality_error();
  if (err > kOrthonormalityTolerance) {
    throw ValueError(name_ + ": matrix is not orthonormal (max |HH^T - I| = " +
                     std::to_string(err) + ")");
  }
}

double OrthogonalTransform::orthonormality_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) dot += at(i, k) * at(j, k);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

OrthogonalTransform identity_transform(std::size_t n) {
  if (n == 0) throw ValueError("identity_transform: n must be positive");
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return OrthogonalTransform("identity:" + std::to_string(n), n, std::move(m));
}

OrthogonalTransform dct_matrix(std::size_t n) {
  if (n == 0) throw ValueError("dct_matrix: n must be positive");
  std::vector<double> m(n * n);
  const double nd = static_cast<double>(n);
  for (std::size_t u = 0; u < n; ++u) {
    const double c = u == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
    for (std::size_t x = 0; x < n; ++x) {
      m[u * n + x] = c * std::cos(std::numbers::pi * (2.0 * x + 1.0) *
                                  static_cast<double>(u) / (2.0 * nd));
    }
  }
  return OrthogonalTransform("dct:" + std::to_string(n), n, std::move(m));
}

OrthogonalTransform wht_matrix(std::size_t n, WhtOrdering ordering) {
  if (!IsPowerOfTwo(n)) {
    throw ValueError("wht_matrix: n = " + std::to_string(n) +
                     " is not a power of two");
  }
  // Sylvester: H[i][j] = (-1)^popcount(i & j).
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> natural(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      natural[i * n + j] = (std::popcount(i & j) % 2 == 0) ? s : -s;
    }
  }
  if (ordering == WhtOrdering::kNatural) {
    return OrthogonalTransform("wht-natural:" + std::to_string(n), n,
                               std::move(natural));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return SignChanges(std::span<const double>(natural).subspan(a * n, n)) <
           SignChanges(std::span<const double>(natural).subspan(b * n, n));
  });
  std::vector<double> m(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(natural.begin() + static_cast<std::ptrdiff_t>(order[r] * n), n,
                m.begin() + static_cast<std::ptrdiff_t>(r * n));
  }
  return OrthogonalTransform("wht:" + std::to_string(n), n, std::move(m));
}

OrthogonalTransform haar_matrix(std::size_t n) {
  if (!IsPowerOfTwo(n)) {
    throw ValueError("haar_matrix: n = " + std::to_string(n) +
                     " is not a power of two");
  }
  // H_{2m} = [H_m (x) [1, 1]; I_m (x) [1, -1]] / sqrt(2)
  std::vector<double> h{1.0};
  const double r = 1.0 / std::numbers::sqrt2;
  for (std::size_t m = 1; m < n; m *= 2) {
    const std::size_t size = 2 * m;
    std::vector<double> next(size * size, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        next[i * size + 2 * j] = h[i * m + j] * r;
        next[i * size + 2 * j + 1] = h[i * m + j] * r;
      }
      next[(m + i) * size + 2 * i] = r;
      next[(m + i) * size + 2 * i + 1] = -r;
    }
    h = std::move(next);
  }
  return OrthogonalTransform("haar:" + std::to_string(n), n, std::move(h));
}

OrthogonalTransform kronecker(const OrthogonalTransform& a,
                              const OrthogonalTransform& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  const std::size_t d = na * nb;
  std::vector<double> m(d * d);
  for (std::size_t u = 0; u < na; ++u) {
    for (std::size_t v = 0; v < nb; ++v) {
      for (std::size_t y = 0; y < na; ++y) {
        for (std::size_t x = 0; x < nb; ++x) {
          m[(u * nb + v) * d + y * nb + x] = a.at(u, y) * b.at(v, x);
        }
      }
    }
  }
  std::string name = a.name() == b.name() ? a.name() + "x2d"
                                          : a.name() + "(x)" + b.name();
  return OrthogonalTransform(std::move(name), d, std::move(m));
}

Klt klt_decompose(const std::vector<std::vector<double>>& patches) {
  if (patches.empty()) throw ValueError("klt: no patches");
  const std::size_t d = patches.front().size();
  if (d == 0) throw ValueError("klt: empty patch");
  if (patches.size() < d) {
    throw ValueError("klt: need at least " + std::to_string(d) +
                     " patches, got " + std::to_string(patches.size()));
  }
  std::vector<double> mean(d, 0.0);
  for (const auto& p : patches) {
    if (p.size() != d) throw ShapeError("klt: patches have inconsistent length");
    for (std::size_t i = 0; i < d; ++i) mean[i] += p[i];
  }
  const double count = static_cast<double>(patches.size());
  for (double& m : mean) m /= count;

  std::vector<double> cov(d * d, 0.0);
  std::vector<double> centered(d);
  for (const auto& p : patches) {
    for (std::size_t i = 0; i < d; ++i) centered[i] = p[i] - mean[i];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) cov[i * d + j] += centered[i] * centered[j];
    }
  }
  double norm = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= count;
      cov[j * d + i] = cov[i * d + j];
      norm = std::max(norm, std::abs(cov[i * d + j]));
    }
  }
  if (!std::isfinite(norm)) throw ValueError("klt: covariance is not finite");
  if (norm == 0.0) throw ValueError("klt: covariance is zero (all patches equal)");

  SymmetricEigen eig = jacobi_eigen(cov, d);
  for (std::size_t r = 0; r < d; ++r) {
    auto row = std::span<double>(eig.vectors).subspan(r * d, d);
    auto first = std::find_if(row.begin(), row.end(),
                              [](double v) { return std::abs(v) > 1e-12; });
    if (first != row.end() && *first < 0) {
      for (double& v : row) v = -v;
    }
  }
  return Klt{OrthogonalTransform("klt:" + std::to_string(d), d, std::move(eig.vectors)),
             std::move(eig.values)};
}

OrthogonalTransform klt_from_patches(const std::vector<std::vector<double>>& patches) {
  return klt_decompose(patches).transform;
}

std::vector<double> forward(const OrthogonalTransform& t, std::span<const double> x) {
  RequireLength(t, x.size(), "forward");
  const std::size_t d = t.dim();
  std::vector<double> w(d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) acc += t.at(r, c) * x[c];
    w[r] = acc;
  }
  return w;
}

std::vector<double> inverse(const OrthogonalTransform& t, std::span<const double> w) {
  RequireLength(t, w.size(), "inverse");
  const std::size_t d = t.dim();
  std::vector<double> x(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < d; ++r) acc += t.at(r, c) * w[r];
    x[c] = acc;
  }
  return x;
}

std::vector<double> linear_basis(const OrthogonalTransform& t, std::size_t i) {
  if (i >= t.dim()) {
    throw IndexError("linear_basis: index " + std::to_string(i) +
                     " out of range for dimension " + std::to_string(t.dim()));
  }
  auto row = t.row(i);
  return std::vector<double>(row.begin(), row.end());
}

Basis2D basis_2d(const OrthogonalTransform& t) {
  const std::size_t n = t.dim();
  Basis2D basis{n, {}};
  basis.images.reserve(n * n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      Tensor3 img(1, n, n);
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) img(0, y, x) = t.at(u, y) * t.at(v, x);
      }
      basis.images.push_back(std::move(img));
    }
  }
  return basis;
}

ImagePlane block_code_image(const OrthogonalTransform& t, const ImagePlane& img,
                            std::size_t block, std::size_t keep) {
  if (block == 0) throw ValueError("block_code_image: block size must be positive");
  if (t.dim() != block && t.dim() != block * block) {
    throw ShapeError("block_code_image: transform dimension " +
                     std::to_string(t.dim()) + " fits neither block " +
                     std::to_string(block) + " nor block^2");
  }
  const std::size_t coeffs = block * block;
  if (keep > coeffs) {
    throw ValueError("block_code_image: keep " + std::to_string(keep) +
                     " exceeds " + std::to_string(coeffs) + " coefficients");
  }
  const Tensor3 padded = pad_to_multiple(img.pixels(), block);
  Tensor3 out(padded.shape());
  std::vector<double> tile(coeffs);
  std::vector<std::size_t> order(coeffs);
  for (std::size_t c = 0; c < padded.channels(); ++c) {
    for (std::size_t by = 0; by < padded.height(); by += block) {
      for (std::size_t bx = 0; bx < padded.width(); bx += block) {
        for (std::size_t y = 0; y < block; ++y) {
          for (std::size_t x = 0; x < block; ++x) {
            tile[y * block + x] = padded(c, by + y, bx + x);
          }
        }
        TransformTile(t, tile, block, /*transpose=*/false);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return std::abs(tile[a]) > std::abs(tile[b]);
        });
        for (std::size_t k = keep; k < coeffs; ++k) tile[order[k]] = 0.0;
        TransformTile(t, tile, block, /*transpose=*/true);
        for (std::size_t y = 0; y < block; ++y) {
          for (std::size_t x = 0; x < block; ++x) {
            out(c, by + y, bx + x) = tile[y * block + x];
          }
        }
      }
    }
  }
  return ImagePlane(crop(out, img.height(), img.width()));
}

std::vector<std::vector<double>> extract_patches(const Tensor3& image,
                                                 std::size_t block) {
  if (block == 0) throw ValueError("extract_patches: block size must be positive");
  std::vector<std::vector<double>> patches;
  for (std::size_t c = 0; c < image.channels(); ++c) {
    for (std::size_t by = 0; by + block <= image.height(); by += block) {
      for (std::size_t bx = 0; bx + block <= image.width(); bx += block) {
        std::vector<double> p(block * block);
        for (std::size_t y = 0; y < block; ++y) {
          for (std::size_t x = 0; x < block; ++x) p[y * block + x] = image(c, by + y, bx + x);
        }
        patches.push_back(std::move(p));
      }
    }
  }
  return patches;
}

}  // namespace codec_lens
