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

#ifndef CODEC_LENS_LINEAR_TRANSFORMS_H_
#define CODEC_LENS_LINEAR_TRANSFORMS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "codec_lens/tensor.h"

namespace codec_lens {

// Orthonormal d x d matrix H whose rows are basis vectors (w = H x).
//
// Construction verifies max|H H^T - I| <= kOrthonormalityTolerance.
class OrthogonalTransform {
 public:
  static constexpr double kOrthonormalityTolerance = 1e-9;

  OrthogonalTransform(std::string name, std::size_t dim,
                      std::vector<double> matrix);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> matrix() const { return matrix_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(matrix_).subspan(r * dim_, dim_);
  }
  double at(std::size_t r, std::size_t c) const { return matrix_[r * dim_ + c]; }

  // max_{ij} |(H H^T - I)_{ij}|
  double orthonormality_error() const;

 private:
  std::string name_;
  std::size_t dim_;
  std::vector<double> matrix_;
};

enum class WhtOrdering { kNatural, kSequency };

OrthogonalTransform identity_transform(std::size_t n);
// Orthonormal DCT-II.
OrthogonalTransform dct_matrix(std::size_t n);
// Sylvester Hadamard scaled by 1/sqrt(n); n must be a power of two.
OrthogonalTransform wht_matrix(std::size_t n,
                               WhtOrdering ordering = WhtOrdering::kSequency);
// Orthonormal Haar, coarse-to-fine rows; n must be a power of two.
OrthogonalTransform haar_matrix(std::size_t n);
// Rows are outer products row_u(a) (x) row_v(b), index u * b.dim() + v.
OrthogonalTransform kronecker(const OrthogonalTransform& a,
                              const OrthogonalTransform& b);

struct Klt {
  OrthogonalTransform transform;
  // Covariance eigenvalues, non-increasing, aligned with transform rows.
  std::vector<double> eigenvalues;
};

// Eigenvectors of the mean-removed sample covariance, sorted by descending
// eigenvalue; each row's first nonzero component is positive.
Klt klt_decompose(const std::vector<std::vector<double>>& patches);
OrthogonalTransform klt_from_patches(const std::vector<std::vector<double>>& patches);

std::vector<double> forward(const OrthogonalTransform& t, std::span<const double> x);
// Applies H^T.
std::vector<double> inverse(const OrthogonalTransform& t, std::span<const double> w);

// Row i of H (equivalently H^{-1} e_i).
std::vector<double> linear_basis(const OrthogonalTransform& t, std::size_t i);

// n^2 separable basis images of an n-point transform; image (u, v) is the
// outer product of rows u and v, shape 1 x n x n.
struct Basis2D {
  std::size_t n = 0;
  std::vector<Tensor3> images;

  const Tensor3& at(std::size_t u, std::size_t v) const { return images[u * n + v]; }
};

Basis2D basis_2d(const OrthogonalTransform& t);

// Per-channel block transform coding keeping the `keep` largest-magnitude
// coefficients of each block x block tile. The transform either has
// dim == block (applied separably, rows then columns) or dim == block^2
// (applied to the row-major flattened tile). Images whose dimensions are not
// multiples of `block` are edge-padded and cropped back.
ImagePlane block_code_image(const OrthogonalTransform& t, const ImagePlane& img,
                            std::size_t block, std::size_t keep);

// Non-overlapping block x block patches (row-major flattened) from every
// channel of `image`, scanning in raster order.
std::vector<std::vector<double>> extract_patches(const Tensor3& image,
                                                 std::size_t block);

}  // namespace codec_lens

#endif  // CODEC_LENS_LINEAR_TRANSFORMS_H_
