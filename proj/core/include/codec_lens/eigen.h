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

#ifndef CODEC_LENS_EIGEN_H_
#define CODEC_LENS_EIGEN_H_

#include <cstddef>
#include <span>
#include <vector>

namespace codec_lens {

struct SymmetricEigen {
  // Non-increasing.
  std::vector<double> values;
  // Row-major n x n; row k is the unit eigenvector for values[k].
  std::vector<double> vectors;
  std::size_t sweeps = 0;
};

// Cyclic Jacobi eigendecomposition of a symmetric n x n matrix (row-major).
// Iterates until the off-diagonal Frobenius norm drops to
// tolerance * max(1, ||A||_F).
SymmetricEigen jacobi_eigen(std::span<const double> matrix, std::size_t n,
                            double tolerance = 1e-12,
                            std::size_t max_sweeps = 100);

}  // namespace codec_lens

#endif  // CODEC_LENS_EIGEN_H_
