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

#ifndef CODEC_LENS_SIMILARITY_H_
#define CODEC_LENS_SIMILARITY_H_

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "codec_lens/analysis.h"
#include "codec_lens/linear_transforms.h"
#include "codec_lens/tensor.h"

namespace codec_lens {

struct Assignment {
  // row_to_col[r] is the column matched to row r, or npos when rows > cols.
  std::vector<std::size_t> row_to_col;
  double total = 0.0;
};

// Maximum-weight one-to-one assignment on a row-major rows x cols score
// matrix (Hungarian method, O(n^2 m)).
Assignment max_weight_assignment(const std::vector<double>& scores, std::size_t rows,
                                 std::size_t cols);

// |cosine| between flattened, mean-removed images. Two constant images score
// 1; a constant image against a non-constant one scores 0.
double image_similarity(const Tensor3& a, const Tensor3& b);

struct MatchedPair {
  std::size_t basis = 0;
  std::size_t reference = 0;
  double score = 0.0;
};

struct SimilarityReport {
  std::size_t basis_count = 0;
  std::size_t reference_count = 0;
  // basis_count x reference_count, row-major.
  std::vector<double> scores;
  std::vector<MatchedPair> pairs;
  // Mean score over matched pairs, in [0, 1].
  double mean_score = 0.0;
  bool reference_resampled = false;
  bool luma_projected = false;
};

// Reference images are nearest-neighbor resampled to the basis extent when
// sizes differ; when exactly one side is RGB it is reduced to its channel
// mean. Both adjustments are flagged in the report.
SimilarityReport basis_similarity(const std::vector<Tensor3>& basis,
                                  const std::vector<Tensor3>& reference);
SimilarityReport basis_similarity(const BasisSet& basis, const Basis2D& reference);
SimilarityReport basis_similarity(const BasisSet& basis, const BasisSet& reference);

// Basis images in BasisSet::ordered() order.
std::vector<Tensor3> basis_images(const BasisSet& basis);

// Nearest-neighbor resize of every channel.
Tensor3 resample_nearest(const Tensor3& t, std::size_t height, std::size_t width);

nlohmann::json to_json(const SimilarityReport& report);

}  // namespace codec_lens

#endif  // CODEC_LENS_SIMILARITY_H_
