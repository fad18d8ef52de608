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

#include "codec_lens/similarity.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "codec_lens/error.h"
#include "codec_lens/linear_transforms.h"
#include "codec_lens/random.h"

namespace codec_lens {
namespace {

// Frozen from scipy.optimize.linear_sum_assignment on the same score
// definition (|cosine| of mean-removed images).
constexpr double kDctHaar4 = 0.6741509347960104;
constexpr double kDctHaar8 = 0.43040897634279063;
constexpr double kDctWht4 = 0.925328113903962;
constexpr double kDctWht8 = 0.809183336958074;

// Exact maximum-weight perfect matching on an n x n matrix by DP over column
// subsets.
double BitmaskAssignment(const std::vector<double>& s, std::size_t n) {
  std::vector<double> best(std::size_t{1} << n, -1.0);
  best[0] = 0.0;
  for (unsigned mask = 0; mask < best.size(); ++mask) {
    if (best[mask] < 0.0) continue;
    const std::size_t row = static_cast<std::size_t>(std::popcount(mask));
    if (row == n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (mask & (1u << c)) continue;
      const unsigned next = mask | (1u << c);
      best[next] = std::max(best[next], best[mask] + s[row * n + c]);
    }
  }
  return best.back();
}

double BruteForce(const std::vector<double>& s, std::size_t rows, std::size_t cols) {
  // rows <= cols: try every injective map by permuting columns.
  std::vector<std::size_t> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) total += s[r * cols + perm[r]];
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<double> ScoreMatrix(const Basis2D& a, const Basis2D& b) {
  std::vector<double> s;
  for (const Tensor3& x : a.images) {
    for (const Tensor3& y : b.images) s.push_back(image_similarity(x, y));
  }
  return s;
}

TEST(ImageSimilarityTest, Cases) {
  Rng rng(1);
  const Tensor3 a = rng.normal_tensor({1, 4, 4});
  EXPECT_NEAR(image_similarity(a, a), 1.0, 1e-15);
  EXPECT_NEAR(image_similarity(a, scale(a, -3.0)), 1.0, 1e-15);
  Tensor3 shifted = a;
  for (double& v : shifted.data()) v += 7.0;
  EXPECT_NEAR(image_similarity(a, shifted), 1.0, 1e-12);
  EXPECT_EQ(image_similarity(Tensor3(1, 4, 4, 2.0), Tensor3(1, 4, 4, -1.0)), 1.0);
  EXPECT_EQ(image_similarity(Tensor3(1, 4, 4, 2.0), a), 0.0);
  EXPECT_THROW(image_similarity(a, Tensor3(1, 2, 2)), ShapeError);
}

TEST(AssignmentTest, MatchesBruteForceOnRandomMatrices) {
  Rng rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(rng.integer(1, 6));
    const std::size_t cols = static_cast<std::size_t>(rng.integer(1, 6));
    std::vector<double> s(rows * cols);
    for (double& v : s) v = rng.uniform();
    const Assignment a = max_weight_assignment(s, rows, cols);
    double expected;
    if (rows <= cols) {
      expected = BruteForce(s, rows, cols);
    } else {
      std::vector<double> t(rows * cols);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = s[r * cols + c];
      }
      expected = BruteForce(t, cols, rows);
    }
    EXPECT_NEAR(a.total, expected, 1e-12) << rows << "x" << cols;
    double recomputed = 0.0;
    std::vector<bool> used(cols, false);
    std::size_t matched = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t c = a.row_to_col[r];
      if (c == static_cast<std::size_t>(-1)) continue;
      ASSERT_LT(c, cols);
      EXPECT_FALSE(used[c]);
      used[c] = true;
      recomputed += s[r * cols + c];
      ++matched;
    }
    EXPECT_EQ(matched, std::min(rows, cols));
    EXPECT_NEAR(recomputed, a.total, 1e-12);
  }
}

TEST(BasisSimilarityTest, SelfComparisonIsIdentity) {
  const Basis2D b = basis_2d(dct_matrix(4));
  const SimilarityReport r = basis_similarity(b.images, b.images);
  EXPECT_NEAR(r.mean_score, 1.0, 1e-12);
  for (const MatchedPair& p : r.pairs) EXPECT_EQ(p.basis, p.reference);
  EXPECT_FALSE(r.reference_resampled);
  EXPECT_FALSE(r.luma_projected);
}

TEST(BasisSimilarityTest, DcPairsMatch) {
  const SimilarityReport r = basis_similarity(basis_2d(dct_matrix(8)).images,
                                              basis_2d(wht_matrix(8)).images);
  EXPECT_EQ(r.scores[0], 1.0);
  for (const MatchedPair& p : r.pairs) {
    if (p.basis == 0) {
      EXPECT_EQ(p.reference, 0u);
      EXPECT_EQ(p.score, 1.0);
    }
  }
}

TEST(BasisSimilarityTest, SmallBasesAgreeWithExhaustiveOracle) {
  const Basis2D dct2 = basis_2d(dct_matrix(2));
  const Basis2D haar2 = basis_2d(haar_matrix(2));
  const auto s = ScoreMatrix(dct2, haar2);
  EXPECT_NEAR(BruteForce(s, 4, 4) / 4.0, 1.0, 1e-12);
  EXPECT_NEAR(basis_similarity(dct2.images, haar2.images).mean_score, 1.0, 1e-12);

  const Basis2D dct4 = basis_2d(dct_matrix(4));
  const Basis2D haar4 = basis_2d(haar_matrix(4));
  const Basis2D wht4 = basis_2d(wht_matrix(4));
  const double haar_dp = BitmaskAssignment(ScoreMatrix(dct4, haar4), 16) / 16.0;
  const double wht_dp = BitmaskAssignment(ScoreMatrix(dct4, wht4), 16) / 16.0;
  EXPECT_NEAR(haar_dp, kDctHaar4, 1e-12);
  EXPECT_NEAR(wht_dp, kDctWht4, 1e-12);
  EXPECT_NEAR(basis_similarity(dct4.images, haar4.images).mean_score, kDctHaar4, 1e-12);
  EXPECT_NEAR(basis_similarity(dct4.images, wht4.images).mean_score, kDctWht4, 1e-12);
}

TEST(BasisSimilarityTest, EightByEightFrozenValues) {
  const auto dct8 = basis_2d(dct_matrix(8)).images;
  EXPECT_NEAR(basis_similarity(dct8, basis_2d(haar_matrix(8)).images).mean_score, kDctHaar8, 1e-12);
  EXPECT_NEAR(basis_similarity(dct8, basis_2d(wht_matrix(8)).images).mean_score, kDctWht8, 1e-12);
}

TEST(BasisSimilarityTest, SymmetricInArguments) {
  const auto a = basis_2d(dct_matrix(4)).images;
  const auto b = basis_2d(haar_matrix(4)).images;
  const SimilarityReport ab = basis_similarity(a, b);
  const SimilarityReport ba = basis_similarity(b, a);
  EXPECT_NEAR(ab.mean_score, ba.mean_score, 1e-12);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(ab.scores[i * 16 + j], ba.scores[j * 16 + i]);
  }
  for (double s : ab.scores) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(BasisSimilarityTest, ResamplesAndProjectsLuma) {
  const auto ref = basis_2d(dct_matrix(4)).images;
  std::vector<Tensor3> big;
  for (const Tensor3& t : ref) {
    const Tensor3 up = resample_nearest(t, 8, 8);
    Tensor3 rgb(3, 8, 8);
    for (std::size_t c = 0; c < 3; ++c) {
      std::copy(up.data().begin(), up.data().end(), rgb.channel(c).begin());
    }
    big.push_back(rgb);
  }
  const SimilarityReport r = basis_similarity(big, ref);
  EXPECT_TRUE(r.reference_resampled);
  EXPECT_TRUE(r.luma_projected);
  EXPECT_NEAR(r.mean_score, 1.0, 1e-12);
  EXPECT_THROW(basis_similarity(std::vector<Tensor3>{}, ref), ValueError);
}

TEST(ResampleTest, NearestNeighbor) {
  const Tensor3 t(Shape3{1, 2, 2}, std::vector<double>{1, 2, 3, 4});
  const Tensor3 up = resample_nearest(t, 4, 4);
  EXPECT_EQ(up(0, 0, 0), 1.0);
  EXPECT_EQ(up(0, 1, 1), 1.0);
  EXPECT_EQ(up(0, 0, 3), 2.0);
  EXPECT_EQ(up(0, 3, 0), 3.0);
  EXPECT_EQ(up(0, 3, 3), 4.0);
  EXPECT_EQ(resample_nearest(up, 2, 2), t);
}

TEST(SimilarityJsonTest, RoundTrips) {
  const auto r = basis_similarity(basis_2d(dct_matrix(2)).images, basis_2d(haar_matrix(2)).images);
  const auto j = to_json(r);
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
  EXPECT_EQ(j["pairs"].size(), 4u);
}

}  // namespace
}  // namespace codec_lens
