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

#include <algorithm>
#include <cmath>
#include <limits>

#include "codec_lens/error.h"

namespace codec_lens {
namespace {

constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

// Mean-removed copy of the flattened image plus its original norm.
struct Centered {
  std::vector<double> values;
  double norm = 0.0;
  bool constant = false;
};

Centered Center(const Tensor3& t) {
  Centered c;
  auto data = t.data();
  c.values.assign(data.begin(), data.end());
  if (c.values.empty()) {
    c.constant = true;
    return c;
  }
  double mean = 0.0;
  double original = 0.0;
  for (double v : c.values) {
    mean += v;
    original += v * v;
  }
  mean /= static_cast<double>(c.values.size());
  for (double& v : c.values) {
    v -= mean;
    c.norm += v * v;
  }
  c.norm = std::sqrt(c.norm);
  c.constant = c.norm <= 1e-12 * std::max(1.0, std::sqrt(original));
  return c;
}

double CenteredSimilarity(const Centered& a, const Centered& b) {
  if (a.constant && b.constant) return 1.0;
  if (a.constant || b.constant) return 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
  return std::min(1.0, std::abs(dot) / (a.norm * b.norm));
}

}  // namespace

Assignment max_weight_assignment(const std::vector<double>& scores, std::size_t rows,
                                 std::size_t cols) {
  if (scores.size() != rows * cols) throw ShapeError("assignment: score matrix size mismatch");
  Assignment result;
  result.row_to_col.assign(rows, kUnassigned);
  if (rows == 0 || cols == 0) return result;
  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t m = transposed ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) {
    return transposed ? -scores[j * cols + i] : -scores[i * cols + j];
  };
  // Shortest augmenting path Hungarian, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    const std::size_t small = p[j] - 1;
    const std::size_t large = j - 1;
    if (transposed) {
      result.row_to_col[large] = small;
    } else {
      result.row_to_col[small] = large;
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (result.row_to_col[r] != kUnassigned) result.total += scores[r * cols + result.row_to_col[r]];
  }
  return result;
}

double image_similarity(const Tensor3& a, const Tensor3& b) {
  if (a.size() != b.size()) throw ShapeError("image_similarity: size mismatch");
  return CenteredSimilarity(Center(a), Center(b));
}

Tensor3 resample_nearest(const Tensor3& t, std::size_t height, std::size_t width) {
  if (t.height() == height && t.width() == width) return t;
  if (t.height() == 0 || t.width() == 0) throw ShapeError("cannot resample empty tensor");
  Tensor3 out(t.channels(), height, width);
  for (std::size_t c = 0; c < t.channels(); ++c) {
    for (std::size_t y = 0; y < height; ++y) {
      const std::size_t sy = y * t.height() / height;
      for (std::size_t x = 0; x < width; ++x) out(c, y, x) = t(c, sy, x * t.width() / width);
    }
  }
  return out;
}

SimilarityReport basis_similarity(const std::vector<Tensor3>& basis,
                                  const std::vector<Tensor3>& reference) {
  if (basis.empty() || reference.empty()) throw ValueError("basis_similarity: empty basis set");
  SimilarityReport report;
  report.basis_count = basis.size();
  report.reference_count = reference.size();
  const Shape3 target = basis.front().shape();
  std::vector<Centered> lhs;
  std::vector<Centered> rhs;
  for (const Tensor3& b : basis) {
    if (b.shape() != target) throw ShapeError("basis_similarity: basis images differ in shape");
  }
  for (const Tensor3& r : reference) {
    Tensor3 img = r;
    if (img.height() != target.height || img.width() != target.width) {
      img = resample_nearest(img, target.height, target.width);
      report.reference_resampled = true;
    }
    if (img.channels() != target.channels) {
      report.luma_projected = true;
      if (img.channels() != 1) img = channel_mean(img);
    }
    rhs.push_back(Center(img));
  }
  for (const Tensor3& b : basis) {
    lhs.push_back(Center(report.luma_projected && b.channels() != 1 ? channel_mean(b) : b));
  }
  report.scores.resize(lhs.size() * rhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      report.scores[i * rhs.size() + j] = CenteredSimilarity(lhs[i], rhs[j]);
    }
  }
  const Assignment a = max_weight_assignment(report.scores, lhs.size(), rhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (a.row_to_col[i] == kUnassigned) continue;
    report.pairs.push_back({i, a.row_to_col[i], report.scores[i * rhs.size() + a.row_to_col[i]]});
  }
  double total = 0.0;
  for (const MatchedPair& p : report.pairs) total += p.score;
  report.mean_score = total / static_cast<double>(report.pairs.size());
  return report;
}

std::vector<Tensor3> basis_images(const BasisSet& basis) {
  std::vector<Tensor3> out;
  for (const BasisEntry* e : basis.ordered()) out.push_back(e->image);
  return out;
}

SimilarityReport basis_similarity(const BasisSet& basis, const Basis2D& reference) {
  return basis_similarity(basis_images(basis), reference.images);
}

SimilarityReport basis_similarity(const BasisSet& basis, const BasisSet& reference) {
  return basis_similarity(basis_images(basis), basis_images(reference));
}

nlohmann::json to_json(const SimilarityReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const MatchedPair& p : report.pairs) {
    pairs.push_back({{"basis", p.basis}, {"reference", p.reference}, {"score", p.score}});
  }
  return {{"mean_score", report.mean_score},
          {"basis_count", report.basis_count},
          {"reference_count", report.reference_count},
          {"reference_resampled", report.reference_resampled},
          {"luma_projected", report.luma_projected},
          {"pairs", pairs}};
}

}  // namespace codec_lens
