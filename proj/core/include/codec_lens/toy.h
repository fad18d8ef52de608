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

#ifndef CODEC_LENS_TOY_H_
#define CODEC_LENS_TOY_H_

#include <cstddef>
#include <cstdint>

#include "codec_lens/nn.h"

namespace codec_lens {

struct ToyCoder {
  AnalysisNet analysis;
  SynthesisNet synthesis;
};

struct ToyOptions {
  std::size_t latent_channels = 8;
  std::size_t image_channels = 3;
  // Use GDN/IGDN between the two resampling layers; otherwise the middle
  // layer is an identity-parameterized GDN (beta = 1, gamma = 0).
  bool nonlinear = true;
  bool zero_bias = false;
};

// Random-weight three-layer coder with total stride 4:
//   analysis  conv 5x5/2 -> GDN -> conv 5x5/2
//   synthesis tconv 5x5/2 -> IGDN -> tconv 5x5/2
ToyCoder make_toy_coder(std::uint64_t seed, const ToyOptions& options = {});

}  // namespace codec_lens

#endif  // CODEC_LENS_TOY_H_
