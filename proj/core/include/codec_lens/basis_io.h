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

#ifndef CODEC_LENS_BASIS_IO_H_
#define CODEC_LENS_BASIS_IO_H_

#include <filesystem>

#include <nlohmann/json.hpp>

#include "codec_lens/analysis.h"

namespace codec_lens {

// Writes channel_NNN.png (symmetric-zero scaled) per entry plus index.json
// holding channel, amplitude, rank, shape and the full-precision values.
void save_basis_set(const std::filesystem::path& dir, const BasisSet& basis);
BasisSet load_basis_set(const std::filesystem::path& dir);

nlohmann::json basis_index(const BasisSet& basis);
BasisSet basis_from_index(const nlohmann::json& index);

}  // namespace codec_lens

#endif  // CODEC_LENS_BASIS_IO_H_
