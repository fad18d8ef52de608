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

#ifndef CODEC_LENS_WEIGHTS_H_
#define CODEC_LENS_WEIGHTS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "codec_lens/error.h"
#include "codec_lens/nn.h"

namespace codec_lens {

// LICW container:
//   bytes 0-3   "LICW"
//   bytes 4-7   version (uint32 LE), currently 1
//   bytes 8-15  header length in bytes (uint64 LE)
//   header      UTF-8 JSON: {"kind", "layers": [...], "tensors": [...]}
//   payload     float32 LE values, tensors contiguous in declared order
inline constexpr std::uint32_t kLicwVersion = 1;

enum class WeightErrorKind {
  kBadMagic,
  kVersionMismatch,
  kPayloadLength,
  kShapeInconsistency,
  kMalformedHeader,
};

class WeightFormatError : public Error {
 public:
  WeightFormatError(WeightErrorKind kind, const std::string& detail);
  WeightErrorKind kind() const { return kind_; }

 private:
  WeightErrorKind kind_;
};

std::vector<std::uint8_t> save_weights(const Network& net);
Network load_weights(std::span<const std::uint8_t> bytes);

Network load_weights_file(const std::filesystem::path& path);
void save_weights_file(const std::filesystem::path& path, const Network& net);

}  // namespace codec_lens

#endif  // CODEC_LENS_WEIGHTS_H_
