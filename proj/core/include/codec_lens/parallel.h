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

#ifndef CODEC_LENS_PARALLEL_H_
#define CODEC_LENS_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace codec_lens {

// Worker cap: CODEC_LENS_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
std::size_t max_threads();

// Runs fn(0..n-1) across worker threads. Nested calls run serially on the
// calling thread. If any call throws, the exception from the lowest index is
// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace codec_lens

#endif  // CODEC_LENS_PARALLEL_H_
