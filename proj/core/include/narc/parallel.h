// Copyright 2026 The narc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NARC_PARALLEL_H_
#define NARC_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace narc {

// Worker count: NARC_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t ThreadCount();

// Calls fn(i) for every i in [0, n) on up to ThreadCount() threads. Each
// index is visited exactly once; the first exception thrown is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace narc

#endif  // NARC_PARALLEL_H_
