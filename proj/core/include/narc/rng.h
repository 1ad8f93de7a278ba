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

#ifndef NARC_RNG_H_
#define NARC_RNG_H_

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace narc {

// Portable seeded generator: SplitMix64. Every example gets its own stream,
// seeded by mixing the run seed with the FNV-1a hash of the example id, so
// results do not depend on processing order or platform.
class SeededRng {
 public:
  static constexpr std::string_view kAlgorithm =
      "splitmix64; stream(seed, id) = splitmix64(mix(seed) ^ fnv1a64(id))";

  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  SeededRng ForExample(std::string_view id) const;

  std::uint64_t Next();

  // Uniform integer in [0, n) by rejection; n must be positive.
  std::size_t UniformIndex(std::size_t n);

 private:
  SeededRng(std::uint64_t seed, std::uint64_t state)
      : seed_(seed), state_(state) {}

  std::uint64_t seed_;
  std::uint64_t state_;
};

std::uint64_t Fnv1a64(std::string_view bytes);

}  // namespace narc

#endif  // NARC_RNG_H_
