// Copyright (c) 2026 The biasforge Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace biasforge {

// Per-utterance random streams.
//
// Every stochastic step in the toolkit draws from a stream derived from
// (global seed, utterance id, purpose tag), so results are independent of
// iteration order and worker count. The bounded-integer and real draws are
// implemented here rather than through <random> distributions, whose output
// is implementation-defined; manifests must be byte-stable across toolchains.
class UtteranceRng {
 public:
  UtteranceRng(std::uint64_t seed, std::string_view utterance_id,
               std::string_view purpose = {});

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, i - 1));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a followed by a splitmix64 finalizer.
std::uint64_t hash_string(std::string_view text, std::uint64_t basis);

}  // namespace biasforge
