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

#include "biasforge/rng.h"

#include "biasforge/error.h"

namespace biasforge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash_string(std::string_view text, std::uint64_t basis) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ splitmix64(basis);
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

UtteranceRng::UtteranceRng(std::uint64_t seed, std::string_view utterance_id,
                           std::string_view purpose) {
  // The 0xff separator keeps ("ab", "c") and ("a", "bc") apart; it cannot
  // occur inside valid UTF-8.
  std::string key;
  key.reserve(utterance_id.size() + purpose.size() + 1);
  key.append(utterance_id);
  key.push_back('\xff');
  key.append(purpose);
  const std::uint64_t h = hash_string(key, seed);
  std::seed_seq seq{static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

double UtteranceRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t UtteranceRng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw ConfigError("uniform_int: empty range");
  const std::uint64_t span = hi - lo;
  if (span == ~std::uint64_t{0}) return engine_();
  const std::uint64_t range = span + 1;
  // Rejection sampling on the largest multiple of `range`.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + x % range;
}

}  // namespace biasforge
