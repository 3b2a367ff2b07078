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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biasforge/text_norm.h"
#include "biasforge/vocab.h"

namespace biasforge {

/// Per-utterance biasing list. `true_bias` lists, in list order, the words
/// that occur in the utterance's reference.
struct BiasingList {
  std::string utterance_id;
  std::vector<std::string> words;
  std::vector<std::string> true_bias;

  bool empty() const { return words.empty(); }
  bool contains(std::string_view word) const;
  bool is_true_bias(std::string_view word) const;
  std::size_t num_false_bias() const { return words.size() - true_bias.size(); }
  friend bool operator==(const BiasingList&, const BiasingList&) = default;
};

/// Train-time sampling knobs. Defaults are the published settings.
struct TrainSamplingConfig {
  std::size_t l_min = 25;
  std::size_t l_max = 150;
  double p_neg = 0.3;
  double p_empty = 0.2;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless 0 <= p <= 1 and 1 <= l_min <= l_max.
  void validate() const;
};

/// Train-time list for one utterance:
///   with probability p_empty the list is empty;
///   otherwise L ~ U{l_min..l_max} false-bias words are drawn without
///   replacement from `lexicon` minus the reference words; if `mined_rare`
///   is non-empty one of its words is chosen uniformly as the true-bias
///   word and then dropped with probability p_neg; the result is shuffled.
/// The random stream depends only on (cfg.seed, utterance_id). Throws
/// ConfigError when the lexicon cannot supply l_max false-bias words.
BiasingList build_train_list(std::string_view utterance_id,
                             const NormalizedText& reference,
                             std::span<const std::string> mined_rare,
                             const GlobalBiasLexicon& lexicon,
                             const TrainSamplingConfig& cfg);

/// Test-time list, first scenario: every rare reference word is a true-bias
/// word, and the list is filled to exactly `n` words with false-bias words
/// from `rare_pool` (minus reference words). Throws ConfigError when the
/// reference has more than `n` rare words or the pool is too small.
BiasingList build_scenario1_list(std::string_view utterance_id,
                                 const NormalizedText& reference,
                                 const VocabStats& stats, const WordPool& rare_pool,
                                 std::size_t n, std::uint64_t seed);

/// Test-time list, second scenario: `n` false-bias words only.
BiasingList build_scenario2_list(std::string_view utterance_id,
                                 const NormalizedText& reference,
                                 const WordPool& rare_pool, std::size_t n,
                                 std::uint64_t seed);

/// Words joined by single spaces.
std::string render_prompt(const BiasingList& list);

/// Throws Error if `list` violates a structural invariant against its
/// reference: duplicates, true_bias not a subset of words, a true-bias word
/// absent from the reference, or a false-bias word present in it.
void validate_list(const BiasingList& list, const NormalizedText& reference);

}  // namespace biasforge
