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
#include <string_view>
#include <vector>

#include "biasforge/biasing.h"
#include "biasforge/metrics.h"
#include "biasforge/utterance.h"
#include "biasforge/vocab.h"

namespace biasforge {

// Synthetic noisy recognizer used as a test oracle. It models biasing as a
// reduction of the substitution probability for list words; it says nothing
// about how a real model decodes.
struct ErrorModel {
  double p_sub_common = 0.0;
  double p_sub_rare = 0.0;
  double p_del = 0.0;
  double p_ins = 0.0;
  /// Multiplier on p_sub_rare for rare reference words present in the list.
  double bias_effect = 1.0;
  /// Added to the rare-word substitution probability per false-bias word in
  /// the list (the distractor-sensitive variant). 0 disables it.
  double distractor_slope = 0.0;
  /// Source of substituted and inserted words.
  WordPool confusion_pool;
  std::uint64_t seed = 0;

  /// Throws ConfigError on out-of-range parameters, p_sub_rare < p_sub_common,
  /// or an empty pool while any error probability is positive.
  void validate() const;
};

/// Per reference word: delete with p_del, otherwise substitute with the
/// word's substitution probability; after each position insert a pool word
/// with p_ins. Substitutes are drawn uniformly from the pool minus the true
/// word. Every position consumes the same number of draws from the stream
/// keyed by (model.seed, utterance_id), so runs that differ only in
/// probabilities use common random numbers.
NormalizedText simulate_hypothesis(std::string_view utterance_id, const NormalizedText& ref,
                                   const VocabStats& stats, const BiasingList* list,
                                   const ErrorModel& model);

/// simulate_hypothesis over a corpus; `lists` is empty (no biasing) or
/// parallel to `corpus`.
std::vector<NormalizedText> simulate_corpus(std::span<const Utterance> corpus,
                                            const VocabStats& stats,
                                            std::span<const BiasingList> lists,
                                            const ErrorModel& model, int jobs = 0);
std::vector<NormalizedText> simulate_corpus_serial(std::span<const Utterance> corpus,
                                                   const VocabStats& stats,
                                                   std::span<const BiasingList> lists,
                                                   const ErrorModel& model);

enum class Scenario { kAllRareReferenceWords = 1, kFalseBiasOnly = 2 };

struct SweepPoint {
  std::size_t list_size = 0;
  /// Hypotheses simulated with the list as context.
  EvalReport with_list;
  /// Hypotheses simulated without a list, scored against the same lists.
  EvalReport without_list;
};

/// For each size: builds scenario lists (seeded by list_seed), simulates
/// with and without them, and evaluates. Results follow `sizes` order.
std::vector<SweepPoint> sweep_list_size(std::span<const Utterance> corpus,
                                        const VocabStats& stats, const WordPool& rare_pool,
                                        std::span<const std::size_t> sizes,
                                        Scenario scenario, const ErrorModel& model,
                                        std::uint64_t list_seed, int jobs = 0);

}  // namespace biasforge
