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

#include "biasforge/biasing.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "biasforge/error.h"
#include "biasforge/rng.h"

namespace biasforge {

namespace {

using WordSet = std::unordered_set<std::string>;

WordSet word_set(const NormalizedText& text) {
  return WordSet(text.words.begin(), text.words.end());
}

std::size_t available_in(const WordPool& pool, const WordSet& excluded) {
  std::size_t blocked = 0;
  for (const auto& w : excluded) blocked += pool.contains(w) ? 1 : 0;
  return pool.size() - blocked;
}

// Uniform sample of `count` distinct pool words outside `excluded`: a sparse
// Fisher-Yates walk over the whole pool that skips excluded entries.
// Requires available_in(pool, excluded) >= count.
std::vector<std::string> sample_excluding(UtteranceRng& rng, const WordPool& pool,
                                          std::size_t count, const WordSet& excluded) {
  std::vector<std::string> out;
  out.reserve(count);
  std::unordered_map<std::size_t, std::size_t> displaced;
  auto slot = [&](std::size_t k) {
    auto it = displaced.find(k);
    return it == displaced.end() ? k : it->second;
  };
  const std::size_t n = pool.size();
  for (std::size_t i = 0; out.size() < count && i < n; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(i, n - 1));
    const std::size_t picked = slot(j);
    displaced[j] = slot(i);
    if (!excluded.contains(pool[picked])) out.push_back(pool[picked]);
  }
  return out;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

bool BiasingList::contains(std::string_view word) const {
  return std::find(words.begin(), words.end(), word) != words.end();
}

bool BiasingList::is_true_bias(std::string_view word) const {
  return std::find(true_bias.begin(), true_bias.end(), word) != true_bias.end();
}

void TrainSamplingConfig::validate() const {
  check_probability(p_neg, "p_neg");
  check_probability(p_empty, "p_empty");
  if (l_min < 1 || l_min > l_max) {
    throw ConfigError("list size bounds must satisfy 1 <= l_min <= l_max");
  }
}

BiasingList build_train_list(std::string_view utterance_id,
                             const NormalizedText& reference,
                             std::span<const std::string> mined_rare,
                             const GlobalBiasLexicon& lexicon,
                             const TrainSamplingConfig& cfg) {
  cfg.validate();
  const WordSet ref_words = word_set(reference);
  for (const auto& w : mined_rare) {
    if (!ref_words.contains(w)) {
      throw ConfigError("mined word '" + w + "' does not occur in reference of " +
                        std::string(utterance_id));
    }
  }
  const std::size_t available = available_in(lexicon, ref_words);
  if (available < cfg.l_max) {
    throw ConfigError("insufficient lexicon for " + std::string(utterance_id) +
                      ": need " + std::to_string(cfg.l_max) +
                      " false-bias candidates, have " + std::to_string(available) +
                      " (short by " + std::to_string(cfg.l_max - available) + ")");
  }

  BiasingList list;
  list.utterance_id = std::string(utterance_id);
  UtteranceRng rng(cfg.seed, utterance_id, "train-list");
  if (rng.bernoulli(cfg.p_empty)) return list;

  const auto size = static_cast<std::size_t>(rng.uniform_int(cfg.l_min, cfg.l_max));
  list.words = sample_excluding(rng, lexicon, size, ref_words);
  if (!mined_rare.empty()) {
    const auto pick = static_cast<std::size_t>(rng.uniform_int(0, mined_rare.size() - 1));
    const bool drop = rng.bernoulli(cfg.p_neg);
    if (!drop) {
      list.words.push_back(mined_rare[pick]);
      list.true_bias.push_back(mined_rare[pick]);
    }
  }
  rng.shuffle(list.words);
  return list;
}

BiasingList build_scenario1_list(std::string_view utterance_id,
                                 const NormalizedText& reference,
                                 const VocabStats& stats, const WordPool& rare_pool,
                                 std::size_t n, std::uint64_t seed) {
  const WordSet ref_words = word_set(reference);
  std::vector<std::string> rare_ref;
  WordSet seen;
  for (const auto& w : reference.words) {
    if (stats.is_rare(w) && seen.insert(w).second) rare_ref.push_back(w);
  }
  if (rare_ref.size() > n) {
    throw ConfigError("utterance " + std::string(utterance_id) + " has " +
                      std::to_string(rare_ref.size()) +
                      " rare words, more than the list size " + std::to_string(n));
  }
  const std::size_t fill = n - rare_ref.size();
  const std::size_t available = available_in(rare_pool, ref_words);
  if (available < fill) {
    throw ConfigError("insufficient rare-word pool for " + std::string(utterance_id) +
                      ": need " + std::to_string(fill) + ", have " +
                      std::to_string(available));
  }

  BiasingList list;
  list.utterance_id = std::string(utterance_id);
  UtteranceRng rng(seed, utterance_id, "scenario1");
  list.words = sample_excluding(rng, rare_pool, fill, ref_words);
  list.words.insert(list.words.end(), rare_ref.begin(), rare_ref.end());
  rng.shuffle(list.words);
  for (const auto& w : list.words) {
    if (seen.contains(w)) list.true_bias.push_back(w);
  }
  return list;
}

BiasingList build_scenario2_list(std::string_view utterance_id,
                                 const NormalizedText& reference,
                                 const WordPool& rare_pool, std::size_t n,
                                 std::uint64_t seed) {
  const WordSet ref_words = word_set(reference);
  const std::size_t available = available_in(rare_pool, ref_words);
  if (available < n) {
    throw ConfigError("insufficient rare-word pool for " + std::string(utterance_id) +
                      ": need " + std::to_string(n) + ", have " +
                      std::to_string(available));
  }
  BiasingList list;
  list.utterance_id = std::string(utterance_id);
  UtteranceRng rng(seed, utterance_id, "scenario2");
  list.words = sample_excluding(rng, rare_pool, n, ref_words);
  return list;
}

std::string render_prompt(const BiasingList& list) {
  std::string out;
  for (const auto& w : list.words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

void validate_list(const BiasingList& list, const NormalizedText& reference) {
  const WordSet ref_words = word_set(reference);
  const WordSet members(list.words.begin(), list.words.end());
  const std::string where = "biasing list " + list.utterance_id + ": ";
  if (members.size() != list.words.size()) throw Error(where + "duplicate words");
  WordSet true_set;
  for (const auto& w : list.true_bias) {
    if (!members.contains(w)) throw Error(where + "true-bias word '" + w + "' not in list");
    if (!ref_words.contains(w)) {
      throw Error(where + "true-bias word '" + w + "' absent from reference");
    }
    true_set.insert(w);
  }
  for (const auto& w : list.words) {
    if (!true_set.contains(w) && ref_words.contains(w)) {
      throw Error(where + "false-bias word '" + w + "' occurs in reference");
    }
  }
}

}  // namespace biasforge
