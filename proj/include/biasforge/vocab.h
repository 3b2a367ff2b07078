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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "biasforge/align.h"
#include "biasforge/text_norm.h"

namespace biasforge {

inline constexpr double kDefaultMassThreshold = 0.9;

using WordCounts = std::unordered_map<std::string, std::uint64_t>;

/// Word frequencies of a training corpus and its common/rare partition.
///
/// `common` is the shortest prefix of the words ordered by (count desc,
/// word desc) whose summed counts reach mass_threshold * total. Words outside
/// it, including words never seen, are rare.
struct VocabStats {
  WordCounts counts;
  std::uint64_t total = 0;
  double mass_threshold = kDefaultMassThreshold;
  std::unordered_set<std::string> common;

  bool is_rare(std::string_view word) const {
    return !common.contains(std::string(word));
  }
  bool in_vocabulary(std::string_view word) const {
    return counts.contains(std::string(word));
  }
  std::size_t vocabulary_size() const { return counts.size(); }

  /// All seen words ordered by (count desc, word desc).
  std::vector<std::string> ranked_words() const;
  /// Seen rare words in ranked order; the default pool for false-bias words.
  std::vector<std::string> rare_words() const;
};

/// Partitions precomputed counts. Throws ConfigError if counts are empty or
/// the threshold lies outside (0, 1].
VocabStats stats_from_counts(WordCounts counts, double mass_threshold);

/// Counts corpus words on `jobs` shards and merges them (exact, so the
/// result does not depend on the shard layout).
VocabStats build_stats(std::span<const NormalizedText> corpus,
                       double mass_threshold = kDefaultMassThreshold,
                       int jobs = 0);
/// Serial reference for build_stats.
VocabStats build_stats_serial(std::span<const NormalizedText> corpus,
                              double mass_threshold = kDefaultMassThreshold);

/// Sorted TSV with a one-line JSON header:
///   {"format":"biasforge-vocab","mass_threshold":0.9,"total":N,...}
///   word<TAB>count   (count desc, word desc)
void write_vocab(const std::filesystem::path& path, const VocabStats& stats);
VocabStats read_vocab(const std::filesystem::path& path);

/// Reference words that appear in substitute or delete ops and are rare,
/// in reference order, deduplicated. `ref` must be the reference the
/// alignment was built from.
std::vector<std::string> mine_misrecognized_rare(const NormalizedText& ref,
                                                 const WordAlignment& alignment,
                                                 const VocabStats& stats);

/// An ordered, duplicate-free word list with O(1) membership.
class WordPool {
 public:
  WordPool() = default;
  /// Keeps the first occurrence of each word.
  explicit WordPool(std::vector<std::string> words);

  const std::vector<std::string>& words() const { return words_; }
  bool contains(std::string_view word) const {
    return index_.contains(std::string(word));
  }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& operator[](std::size_t i) const { return words_[i]; }

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string> index_;
};

/// The global list of misrecognized rare words, in first-seen order.
using GlobalBiasLexicon = WordPool;

GlobalBiasLexicon build_global_lexicon(std::span<const std::vector<std::string>> mined);

/// Plain UTF-8, one word per line.
void write_lexicon(const std::filesystem::path& path, const GlobalBiasLexicon& lexicon);
GlobalBiasLexicon read_lexicon(const std::filesystem::path& path);

/// Bias words absent from the training vocabulary, in input order, deduplicated.
std::vector<std::string> oov_subset(std::span<const std::string> bias_words,
                                    const VocabStats& training_vocabulary);
std::vector<std::string> oov_subset(std::span<const std::string> bias_words,
                                    const std::unordered_set<std::string>& training_vocabulary);

}  // namespace biasforge
