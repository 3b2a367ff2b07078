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
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "biasforge/align.h"
#include "biasforge/biasing.h"

namespace biasforge {

/// Error counts of one word partition.
struct ErrorCounts {
  std::size_t sub = 0;
  std::size_t del = 0;
  std::size_t ins = 0;
  std::size_t ref_count = 0;

  std::size_t errors() const { return sub + del + ins; }
  /// Percent error rate; absent when the partition has no reference words.
  std::optional<double> rate() const;

  ErrorCounts& operator+=(const ErrorCounts& o) {
    sub += o.sub;
    del += o.del;
    ins += o.ins;
    ref_count += o.ref_count;
    return *this;
  }
  friend ErrorCounts operator+(ErrorCounts a, const ErrorCounts& b) { return a += b; }
  friend bool operator==(const ErrorCounts&, const ErrorCounts&) = default;
};

/// Errors split by biasing-list membership. `oov` is the subset of `biased`
/// restricted to OOV list words.
struct PartitionedCounts {
  ErrorCounts biased;
  ErrorCounts unbiased;
  ErrorCounts oov;

  ErrorCounts total() const { return biased + unbiased; }
  PartitionedCounts& operator+=(const PartitionedCounts& o) {
    biased += o.biased;
    unbiased += o.unbiased;
    oov += o.oov;
    return *this;
  }
  friend bool operator==(const PartitionedCounts&, const PartitionedCounts&) = default;
};

/// The four rates, in percent. A rate is absent when its partition has no
/// reference words.
struct Rates {
  std::optional<double> wer;
  std::optional<double> u_wer;
  std::optional<double> r_wer;
  std::optional<double> oov_wer;
};

Rates rates_of(const PartitionedCounts& counts);

struct EvalReport {
  Rates rates;
  PartitionedCounts counts;
  std::size_t num_utterances = 0;
};

/// Attributes each op to a partition. Substitutions, deletions and matches
/// go by the reference word, insertions by the hypothesis word. Throws
/// ConfigError if an `oov` word is not in the list.
PartitionedCounts classify_errors(const WordAlignment& alignment, const BiasingList& list,
                                  const std::unordered_set<std::string>& oov);

/// Pools counts over utterances, then computes rates (micro average).
/// Throws ConfigError on an empty input.
EvalReport aggregate(std::span<const PartitionedCounts> per_utterance);

/// Mean of per-utterance WERs over utterances with reference words. Labeled
/// separately because corpus numbers are always count-pooled.
std::optional<double> macro_average_wer(std::span<const PartitionedCounts> per_utterance);

/// 100 * (baseline - system) / baseline. Throws ConfigError when baseline <= 0.
double relative_improvement(double baseline_rate, double system_rate);

/// classify_errors over a corpus on `jobs` threads; oov[i] belongs to lists[i].
std::vector<PartitionedCounts> classify_corpus(
    std::span<const WordAlignment> alignments, std::span<const BiasingList> lists,
    std::span<const std::unordered_set<std::string>> oov, int jobs = 0);
std::vector<PartitionedCounts> classify_corpus_serial(
    std::span<const WordAlignment> alignments, std::span<const BiasingList> lists,
    std::span<const std::unordered_set<std::string>> oov);

}  // namespace biasforge
