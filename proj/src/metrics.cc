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

#include "biasforge/metrics.h"

#include "biasforge/error.h"
#include "biasforge/parallel.h"

namespace biasforge {

std::optional<double> ErrorCounts::rate() const {
  if (ref_count == 0) return std::nullopt;
  return 100.0 * static_cast<double>(errors()) / static_cast<double>(ref_count);
}

Rates rates_of(const PartitionedCounts& counts) {
  return {counts.total().rate(), counts.unbiased.rate(), counts.biased.rate(),
          counts.oov.rate()};
}

PartitionedCounts classify_errors(const WordAlignment& alignment, const BiasingList& list,
                                  const std::unordered_set<std::string>& oov) {
  const std::unordered_set<std::string> members(list.words.begin(), list.words.end());
  for (const auto& w : oov) {
    if (!members.contains(w)) {
      throw ConfigError("OOV word '" + w + "' is not in the biasing list of " +
                        list.utterance_id);
    }
  }
  PartitionedCounts c;
  for (const auto& op : alignment.ops) {
    const std::string& word = op.kind == EditKind::kInsert ? *op.hyp : *op.ref;
    ErrorCounts& part = members.contains(word) ? c.biased : c.unbiased;
    ErrorCounts* oov_part = oov.contains(word) ? &c.oov : nullptr;
    auto bump = [&](std::size_t ErrorCounts::*field) {
      ++(part.*field);
      if (oov_part) ++(oov_part->*field);
    };
    switch (op.kind) {
      case EditKind::kMatch: bump(&ErrorCounts::ref_count); break;
      case EditKind::kSubstitute:
        bump(&ErrorCounts::sub);
        bump(&ErrorCounts::ref_count);
        break;
      case EditKind::kDelete:
        bump(&ErrorCounts::del);
        bump(&ErrorCounts::ref_count);
        break;
      case EditKind::kInsert: bump(&ErrorCounts::ins); break;
    }
  }
  return c;
}

EvalReport aggregate(std::span<const PartitionedCounts> per_utterance) {
  if (per_utterance.empty()) throw ConfigError("cannot aggregate an empty set of utterances");
  EvalReport report;
  for (const auto& c : per_utterance) report.counts += c;
  report.num_utterances = per_utterance.size();
  report.rates = rates_of(report.counts);
  return report;
}

std::optional<double> macro_average_wer(std::span<const PartitionedCounts> per_utterance) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : per_utterance) {
    if (auto r = c.total().rate()) {
      sum += *r;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double relative_improvement(double baseline_rate, double system_rate) {
  if (!(baseline_rate > 0.0)) {
    throw ConfigError("relative improvement needs a positive baseline rate");
  }
  return 100.0 * (baseline_rate - system_rate) / baseline_rate;
}

namespace {

void check_corpus(std::size_t a, std::size_t l, std::size_t o) {
  if (a != l || a != o) throw ConfigError("classify_corpus: input lengths differ");
}

}  // namespace

std::vector<PartitionedCounts> classify_corpus(
    std::span<const WordAlignment> alignments, std::span<const BiasingList> lists,
    std::span<const std::unordered_set<std::string>> oov, int jobs) {
  check_corpus(alignments.size(), lists.size(), oov.size());
  std::vector<PartitionedCounts> out(alignments.size());
  parallel_for(alignments.size(), jobs, [&](std::size_t i) {
    out[i] = classify_errors(alignments[i], lists[i], oov[i]);
  });
  return out;
}

std::vector<PartitionedCounts> classify_corpus_serial(
    std::span<const WordAlignment> alignments, std::span<const BiasingList> lists,
    std::span<const std::unordered_set<std::string>> oov) {
  check_corpus(alignments.size(), lists.size(), oov.size());
  std::vector<PartitionedCounts> out;
  out.reserve(alignments.size());
  for (std::size_t i = 0; i < alignments.size(); ++i) {
    out.push_back(classify_errors(alignments[i], lists[i], oov[i]));
  }
  return out;
}

}  // namespace biasforge
