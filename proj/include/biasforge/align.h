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
#include <string_view>
#include <vector>

#include "biasforge/text_norm.h"

namespace biasforge {

enum class EditKind { kMatch, kSubstitute, kInsert, kDelete };

std::string_view to_string(EditKind kind);
/// Inverse of to_string; throws ParseError on an unknown name.
EditKind edit_kind_from_string(std::string_view name);

struct EditOp {
  EditKind kind;
  std::optional<std::string> ref;  // absent for kInsert
  std::optional<std::string> hyp;  // absent for kDelete
  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct WordAlignment {
  std::vector<EditOp> ops;

  std::vector<std::string> ref_words() const;
  std::vector<std::string> hyp_words() const;
  friend bool operator==(const WordAlignment&, const WordAlignment&) = default;
};

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t matches = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

/// Minimum edit distance alignment with unit costs. Backtrace from the end
/// prefers match, then substitute, then delete, then insert.
WordAlignment align_words(std::span<const std::string> ref,
                          std::span<const std::string> hyp);

inline WordAlignment align_words(const NormalizedText& ref,
                                 const NormalizedText& hyp) {
  return align_words(ref.words, hyp.words);
}

EditCounts edit_counts(const WordAlignment& alignment);

/// Aligns refs[i] with hyps[i] for every i on `jobs` OpenMP threads.
std::vector<WordAlignment> align_corpus(std::span<const NormalizedText> refs,
                                        std::span<const NormalizedText> hyps,
                                        int jobs = 0);
/// Serial reference for align_corpus.
std::vector<WordAlignment> align_corpus_serial(std::span<const NormalizedText> refs,
                                               std::span<const NormalizedText> hyps);

}  // namespace biasforge
