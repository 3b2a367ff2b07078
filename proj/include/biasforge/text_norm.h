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

#include <string>
#include <string_view>
#include <vector>

namespace biasforge {

/// A transcript after normalization. Words are nonempty, lowercase, and
/// contain only letters, digits and intra-word apostrophes.
struct NormalizedText {
  std::vector<std::string> words;
  std::string raw;

  /// Words joined by single spaces.
  std::string render() const;
  bool empty() const { return words.empty(); }
  friend bool operator==(const NormalizedText& a, const NormalizedText& b) {
    return a.words == b.words;
  }
};

/// English-style transcript normalization:
///   NFC, full lowercase, punctuation and symbols become separators,
///   apostrophes (' or U+2019) survive only between two word characters,
///   combining marks left after NFC are dropped, whitespace collapses.
/// Invalid UTF-8 sequences are treated as separators.
NormalizedText normalize(std::string_view text);

/// Whitespace split only. Used for `--no-normalize` and for output of an
/// external normalizer.
NormalizedText split_words(std::string_view text);

/// Pipes `lines` through an external normalizer command (one line in, one
/// line out) and splits the results on whitespace. Throws IoError if the
/// command fails or produces a different number of lines.
std::vector<NormalizedText> normalize_external(
    const std::string& command, const std::vector<std::string>& lines);

}  // namespace biasforge
