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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "biasforge/text_norm.h"

namespace biasforge {

using TokenId = std::uint32_t;

/// Prompt token limit of the stock decoder context.
inline constexpr std::size_t kBaselinePromptBudget = 224;
/// Decoder positions available after extending the positional embedding.
inline constexpr std::size_t kExtendedPositions = 756;
/// Positions held back for the target transcript in extended mode.
inline constexpr std::size_t kDefaultTargetReserve = 256;

enum class PromptMode { kBaseline, kExtended };

/// 224 for kBaseline; kExtendedPositions - target_reserve for kExtended.
std::size_t prompt_budget(PromptMode mode,
                          std::size_t target_reserve = kDefaultTargetReserve);

/// Byte-level BPE tokenizer over a tiktoken-style ranks table.
///
/// Text is first split with the GPT-2 pre-tokenization pattern
/// (contractions, optionally space-prefixed letter/number/symbol runs,
/// whitespace runs), then each piece is merged greedily by lowest rank.
/// Token ids are ranks. Immutable after construction.
class Tokenizer {
 public:
  /// Loads `<base64 bytes> <rank>` lines. Special tokens are read from
  /// `specials_file` if given, otherwise from `<ranks_file>.specials.json`
  /// when that exists. Throws ParseError naming the offending line.
  static Tokenizer load(const std::filesystem::path& ranks_file,
                        const std::optional<std::filesystem::path>&
                            specials_file = std::nullopt);

  /// Builds from in-memory tables. All 256 single bytes must be ranked.
  static Tokenizer from_ranks(
      std::vector<std::pair<std::string, TokenId>> ranks,
      std::map<std::string, TokenId> specials = {});

  std::vector<TokenId> encode(std::string_view text) const;
  std::string decode(std::span<const TokenId> ids) const;
  std::size_t count_tokens(std::string_view text) const {
    return encode(text).size();
  }

  /// One past the largest id (ranks and specials).
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t num_ranks() const { return encoder_.size(); }
  std::optional<TokenId> special_id(std::string_view name) const;
  const std::map<std::string, TokenId>& specials() const { return specials_; }

  /// The GPT-2 pre-tokenization of `text`, as contiguous pieces.
  static std::vector<std::string_view> pretokenize(std::string_view text);

 private:
  Tokenizer() = default;
  void bpe(std::string_view piece, std::vector<TokenId>& out) const;
  std::optional<TokenId> rank_of(std::string_view bytes) const;

  std::unordered_map<std::string, TokenId> encoder_;
  std::vector<std::string> decoder_;
  std::vector<bool> has_id_;
  std::map<std::string, TokenId> specials_;
  std::size_t vocab_size_ = 0;
};

/// Token range [start, end) belonging to one transcript word.
struct TokenSpan {
  std::size_t word_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

/// Target-side rendering used for token spans: every word carries a
/// leading space, e.g. {"i", "feel"} -> " i feel".
std::string render_target(const NormalizedText& words);

struct TargetTokens {
  std::vector<TokenId> ids;
  std::vector<TokenSpan> spans;
};

/// Encodes render_target(words) and returns one span per word. The
/// concatenated span tokens equal tok.encode(render_target(words)).
TargetTokens word_token_spans(const Tokenizer& tok, const NormalizedText& words);

/// Drops whole trailing words of a space-joined prompt until it encodes to
/// at most `budget` tokens. Throws ConfigError when budget is 0.
std::string truncate_prompt(const Tokenizer& tok, std::string_view prompt,
                            std::size_t budget);

}  // namespace biasforge
