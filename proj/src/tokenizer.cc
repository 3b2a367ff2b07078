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

#include "biasforge/tokenizer.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>

#include "biasforge/error.h"
#include "json.hpp"

namespace biasforge {

namespace {

std::optional<std::string> base64_decode(std::string_view in) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (in.empty() || in.size() % 4 != 0) return std::nullopt;
  std::string out;
  out.reserve(in.size() / 4 * 3);
  for (std::size_t i = 0; i < in.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = in[i + k];
      if (c == '=') {
        if (i + 4 != in.size() || k < 2) return std::nullopt;
        v[k] = 0;
        ++pad;
      } else {
        if (pad) return std::nullopt;
        v[k] = value(c);
        if (v[k] < 0) return std::nullopt;
      }
    }
    const std::uint32_t triple = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<char>((triple >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<char>((triple >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<char>(triple & 0xff));
  }
  return out;
}

// Code point at byte offset `i`; ill-formed bytes decode as one byte of
// class "other".
struct CodePoint {
  UChar32 c;
  std::size_t len;
};

CodePoint code_point_at(std::string_view s, std::size_t i) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
  std::int32_t pos = static_cast<std::int32_t>(i);
  const std::int32_t length = static_cast<std::int32_t>(s.size());
  UChar32 c;
  U8_NEXT(p, pos, length, c);
  return {c, static_cast<std::size_t>(pos) - i};
}

enum class PieceClass { kLetter, kNumber, kSpace, kOther };

PieceClass piece_class(UChar32 c) {
  if (c < 0) return PieceClass::kOther;
  if (u_isUWhiteSpace(c)) return PieceClass::kSpace;
  const auto mask = U_GET_GC_MASK(c);
  if (mask & U_GC_L_MASK) return PieceClass::kLetter;
  if (mask & U_GC_N_MASK) return PieceClass::kNumber;
  return PieceClass::kOther;
}

// Length of a contraction suffix ('s 't 're 've 'm 'll 'd) at i, or 0.
std::size_t contraction_at(std::string_view s, std::size_t i) {
  if (s[i] != '\'') return 0;
  const std::string_view rest = s.substr(i + 1);
  for (std::string_view suffix : {"re", "ve", "ll", "s", "t", "m", "d"}) {
    if (rest.starts_with(suffix)) return 1 + suffix.size();
  }
  return 0;
}

// End of the maximal run of `cls` starting at i.
std::size_t run_end(std::string_view s, std::size_t i, PieceClass cls) {
  while (i < s.size()) {
    const CodePoint cp = code_point_at(s, i);
    if (piece_class(cp.c) != cls) break;
    i += cp.len;
  }
  return i;
}

}  // namespace

std::size_t prompt_budget(PromptMode mode, std::size_t target_reserve) {
  if (mode == PromptMode::kBaseline) return kBaselinePromptBudget;
  if (target_reserve >= kExtendedPositions) {
    throw ConfigError("target reserve must be below " +
                      std::to_string(kExtendedPositions) + " positions");
  }
  return kExtendedPositions - target_reserve;
}

std::vector<std::string_view> Tokenizer::pretokenize(std::string_view s) {
  std::vector<std::string_view> pieces;
  std::size_t i = 0;
  while (i < s.size()) {
    if (const std::size_t n = contraction_at(s, i)) {
      pieces.push_back(s.substr(i, n));
      i += n;
      continue;
    }
    const CodePoint cp = code_point_at(s, i);
    PieceClass cls = piece_class(cp.c);
    std::size_t start = i;
    std::size_t body = i;
    if (cp.c == ' ' && i + 1 < s.size()) {
      const CodePoint next = code_point_at(s, i + 1);
      const PieceClass next_cls = piece_class(next.c);
      if (next_cls != PieceClass::kSpace) {
        cls = next_cls;
        body = i + 1;
      }
    }
    std::size_t end;
    if (cls == PieceClass::kSpace) {
      // \s+(?!\S) | \s+
      end = run_end(s, i, PieceClass::kSpace);
      if (end < s.size()) {
        std::size_t last = i;
        std::size_t count = 0;
        for (std::size_t k = i; k < end; k += code_point_at(s, k).len) {
          last = k;
          ++count;
        }
        if (count >= 2) end = last;
      }
    } else {
      end = run_end(s, body, cls);
    }
    pieces.push_back(s.substr(start, end - start));
    i = end;
  }
  return pieces;
}

Tokenizer Tokenizer::from_ranks(std::vector<std::pair<std::string, TokenId>> ranks,
                                std::map<std::string, TokenId> specials) {
  Tokenizer tok;
  TokenId max_id = 0;
  for (auto& [bytes, rank] : ranks) {
    if (bytes.empty()) throw ConfigError("empty token bytes in ranks table");
    if (rank == std::numeric_limits<TokenId>::max()) {
      throw ConfigError("rank out of range");
    }
    max_id = std::max(max_id, rank);
  }
  for (const auto& [name, id] : specials) max_id = std::max(max_id, id);
  const std::size_t size =
      ranks.empty() && specials.empty() ? 0 : std::size_t{max_id} + 1;
  tok.decoder_.resize(size);
  tok.has_id_.assign(size, false);
  for (auto& [bytes, rank] : ranks) {
    if (tok.has_id_[rank]) {
      throw ConfigError("duplicate rank " + std::to_string(rank));
    }
    if (!tok.encoder_.emplace(bytes, rank).second) {
      throw ConfigError("duplicate token bytes for rank " + std::to_string(rank));
    }
    tok.has_id_[rank] = true;
    tok.decoder_[rank] = std::move(bytes);
  }
  for (const auto& [name, id] : specials) {
    if (tok.has_id_[id]) {
      throw ConfigError("special token " + name + " collides with id " +
                        std::to_string(id));
    }
    tok.has_id_[id] = true;
    tok.decoder_[id] = name;
  }
  for (int b = 0; b < 256; ++b) {
    if (!tok.encoder_.contains(std::string(1, static_cast<char>(b)))) {
      throw ConfigError("ranks table lacks single byte " + std::to_string(b));
    }
  }
  tok.specials_ = std::move(specials);
  tok.vocab_size_ = size;
  return tok;
}

Tokenizer Tokenizer::load(const std::filesystem::path& ranks_file,
                          const std::optional<std::filesystem::path>& specials_file) {
  std::ifstream in(ranks_file, std::ios::binary);
  if (!in) throw IoError("cannot open ranks file " + ranks_file.string());

  std::vector<std::pair<std::string, TokenId>> ranks;
  std::unordered_map<TokenId, std::size_t> seen_rank;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos) {
      throw ParseError("ranks file: expected '<base64> <rank>'", line_no);
    }
    auto bytes = base64_decode(std::string_view(line).substr(0, space));
    if (!bytes) throw ParseError("ranks file: invalid base64", line_no);
    TokenId rank = 0;
    const char* first = line.data() + space + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, rank);
    if (ec != std::errc() || ptr != last || first == last) {
      throw ParseError("ranks file: invalid rank", line_no);
    }
    if (auto [it, fresh] = seen_rank.emplace(rank, line_no); !fresh) {
      throw ParseError("ranks file: duplicate rank " + std::to_string(rank) +
                           " (first on line " + std::to_string(it->second) + ")",
                       line_no);
    }
    ranks.emplace_back(std::move(*bytes), rank);
  }
  if (ranks.empty()) throw ParseError("ranks file is empty: " + ranks_file.string(), 0);

  std::map<std::string, TokenId> specials;
  std::filesystem::path sidecar =
      specials_file.value_or(std::filesystem::path(ranks_file.string() + ".specials.json"));
  if (specials_file || std::filesystem::exists(sidecar)) {
    std::ifstream sin(sidecar);
    if (!sin) throw IoError("cannot open special tokens file " + sidecar.string());
    try {
      const auto j = nlohmann::json::parse(sin);
      for (const auto& [name, id] : j.items()) {
        specials.emplace(name, id.get<TokenId>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("special tokens file " + sidecar.string() + ": " + e.what(), 0);
    }
  }
  return from_ranks(std::move(ranks), std::move(specials));
}

std::optional<TokenId> Tokenizer::rank_of(std::string_view bytes) const {
  auto it = encoder_.find(std::string(bytes));
  if (it == encoder_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenId> Tokenizer::special_id(std::string_view name) const {
  auto it = specials_.find(std::string(name));
  if (it == specials_.end()) return std::nullopt;
  return it->second;
}

void Tokenizer::bpe(std::string_view piece, std::vector<TokenId>& out) const {
  if (auto whole = rank_of(piece)) {
    out.push_back(*whole);
    return;
  }
  // Boundaries of the current parts; part k is [bounds[k], bounds[k+1]).
  std::vector<std::size_t> bounds(piece.size() + 1);
  for (std::size_t i = 0; i <= piece.size(); ++i) bounds[i] = i;
  while (bounds.size() > 2) {
    std::size_t best = 0;
    TokenId best_rank = std::numeric_limits<TokenId>::max();
    for (std::size_t k = 0; k + 2 < bounds.size(); ++k) {
      const auto merged = piece.substr(bounds[k], bounds[k + 2] - bounds[k]);
      if (auto r = rank_of(merged); r && *r < best_rank) {
        best_rank = *r;
        best = k;
      }
    }
    if (best_rank == std::numeric_limits<TokenId>::max()) break;
    bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    out.push_back(*rank_of(piece.substr(bounds[k], bounds[k + 1] - bounds[k])));
  }
}

std::vector<TokenId> Tokenizer::encode(std::string_view text) const {
  std::vector<TokenId> ids;
  for (std::string_view piece : pretokenize(text)) bpe(piece, ids);
  return ids;
}

std::string Tokenizer::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) {
    if (id >= has_id_.size() || !has_id_[id]) {
      throw ConfigError("unknown token id " + std::to_string(id));
    }
    out += decoder_[id];
  }
  return out;
}

std::string render_target(const NormalizedText& words) {
  std::string out;
  for (const auto& w : words.words) {
    out.push_back(' ');
    out += w;
  }
  return out;
}

TargetTokens word_token_spans(const Tokenizer& tok, const NormalizedText& words) {
  TargetTokens result;
  result.spans.reserve(words.words.size());
  // A space-prefixed word never shares a pre-token with its neighbours, so
  // per-word encodings concatenate to the encoding of the whole rendering.
  for (std::size_t w = 0; w < words.words.size(); ++w) {
    const std::size_t start = result.ids.size();
    const auto ids = tok.encode(" " + words.words[w]);
    result.ids.insert(result.ids.end(), ids.begin(), ids.end());
    result.spans.push_back({w, start, result.ids.size()});
  }
  return result;
}

std::string truncate_prompt(const Tokenizer& tok, std::string_view prompt,
                            std::size_t budget) {
  if (budget == 0) throw ConfigError("prompt budget must be positive");
  const NormalizedText words = split_words(prompt);
  std::string kept;
  std::size_t used = 0;
  for (const auto& w : words.words) {
    const std::size_t cost = tok.count_tokens(kept.empty() ? w : " " + w);
    if (used + cost > budget) break;
    if (!kept.empty()) kept.push_back(' ');
    kept += w;
    used += cost;
  }
  return kept;
}

}  // namespace biasforge
