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

#include "fixtures.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "biasforge/manifest_io.h"

namespace biasforge::testing {

ScratchDir::ScratchDir(const std::string& tag) {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("biasforge-" + tag + "-" + std::to_string(rd()));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create scratch directory");
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<std::pair<std::string, TokenId>> train_toy_bpe(const std::vector<std::string>& lines,
                                                           std::size_t num_merges) {
  std::vector<std::pair<std::string, TokenId>> ranks;
  for (int b = 0; b < 256; ++b) ranks.emplace_back(std::string(1, static_cast<char>(b)), b);

  // Each distinct piece once, with its multiplicity.
  std::map<std::string, std::size_t> piece_counts;
  for (const auto& line : lines) {
    for (auto piece : Tokenizer::pretokenize(line)) ++piece_counts[std::string(piece)];
  }
  std::vector<std::pair<std::vector<std::string>, std::size_t>> words;
  for (const auto& [piece, n] : piece_counts) {
    std::vector<std::string> symbols;
    for (char c : piece) symbols.emplace_back(1, c);
    words.emplace_back(std::move(symbols), n);
  }

  for (std::size_t m = 0; m < num_merges; ++m) {
    std::map<std::pair<std::string, std::string>, std::size_t> pairs;
    for (const auto& [symbols, n] : words) {
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) pairs[{symbols[i], symbols[i + 1]}] += n;
    }
    if (pairs.empty()) break;
    auto best = pairs.begin();
    for (auto it = pairs.begin(); it != pairs.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    if (best->second < 2) break;
    const auto [left, right] = best->first;
    const std::string merged = left + right;
    ranks.emplace_back(merged, static_cast<TokenId>(ranks.size()));
    for (auto& [symbols, n] : words) {
      std::vector<std::string> next;
      for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(symbols[i]);
        }
      }
      symbols = std::move(next);
    }
  }
  return ranks;
}

std::vector<std::string> tokenizer_training_lines() {
  std::vector<std::string> lines = {
      "i feel pain in my ears with tinnitus",
      "foreign rule to the phanariote period",
      "It's 2026 and we're testing, aren't we? Yes: 42 times!",
      "mcphillips phanariote lukyamuzi kimbolton polygynandy",
  };
  SyntheticCorpusConfig cfg;
  cfg.num_utterances = 300;
  cfg.seed = 11;
  for (const auto& u : synthetic_corpus(cfg)) lines.push_back(u.text.render());
  return lines;
}

const Tokenizer& toy_tokenizer() {
  static const Tokenizer tok = Tokenizer::from_ranks(train_toy_bpe(tokenizer_training_lines(), 400));
  return tok;
}

std::string base64_encode(const std::string& bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    for (int s = 18; s >= 0; s -= 6) out += kAlphabet[(v >> s) & 63];
  }
  if (i + 1 == bytes.size()) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

void write_ranks(const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, TokenId>>& ranks) {
  std::string text;
  for (const auto& [bytes, rank] : ranks) text += base64_encode(bytes) + " " + std::to_string(rank) + "\n";
  write_text(path, text);
}

std::string synthetic_word(std::size_t i) {
  static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n",
                                            "p", "r", "s", "t", "v", "z", "ch", "sh"};
  static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou", "ee"};
  std::string word;
  // Bijective base-128 numbering over syllables, so every index is unique.
  std::size_t n = i + 1;
  do {
    --n;
    const std::size_t syllable = n % 128;
    word += kOnsets[syllable / 8];
    word += kVowels[syllable % 8];
    n /= 128;
  } while (n > 0);
  return word;
}

std::vector<Utterance> synthetic_corpus(const SyntheticCorpusConfig& cfg) {
  std::vector<double> weights(cfg.vocabulary);
  for (std::size_t r = 0; r < cfg.vocabulary; ++r) {
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_exponent);
  }
  std::mt19937_64 engine(cfg.seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> length(cfg.min_words, cfg.max_words);

  std::vector<Utterance> corpus(cfg.num_utterances);
  const int width = static_cast<int>(std::to_string(cfg.num_utterances).size());
  for (std::size_t u = 0; u < cfg.num_utterances; ++u) {
    std::string id = std::to_string(u);
    id.insert(0, static_cast<std::size_t>(width) - id.size(), '0');
    corpus[u].id = cfg.id_prefix + id;
    const std::size_t n = length(engine);
    for (std::size_t k = 0; k < n; ++k) corpus[u].text.words.push_back(synthetic_word(pick(engine)));
    corpus[u].text.raw = corpus[u].text.render();
  }
  return corpus;
}

void write_corpus_jsonl(const std::filesystem::path& path, const std::vector<Utterance>& corpus) {
  std::vector<UtteranceRecord> records;
  records.reserve(corpus.size());
  for (const auto& u : corpus) records.push_back({u.id, u.text.render(), std::nullopt});
  write_jsonl(path, records);
}

}  // namespace biasforge::testing
