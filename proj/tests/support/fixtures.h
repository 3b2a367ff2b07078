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

// Fixtures shared by the unit and acceptance tests: a scratch directory, a
// small BPE ranks table trained on the fly, and a Zipf-distributed synthetic
// corpus.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "biasforge/tokenizer.h"
#include "biasforge/utterance.h"

namespace biasforge::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag);
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

/// Byte-level BPE ranks: the 256 single bytes first, then up to
/// `num_merges` merges learned greedily from the pre-tokenized lines.
std::vector<std::pair<std::string, TokenId>> train_toy_bpe(const std::vector<std::string>& lines,
                                                           std::size_t num_merges);

std::string base64_encode(const std::string& bytes);

/// Lines used to train the toy tokenizer: synthetic words plus a little
/// English with punctuation, digits and contractions.
std::vector<std::string> tokenizer_training_lines();

/// Tokenizer over train_toy_bpe(tokenizer_training_lines(), 400); built once.
const Tokenizer& toy_tokenizer();

/// Writes a ranks file (`<base64> <rank>` lines).
void write_ranks(const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, TokenId>>& ranks);

/// Pronounceable lowercase word for index i; distinct i give distinct words.
std::string synthetic_word(std::size_t i);

struct SyntheticCorpusConfig {
  std::size_t num_utterances = 500;
  std::size_t vocabulary = 4000;
  std::size_t min_words = 4;
  std::size_t max_words = 14;
  double zipf_exponent = 1.05;
  std::uint64_t seed = 7;
  std::string id_prefix = "utt";
};

/// Utterances drawn from a Zipf law over synthetic_word(0..vocabulary).
std::vector<Utterance> synthetic_corpus(const SyntheticCorpusConfig& cfg);

/// The rendered texts of a corpus, as a JSONL file of {"id","text"}.
void write_corpus_jsonl(const std::filesystem::path& path, const std::vector<Utterance>& corpus);

}  // namespace biasforge::testing
