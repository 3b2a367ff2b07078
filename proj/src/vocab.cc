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

#include "biasforge/vocab.h"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "biasforge/error.h"
#include "biasforge/parallel.h"
#include "json.hpp"

namespace biasforge {

namespace {

std::vector<std::pair<std::string, std::uint64_t>> ranked_entries(const WordCounts& counts) {
  std::vector<std::pair<std::string, std::uint64_t>> entries(counts.begin(), counts.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first > b.first;  // equal counts: reverse byte order
  });
  return entries;
}

}  // namespace

std::vector<std::string> VocabStats::ranked_words() const {
  std::vector<std::string> out;
  out.reserve(counts.size());
  for (auto& [w, c] : ranked_entries(counts)) out.push_back(std::move(w));
  return out;
}

std::vector<std::string> VocabStats::rare_words() const {
  std::vector<std::string> out;
  for (auto& w : ranked_words()) {
    if (!common.contains(w)) out.push_back(std::move(w));
  }
  return out;
}

VocabStats stats_from_counts(WordCounts counts, double mass_threshold) {
  if (!(mass_threshold > 0.0 && mass_threshold <= 1.0)) {
    throw ConfigError("mass threshold must lie in (0, 1]");
  }
  if (counts.empty()) throw ConfigError("cannot build vocabulary from an empty corpus");

  VocabStats stats;
  stats.mass_threshold = mass_threshold;
  for (const auto& [w, c] : counts) stats.total += c;
  if (stats.total == 0) throw ConfigError("vocabulary has zero total count");

  // Relative slack so that a threshold written as a decimal (0.9) is met by
  // exactly 9 of 10 occurrences despite binary rounding.
  const long double target =
      static_cast<long double>(mass_threshold) * stats.total * (1.0L - 1e-12L);
  std::uint64_t cumulative = 0;
  for (const auto& [w, c] : ranked_entries(counts)) {
    if (static_cast<long double>(cumulative) >= target) break;
    stats.common.insert(w);
    cumulative += c;
  }
  stats.counts = std::move(counts);
  return stats;
}

VocabStats build_stats_serial(std::span<const NormalizedText> corpus,
                              double mass_threshold) {
  WordCounts counts;
  for (const auto& utt : corpus) {
    for (const auto& w : utt.words) ++counts[w];
  }
  return stats_from_counts(std::move(counts), mass_threshold);
}

VocabStats build_stats(std::span<const NormalizedText> corpus, double mass_threshold,
                       int jobs) {
  if (jobs <= 0) jobs = default_jobs();
  const std::size_t shards = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(jobs), corpus.size()));
  std::vector<WordCounts> partial(shards);
  parallel_for(shards, jobs, [&](std::size_t s) {
    const std::size_t begin = corpus.size() * s / shards;
    const std::size_t end = corpus.size() * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& w : corpus[i].words) ++partial[s][w];
    }
  });
  WordCounts merged = std::move(partial[0]);
  for (std::size_t s = 1; s < shards; ++s) {
    for (const auto& [w, c] : partial[s]) merged[w] += c;
  }
  return stats_from_counts(std::move(merged), mass_threshold);
}

void write_vocab(const std::filesystem::path& path, const VocabStats& stats) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vocabulary " + path.string());
  nlohmann::ordered_json header;
  header["format"] = "biasforge-vocab";
  header["mass_threshold"] = stats.mass_threshold;
  header["total"] = stats.total;
  header["vocabulary_size"] = stats.counts.size();
  header["common_size"] = stats.common.size();
  out << header.dump() << '\n';
  for (const auto& [w, c] : ranked_entries(stats.counts)) {
    out << w << '\t' << c << '\n';
  }
  if (!out) throw IoError("error writing vocabulary " + path.string());
}

VocabStats read_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("vocabulary file is empty", 1);

  double threshold = 0;
  std::uint64_t total = 0;
  std::size_t common_size = 0;
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.value("format", "") != "biasforge-vocab") {
      throw ParseError("vocabulary header has wrong format tag", 1);
    }
    threshold = header.at("mass_threshold").get<double>();
    total = header.at("total").get<std::uint64_t>();
    common_size = header.at("common_size").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("vocabulary header: ") + e.what(), 1);
  }

  WordCounts counts;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError("vocabulary: expected word<TAB>count", line_no);
    }
    std::uint64_t c = 0;
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, c);
    if (ec != std::errc() || ptr != last || first == last) {
      throw ParseError("vocabulary: invalid count", line_no);
    }
    if (!counts.emplace(line.substr(0, tab), c).second) {
      throw ParseError("vocabulary: duplicate word", line_no);
    }
  }
  VocabStats stats = stats_from_counts(std::move(counts), threshold);
  if (stats.total != total || stats.common.size() != common_size) {
    throw ParseError("vocabulary body disagrees with its header", 0);
  }
  return stats;
}

std::vector<std::string> mine_misrecognized_rare(const NormalizedText& ref,
                                                 const WordAlignment& alignment,
                                                 const VocabStats& stats) {
  if (alignment.ref_words() != ref.words) {
    throw ConfigError("alignment was not built from this reference");
  }
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& op : alignment.ops) {
    if (op.kind != EditKind::kSubstitute && op.kind != EditKind::kDelete) continue;
    if (stats.is_rare(*op.ref) && seen.insert(*op.ref).second) out.push_back(*op.ref);
  }
  return out;
}

WordPool::WordPool(std::vector<std::string> words) {
  words_.reserve(words.size());
  for (auto& w : words) {
    if (index_.insert(w).second) words_.push_back(std::move(w));
  }
}

GlobalBiasLexicon build_global_lexicon(std::span<const std::vector<std::string>> mined) {
  std::vector<std::string> all;
  for (const auto& list : mined) all.insert(all.end(), list.begin(), list.end());
  return GlobalBiasLexicon(std::move(all));
}

void write_lexicon(const std::filesystem::path& path, const GlobalBiasLexicon& lexicon) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write lexicon " + path.string());
  for (const auto& w : lexicon.words()) out << w << '\n';
  if (!out) throw IoError("error writing lexicon " + path.string());
}

GlobalBiasLexicon read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  std::vector<std::string> words;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.find_first_of(" \t") != std::string::npos) {
      throw ParseError("lexicon: entries must be single words", line_no);
    }
    words.push_back(std::move(line));
  }
  return GlobalBiasLexicon(std::move(words));
}

std::vector<std::string> oov_subset(std::span<const std::string> bias_words,
                                    const VocabStats& training_vocabulary) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& w : bias_words) {
    if (!training_vocabulary.in_vocabulary(w) && seen.insert(w).second) out.push_back(w);
  }
  return out;
}

std::vector<std::string> oov_subset(std::span<const std::string> bias_words,
                                    const std::unordered_set<std::string>& training_vocabulary) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& w : bias_words) {
    if (!training_vocabulary.contains(w) && seen.insert(w).second) out.push_back(w);
  }
  return out;
}

}  // namespace biasforge
