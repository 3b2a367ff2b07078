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

// JSONL record schemas shared by the CLI subcommands. Every record is one
// compact JSON object per line with a fixed field order, so identical
// records always serialize to identical bytes.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "biasforge/align.h"
#include "biasforge/biasing.h"
#include "biasforge/error.h"
#include "biasforge/metrics.h"
#include "biasforge/tokenizer.h"
#include "json.hpp"

namespace biasforge {

using Json = nlohmann::ordered_json;

/// Raised for a well-formed JSON line that does not match its schema.
class SchemaError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// {"id", "text", "audio_path"?}. Used for references and hypotheses.
struct UtteranceRecord {
  std::string id;
  std::string text;
  std::optional<std::string> audio_path;
  friend bool operator==(const UtteranceRecord&, const UtteranceRecord&) = default;
};

/// {"id", "ref", "hyp"}: input of `align --pairs`.
struct PairRecord {
  std::string id;
  std::string ref;
  std::string hyp;
  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

/// {"id", "ops": [{"op", "ref"?, "hyp"?}], "counts": {...}}
struct AlignmentRecord {
  std::string id;
  WordAlignment alignment;
  friend bool operator==(const AlignmentRecord&, const AlignmentRecord&) = default;
};

/// {"id", "words"}: misrecognized rare words of one utterance.
struct MinedRecord {
  std::string id;
  std::vector<std::string> words;
  friend bool operator==(const MinedRecord&, const MinedRecord&) = default;
};

/// {"id", "words", "true_bias"}
struct BiasingListRecord {
  BiasingList list;
  friend bool operator==(const BiasingListRecord&, const BiasingListRecord&) = default;
};

/// Training example handed to the fine-tuning harness. Loss reduction is
/// always a sum over target tokens.
struct TrainManifestRecord {
  std::string id;
  std::string prompt;
  std::string target_text;
  std::vector<TokenId> target_tokens;
  std::vector<double> weights;
  std::vector<std::string> true_bias_words;
  std::string reduction = "sum";
  friend bool operator==(const TrainManifestRecord&, const TrainManifestRecord&) = default;
};

Json to_json(const UtteranceRecord& r);
Json to_json(const PairRecord& r);
Json to_json(const AlignmentRecord& r);
Json to_json(const MinedRecord& r);
Json to_json(const BiasingListRecord& r);
Json to_json(const TrainManifestRecord& r);

// Each throws SchemaError (line 0) when `j` does not match the schema.
void from_json(const Json& j, UtteranceRecord& r);
void from_json(const Json& j, PairRecord& r);
void from_json(const Json& j, AlignmentRecord& r);
void from_json(const Json& j, MinedRecord& r);
void from_json(const Json& j, BiasingListRecord& r);
void from_json(const Json& j, TrainManifestRecord& r);

/// Streaming line reader. Blank lines are skipped; errors carry the line
/// number.
template <typename Record>
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path.string());
  }

  /// Reads the next record; false at end of file.
  bool next(Record& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path_.string() + ": malformed JSON: " + e.what(), line_no_);
      }
      try {
        from_json(j, out);
      } catch (const SchemaError& e) {
        throw SchemaError(path_.string() + ": " + e.what(), line_no_);
      }
      return true;
    }
    if (in_.bad()) throw IoError("error reading " + path_.string());
    return false;
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

template <typename Record>
std::vector<Record> read_jsonl(const std::filesystem::path& path) {
  JsonlReader<Record> reader(path);
  std::vector<Record> out;
  Record r;
  while (reader.next(r)) out.push_back(std::move(r));
  return out;
}

/// Streaming writer; one compact object per line, LF endings.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);
  template <typename Record>
  void write(const Record& r) {
    write_line(to_json(r).dump());
  }
  void close();

 private:
  void write_line(const std::string& line);
  std::filesystem::path path_;
  std::ofstream out_;
};

template <typename Record>
void write_jsonl(const std::filesystem::path& path, std::span<const Record> records) {
  JsonlWriter writer(path);
  for (const auto& r : records) writer.write(r);
  writer.close();
}

template <typename Record>
void write_jsonl(const std::filesystem::path& path, const std::vector<Record>& records) {
  write_jsonl(path, std::span<const Record>(records));
}

inline const std::string& record_id(const BiasingListRecord& r) { return r.list.utterance_id; }
template <typename Record>
const std::string& record_id(const Record& r) {
  return r.id;
}

/// Throws SchemaError naming the first duplicated id.
template <typename Record>
void check_unique_ids(std::span<const Record> records, const std::string& what) {
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(record_id(r)).second) {
      throw SchemaError(what + ": duplicate id '" + record_id(r) + "'", 0);
    }
  }
}

/// Evaluation report: rates (null when absent) and pooled counts.
Json report_to_json(const EvalReport& report);
EvalReport report_from_json(const Json& j);
void write_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report(const std::filesystem::path& path);

/// Tab-separated per-utterance counts and rates with a header row.
void write_per_utterance_tsv(const std::filesystem::path& path,
                             std::span<const std::string> ids,
                             std::span<const PartitionedCounts> counts);

/// Whole file as bytes.
std::string read_file(const std::filesystem::path& path);

}  // namespace biasforge
