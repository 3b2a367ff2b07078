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

#include "biasforge/manifest_io.h"

#include <iomanip>
#include <sstream>

namespace biasforge {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("record is not a JSON object", 0);
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'", 0);
  return *it;
}

std::string get_string(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string", 0);
  return v.get<std::string>();
}

std::optional<std::string> get_optional_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaError(std::string("field '") + key + "' must be a string", 0);
  return it->get<std::string>();
}

std::vector<std::string> get_words(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw SchemaError(std::string("field '") + key + "' must be an array", 0);
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw SchemaError(std::string("field '") + key + "' must hold strings", 0);
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::size_t get_count(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned()) {
    throw SchemaError(std::string("field '") + key + "' must be a non-negative integer", 0);
  }
  return v.get<std::size_t>();
}

Json counts_to_json(const ErrorCounts& c) {
  Json j;
  j["sub"] = c.sub;
  j["del"] = c.del;
  j["ins"] = c.ins;
  j["ref_count"] = c.ref_count;
  return j;
}

ErrorCounts counts_from_json(const Json& j) {
  return {get_count(j, "sub"), get_count(j, "del"), get_count(j, "ins"),
          get_count(j, "ref_count")};
}

Json rate_json(const std::optional<double>& r) { return r ? Json(*r) : Json(nullptr); }

std::optional<double> rate_from_json(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw SchemaError(std::string("rate '") + key + "' must be a number", 0);
  return v.get<double>();
}

}  // namespace

Json to_json(const UtteranceRecord& r) {
  Json j;
  j["id"] = r.id;
  j["text"] = r.text;
  if (r.audio_path) j["audio_path"] = *r.audio_path;
  return j;
}

void from_json(const Json& j, UtteranceRecord& r) {
  r.id = get_string(j, "id");
  r.text = get_string(j, "text");
  r.audio_path = get_optional_string(j, "audio_path");
}

Json to_json(const PairRecord& r) {
  Json j;
  j["id"] = r.id;
  j["ref"] = r.ref;
  j["hyp"] = r.hyp;
  return j;
}

void from_json(const Json& j, PairRecord& r) {
  r.id = get_string(j, "id");
  r.ref = get_string(j, "ref");
  r.hyp = get_string(j, "hyp");
}

Json to_json(const AlignmentRecord& r) {
  Json j;
  j["id"] = r.id;
  Json ops = Json::array();
  for (const auto& op : r.alignment.ops) {
    Json o;
    o["op"] = std::string(to_string(op.kind));
    if (op.ref) o["ref"] = *op.ref;
    if (op.hyp) o["hyp"] = *op.hyp;
    ops.push_back(std::move(o));
  }
  j["ops"] = std::move(ops);
  const EditCounts c = edit_counts(r.alignment);
  Json counts;
  counts["sub"] = c.substitutions;
  counts["del"] = c.deletions;
  counts["ins"] = c.insertions;
  counts["match"] = c.matches;
  counts["ref_len"] = c.ref_len;
  j["counts"] = std::move(counts);
  return j;
}

void from_json(const Json& j, AlignmentRecord& r) {
  r.id = get_string(j, "id");
  const Json& ops = field(j, "ops");
  if (!ops.is_array()) throw SchemaError("field 'ops' must be an array", 0);
  r.alignment.ops.clear();
  for (const auto& o : ops) {
    EditOp op;
    try {
      op.kind = edit_kind_from_string(get_string(o, "op"));
    } catch (const SchemaError&) {
      throw;
    } catch (const ParseError& e) {
      throw SchemaError(e.what(), 0);
    }
    op.ref = get_optional_string(o, "ref");
    op.hyp = get_optional_string(o, "hyp");
    const bool needs_ref = op.kind != EditKind::kInsert;
    const bool needs_hyp = op.kind != EditKind::kDelete;
    if (needs_ref != op.ref.has_value() || needs_hyp != op.hyp.has_value()) {
      throw SchemaError("op '" + std::string(to_string(op.kind)) +
                            "' has the wrong ref/hyp fields",
                        0);
    }
    if (op.kind == EditKind::kMatch && *op.ref != *op.hyp) {
      throw SchemaError("match op with differing words", 0);
    }
    if (op.kind == EditKind::kSubstitute && *op.ref == *op.hyp) {
      throw SchemaError("substitute op with identical words", 0);
    }
    r.alignment.ops.push_back(std::move(op));
  }
}

Json to_json(const MinedRecord& r) {
  Json j;
  j["id"] = r.id;
  j["words"] = r.words;
  return j;
}

void from_json(const Json& j, MinedRecord& r) {
  r.id = get_string(j, "id");
  r.words = get_words(j, "words");
}

Json to_json(const BiasingListRecord& r) {
  Json j;
  j["id"] = r.list.utterance_id;
  j["words"] = r.list.words;
  j["true_bias"] = r.list.true_bias;
  return j;
}

void from_json(const Json& j, BiasingListRecord& r) {
  r.list.utterance_id = get_string(j, "id");
  r.list.words = get_words(j, "words");
  r.list.true_bias = j.contains("true_bias") ? get_words(j, "true_bias")
                                              : std::vector<std::string>{};
}

Json to_json(const TrainManifestRecord& r) {
  Json j;
  j["id"] = r.id;
  j["prompt"] = r.prompt;
  j["target_text"] = r.target_text;
  j["target_tokens"] = r.target_tokens;
  j["weights"] = r.weights;
  j["true_bias_words"] = r.true_bias_words;
  j["reduction"] = r.reduction;
  return j;
}

void from_json(const Json& j, TrainManifestRecord& r) {
  r.id = get_string(j, "id");
  r.prompt = get_string(j, "prompt");
  r.target_text = get_string(j, "target_text");
  const Json& tokens = field(j, "target_tokens");
  const Json& weights = field(j, "weights");
  if (!tokens.is_array() || !weights.is_array()) {
    throw SchemaError("target_tokens and weights must be arrays", 0);
  }
  r.target_tokens.clear();
  for (const auto& t : tokens) {
    if (!t.is_number_unsigned()) throw SchemaError("target_tokens must hold token ids", 0);
    r.target_tokens.push_back(t.get<TokenId>());
  }
  r.weights.clear();
  for (const auto& w : weights) {
    if (!w.is_number()) throw SchemaError("weights must hold numbers", 0);
    r.weights.push_back(w.get<double>());
  }
  if (r.weights.size() != r.target_tokens.size()) {
    throw SchemaError("weights length differs from target_tokens length", 0);
  }
  r.true_bias_words = get_words(j, "true_bias_words");
  r.reduction = j.contains("reduction") ? get_string(j, "reduction") : "sum";
  if (r.reduction != "sum") throw SchemaError("unsupported reduction '" + r.reduction + "'", 0);
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot write " + path.string());
}

void JsonlWriter::write_line(const std::string& line) {
  out_ << line << '\n';
  if (!out_) throw IoError("error writing " + path_.string());
}

void JsonlWriter::close() {
  out_.close();
  if (out_.fail()) throw IoError("error closing " + path_.string());
}

Json report_to_json(const EvalReport& report) {
  Json j;
  j["num_utterances"] = report.num_utterances;
  j["averaging"] = "micro";
  Json rates;
  rates["wer"] = rate_json(report.rates.wer);
  rates["u_wer"] = rate_json(report.rates.u_wer);
  rates["r_wer"] = rate_json(report.rates.r_wer);
  rates["oov_wer"] = rate_json(report.rates.oov_wer);
  j["rates"] = std::move(rates);
  Json counts;
  counts["all"] = counts_to_json(report.counts.total());
  counts["unbiased"] = counts_to_json(report.counts.unbiased);
  counts["biased"] = counts_to_json(report.counts.biased);
  counts["oov"] = counts_to_json(report.counts.oov);
  j["counts"] = std::move(counts);
  return j;
}

EvalReport report_from_json(const Json& j) {
  EvalReport report;
  report.num_utterances = get_count(j, "num_utterances");
  const Json& rates = field(j, "rates");
  report.rates.wer = rate_from_json(rates, "wer");
  report.rates.u_wer = rate_from_json(rates, "u_wer");
  report.rates.r_wer = rate_from_json(rates, "r_wer");
  report.rates.oov_wer = rate_from_json(rates, "oov_wer");
  const Json& counts = field(j, "counts");
  report.counts.unbiased = counts_from_json(field(counts, "unbiased"));
  report.counts.biased = counts_from_json(field(counts, "biased"));
  report.counts.oov = counts_from_json(field(counts, "oov"));
  return report;
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << report_to_json(report).dump(2) << '\n';
  if (!out) throw IoError("error writing " + path.string());
}

EvalReport read_report(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return report_from_json(Json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON: " + e.what(), 0);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what(), 0);
  }
}

void write_per_utterance_tsv(const std::filesystem::path& path,
                             std::span<const std::string> ids,
                             std::span<const PartitionedCounts> counts) {
  if (ids.size() != counts.size()) throw ConfigError("ids and counts differ in length");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  auto rate = [](const std::optional<double>& r) {
    if (!r) return std::string("NA");
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << *r;
    return s.str();
  };
  out << "id\tref_words\terrors\tbiased_ref\tbiased_errors\toov_ref\toov_errors"
         "\twer\tu_wer\tr_wer\toov_wer\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& c = counts[i];
    const Rates r = rates_of(c);
    out << ids[i] << '\t' << c.total().ref_count << '\t' << c.total().errors() << '\t'
        << c.biased.ref_count << '\t' << c.biased.errors() << '\t' << c.oov.ref_count
        << '\t' << c.oov.errors() << '\t' << rate(r.wer) << '\t' << rate(r.u_wer) << '\t'
        << rate(r.r_wer) << '\t' << rate(r.oov_wer) << '\n';
  }
  if (!out) throw IoError("error writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace biasforge
