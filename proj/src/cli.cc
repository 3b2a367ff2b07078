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

#include "biasforge/cli.h"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "CLI11.hpp"
#include "biasforge/align.h"
#include "biasforge/biasing.h"
#include "biasforge/error.h"
#include "biasforge/loss.h"
#include "biasforge/manifest_io.h"
#include "biasforge/metrics.h"
#include "biasforge/parallel.h"
#include "biasforge/simulator.h"
#include "biasforge/text_norm.h"
#include "biasforge/tokenizer.h"
#include "biasforge/vocab.h"

namespace biasforge::cli {

namespace {

// Options every subcommand accepts.
struct Common {
  int jobs = 1;
  bool no_normalize = false;
  std::string normalizer;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--jobs", jobs, "Worker threads for per-utterance work")
        ->check(CLI::Range(1, 1024));
    auto* nn = app->add_flag("--no-normalize", no_normalize,
                             "Split on whitespace instead of normalizing");
    app->add_option("--normalizer", normalizer,
                    "External normalizer command (one line in, one line out)")
        ->excludes(nn);
    app->add_option("--seed", seed, "Random seed (falls back to BIASFORGE_SEED, then 0)");
  }

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("BIASFORGE_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used);
        if (used == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw ConfigError("BIASFORGE_SEED is not an unsigned integer: " + std::string(env));
    }
    return 0;
  }
};

std::vector<NormalizedText> normalize_texts(const std::vector<std::string>& texts,
                                            const Common& common) {
  if (!common.normalizer.empty()) return normalize_external(common.normalizer, texts);
  std::vector<NormalizedText> out(texts.size());
  parallel_for(texts.size(), common.jobs, [&](std::size_t i) {
    out[i] = common.no_normalize ? split_words(texts[i]) : normalize(texts[i]);
  });
  return out;
}

std::vector<UtteranceRecord> load_utterances(const std::string& path, const std::string& what) {
  auto records = read_jsonl<UtteranceRecord>(path);
  check_unique_ids(std::span<const UtteranceRecord>(records), what + " " + path);
  return records;
}

std::vector<Utterance> load_corpus(const std::string& path, const Common& common) {
  const auto records = load_utterances(path, "references");
  std::vector<std::string> texts;
  texts.reserve(records.size());
  for (const auto& r : records) texts.push_back(r.text);
  auto normalized = normalize_texts(texts, common);
  std::vector<Utterance> corpus(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    corpus[i] = {records[i].id, std::move(normalized[i])};
  }
  return corpus;
}

// Hypotheses aligned to the reference order; every reference id must have one.
std::vector<NormalizedText> load_hypotheses_for(const std::string& path,
                                                const std::vector<Utterance>& corpus,
                                                const Common& common) {
  const auto records = load_utterances(path, "hypotheses");
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < records.size(); ++i) by_id.emplace(records[i].id, i);
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const auto& u : corpus) {
    auto it = by_id.find(u.id);
    if (it == by_id.end()) throw ConfigError("no hypothesis for utterance " + u.id);
    texts.push_back(records[it->second].text);
  }
  return normalize_texts(texts, common);
}

// Lists in corpus order; missing ids get an empty list.
std::vector<BiasingList> load_lists_for(const std::optional<std::string>& path,
                                        const std::vector<Utterance>& corpus) {
  std::vector<BiasingList> lists(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) lists[i].utterance_id = corpus[i].id;
  if (!path) return lists;
  const auto records = read_jsonl<BiasingListRecord>(*path);
  check_unique_ids(std::span<const BiasingListRecord>(records), "biasing lists " + *path);
  std::unordered_map<std::string, const BiasingList*> by_id;
  for (const auto& r : records) by_id.emplace(r.list.utterance_id, &r.list);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (auto it = by_id.find(corpus[i].id); it != by_id.end()) lists[i] = *it->second;
  }
  return lists;
}

std::string format_rate(const std::optional<double>& r) {
  if (!r) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << *r;
  return s.str();
}

void print_rates(std::ostream& out, const EvalReport& report) {
  out << "utterances " << report.num_utterances << "  WER " << format_rate(report.rates.wer)
      << "  U-WER " << format_rate(report.rates.u_wer) << "  R-WER "
      << format_rate(report.rates.r_wer) << "  OOV-WER " << format_rate(report.rates.oov_wer)
      << '\n';
}

// ---------------------------------------------------------------- normalize

struct NormalizeCmd {
  Common common;
  std::string refs, out;
};

int do_normalize(const NormalizeCmd& c, std::ostream&) {
  const auto records = load_utterances(c.refs, "input");
  std::vector<std::string> texts;
  for (const auto& r : records) texts.push_back(r.text);
  const auto normalized = normalize_texts(texts, c.common);
  std::vector<UtteranceRecord> outputs;
  outputs.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    UtteranceRecord r = records[i];
    r.text = normalized[i].render();
    if (!c.common.no_normalize && c.common.normalizer.empty() &&
        normalize(r.text).words != normalized[i].words) {
      throw Error("normalization is not idempotent for " + r.id);
    }
    outputs.push_back(std::move(r));
  }
  write_jsonl(c.out, outputs);
  return 0;
}

// -------------------------------------------------------------- build-vocab

struct BuildVocabCmd {
  Common common;
  std::string refs, out;
  double threshold = kDefaultMassThreshold;
};

void validate_stats(const VocabStats& stats) {
  const auto ranked = stats.ranked_words();
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < stats.common.size(); ++i) {
    if (!stats.common.contains(ranked[i])) throw Error("common set is not a ranked prefix");
    if (i + 1 < stats.common.size()) cumulative += stats.counts.at(ranked[i]);
  }
  // Minimality: without its last member the prefix falls short.
  if (!stats.common.empty() &&
      static_cast<long double>(cumulative) >=
          static_cast<long double>(stats.mass_threshold) * stats.total * (1.0L - 1e-12L)) {
    throw Error("common set is not minimal");
  }
}

int do_build_vocab(const BuildVocabCmd& c, std::ostream& out) {
  const auto corpus = load_corpus(c.refs, c.common);
  std::vector<NormalizedText> texts;
  texts.reserve(corpus.size());
  for (const auto& u : corpus) texts.push_back(u.text);
  const VocabStats stats = build_stats(texts, c.threshold, c.common.jobs);
  validate_stats(stats);
  write_vocab(c.out, stats);
  out << "vocabulary " << stats.vocabulary_size() << " words, " << stats.total
      << " occurrences, " << stats.common.size() << " common\n";
  return 0;
}

// -------------------------------------------------------------------- align

struct AlignCmd {
  Common common;
  std::optional<std::string> refs, hyps, pairs;
  std::string out;
};

int do_align(const AlignCmd& c, std::ostream&) {
  std::vector<std::string> ids;
  std::vector<NormalizedText> refs, hyps;
  if (c.pairs) {
    const auto pairs = read_jsonl<PairRecord>(*c.pairs);
    check_unique_ids(std::span<const PairRecord>(pairs), "pairs " + *c.pairs);
    std::vector<std::string> ref_texts, hyp_texts;
    for (const auto& p : pairs) {
      ids.push_back(p.id);
      ref_texts.push_back(p.ref);
      hyp_texts.push_back(p.hyp);
    }
    refs = normalize_texts(ref_texts, c.common);
    hyps = normalize_texts(hyp_texts, c.common);
  } else {
    if (!c.refs || !c.hyps) throw ConfigError("align needs --pairs or both --refs and --hyps");
    const auto corpus = load_corpus(*c.refs, c.common);
    hyps = load_hypotheses_for(*c.hyps, corpus, c.common);
    for (const auto& u : corpus) {
      ids.push_back(u.id);
      refs.push_back(u.text);
    }
  }
  const auto alignments = align_corpus(refs, hyps, c.common.jobs);
  std::vector<AlignmentRecord> records(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (alignments[i].ref_words() != refs[i].words ||
        alignments[i].hyp_words() != hyps[i].words) {
      throw Error("alignment does not reconstruct its inputs for " + ids[i]);
    }
    records[i] = {ids[i], alignments[i]};
  }
  write_jsonl(c.out, records);
  return 0;
}

// ---------------------------------------------------------- mine-bias-words

struct MineCmd {
  Common common;
  std::optional<std::string> alignments, refs, hyps, mined;
  std::string vocab, out;
};

int do_mine(const MineCmd& c, std::ostream& out) {
  const VocabStats stats = read_vocab(c.vocab);
  std::vector<std::string> ids;
  std::vector<NormalizedText> refs;
  std::vector<WordAlignment> alignments;
  if (c.alignments) {
    auto records = read_jsonl<AlignmentRecord>(*c.alignments);
    check_unique_ids(std::span<const AlignmentRecord>(records), "alignments " + *c.alignments);
    for (auto& r : records) {
      ids.push_back(r.id);
      NormalizedText ref;
      ref.words = r.alignment.ref_words();
      refs.push_back(std::move(ref));
      alignments.push_back(std::move(r.alignment));
    }
  } else {
    if (!c.refs || !c.hyps) {
      throw ConfigError("mine-bias-words needs --alignments or both --refs and --hyps");
    }
    const auto corpus = load_corpus(*c.refs, c.common);
    const auto hyps = load_hypotheses_for(*c.hyps, corpus, c.common);
    for (const auto& u : corpus) {
      ids.push_back(u.id);
      refs.push_back(u.text);
    }
    alignments = align_corpus(refs, hyps, c.common.jobs);
  }

  std::vector<std::vector<std::string>> mined(ids.size());
  parallel_for(ids.size(), c.common.jobs, [&](std::size_t i) {
    mined[i] = mine_misrecognized_rare(refs[i], alignments[i], stats);
  });
  const GlobalBiasLexicon lexicon = build_global_lexicon(mined);
  for (const auto& w : lexicon.words()) {
    if (!stats.is_rare(w)) throw Error("mined word '" + w + "' is not rare");
  }
  write_lexicon(c.out, lexicon);
  if (c.mined) {
    std::vector<MinedRecord> records(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) records[i] = {ids[i], mined[i]};
    write_jsonl(*c.mined, records);
  }
  out << "lexicon " << lexicon.size() << " misrecognized rare words from " << ids.size()
      << " utterances\n";
  return 0;
}

// ------------------------------------------------------ make-train-manifest

struct TrainManifestCmd {
  Common common;
  std::string refs, mined, lexicon, tokenizer, out;
  std::optional<std::string> specials, vocab;
  TrainSamplingConfig sampling;
  double beta = kDefaultBeta;
  std::optional<std::size_t> budget;
  bool extended = false;
  std::size_t target_reserve = kDefaultTargetReserve;
};

int do_train_manifest(TrainManifestCmd c, std::ostream& out) {
  c.sampling.seed = c.common.resolved_seed();
  c.sampling.validate();
  if (!(c.beta >= 1.0)) throw ConfigError("--beta must be at least 1");
  const std::size_t budget =
      c.budget ? *c.budget
               : prompt_budget(c.extended ? PromptMode::kExtended : PromptMode::kBaseline,
                               c.target_reserve);
  if (budget == 0) throw ConfigError("--budget must be positive");

  const auto corpus = load_corpus(c.refs, c.common);
  const GlobalBiasLexicon lexicon = read_lexicon(c.lexicon);
  const Tokenizer tok = Tokenizer::load(
      c.tokenizer,
      c.specials ? std::optional<std::filesystem::path>(*c.specials) : std::nullopt);
  std::optional<VocabStats> stats;
  if (c.vocab) stats = read_vocab(*c.vocab);

  const auto mined_records = read_jsonl<MinedRecord>(c.mined);
  check_unique_ids(std::span<const MinedRecord>(mined_records), "mined " + c.mined);
  std::unordered_map<std::string, const std::vector<std::string>*> mined_by_id;
  for (const auto& r : mined_records) mined_by_id.emplace(r.id, &r.words);
  const std::vector<std::string> none;

  std::vector<TrainManifestRecord> records(corpus.size());
  parallel_for(corpus.size(), c.common.jobs, [&](std::size_t i) {
    const Utterance& u = corpus[i];
    auto it = mined_by_id.find(u.id);
    const auto& mined = it == mined_by_id.end() ? none : *it->second;
    const BiasingList list = build_train_list(u.id, u.text, mined, lexicon, c.sampling);
    validate_list(list, u.text);

    TrainManifestRecord& r = records[i];
    r.id = u.id;
    r.prompt = list.empty() ? std::string() : truncate_prompt(tok, render_prompt(list), budget);
    const NormalizedText kept = split_words(r.prompt);
    const std::unordered_set<std::string> kept_set(kept.words.begin(), kept.words.end());
    std::unordered_set<std::string> true_bias;
    for (const auto& w : list.true_bias) {
      if (kept_set.contains(w)) {
        r.true_bias_words.push_back(w);
        true_bias.insert(w);
      }
    }
    r.target_text = u.text.render();
    const WeightedTarget target = make_weighted_target(tok, u.text, true_bias, c.beta);
    r.target_tokens = target.token_ids;
    r.weights = target.weights;

    if (tok.count_tokens(r.prompt) > budget) throw Error("prompt over budget for " + u.id);
    if (r.weights.size() != r.target_tokens.size()) throw Error("weight length mismatch");
    if (stats) {
      for (const auto& w : kept.words) {
        if (!stats->is_rare(w)) throw Error("prompt word '" + w + "' is not rare for " + u.id);
      }
    }
  });
  write_jsonl(c.out, records);

  std::size_t empty = 0, with_true = 0;
  for (const auto& r : records) {
    empty += r.prompt.empty() ? 1 : 0;
    with_true += r.true_bias_words.empty() ? 0 : 1;
  }
  out << "manifest " << records.size() << " examples, " << empty << " without prompt, "
      << with_true << " with a true-bias word, prompt budget " << budget << " tokens\n";
  return 0;
}

// ---------------------------------------------------------- make-test-lists

struct TestListsCmd {
  Common common;
  std::string refs, vocab, out;
  std::optional<std::string> lexicon;
  int scenario = 1;
  std::size_t n = 70;
};

int do_test_lists(const TestListsCmd& c, std::ostream& out) {
  const std::uint64_t seed = c.common.resolved_seed();
  const auto corpus = load_corpus(c.refs, c.common);
  const VocabStats stats = read_vocab(c.vocab);
  const WordPool pool = c.lexicon ? read_lexicon(*c.lexicon) : WordPool(stats.rare_words());

  std::vector<BiasingListRecord> records(corpus.size());
  parallel_for(corpus.size(), c.common.jobs, [&](std::size_t i) {
    const Utterance& u = corpus[i];
    BiasingList list = c.scenario == 1
                           ? build_scenario1_list(u.id, u.text, stats, pool, c.n, seed)
                           : build_scenario2_list(u.id, u.text, pool, c.n, seed);
    validate_list(list, u.text);
    if (list.words.size() != c.n) throw Error("list size differs from --n for " + u.id);
    if (c.scenario == 1) {
      for (const auto& w : u.text.words) {
        if (stats.is_rare(w) && !list.is_true_bias(w)) {
          throw Error("rare reference word '" + w + "' missing from list of " + u.id);
        }
      }
    } else if (!list.true_bias.empty()) {
      throw Error("second-scenario list has true-bias words for " + u.id);
    }
    records[i].list = std::move(list);
  });
  write_jsonl(c.out, records);
  out << "lists " << records.size() << " (scenario " << c.scenario << ", n=" << c.n << ")\n";
  return 0;
}

// ----------------------------------------------------------------- simulate

struct SimulateCmd {
  Common common;
  std::string refs, vocab, out;
  std::optional<std::string> lists, confusion;
  ErrorModel model;
};

int do_simulate(SimulateCmd c, std::ostream&) {
  c.model.seed = c.common.resolved_seed();
  const auto corpus = load_corpus(c.refs, c.common);
  const VocabStats stats = read_vocab(c.vocab);
  if (c.confusion) {
    c.model.confusion_pool = read_lexicon(*c.confusion);
  } else {
    std::vector<std::string> common_words;
    for (const auto& w : stats.ranked_words()) {
      if (!stats.is_rare(w)) common_words.push_back(w);
    }
    c.model.confusion_pool = WordPool(std::move(common_words));
  }
  c.model.validate();
  std::vector<BiasingList> lists;
  if (c.lists) lists = load_lists_for(c.lists, corpus);
  const auto hyps = simulate_corpus(corpus, stats, lists, c.model, c.common.jobs);

  std::vector<UtteranceRecord> records(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& w : hyps[i].words) {
      if (w.empty() || w.find_first_of(" \t\n") != std::string::npos) {
        throw Error("simulated hypothesis has a malformed word for " + corpus[i].id);
      }
    }
    records[i] = {corpus[i].id, hyps[i].render(), std::nullopt};
  }
  write_jsonl(c.out, records);
  return 0;
}

// ----------------------------------------------------------------- evaluate

struct EvaluateCmd {
  Common common;
  std::string refs, hyps, out;
  std::optional<std::string> lists, vocab, per_utt;
};

int do_evaluate(const EvaluateCmd& c, std::ostream& out) {
  const auto corpus = load_corpus(c.refs, c.common);
  const auto hyps = load_hypotheses_for(c.hyps, corpus, c.common);
  const auto lists = load_lists_for(c.lists, corpus);
  std::optional<VocabStats> stats;
  if (c.vocab) stats = read_vocab(*c.vocab);

  std::vector<NormalizedText> refs;
  refs.reserve(corpus.size());
  for (const auto& u : corpus) refs.push_back(u.text);
  const auto alignments = align_corpus(refs, hyps, c.common.jobs);
  std::vector<std::unordered_set<std::string>> oov(corpus.size());
  if (stats) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto absent = oov_subset(lists[i].words, *stats);
      oov[i].insert(absent.begin(), absent.end());
    }
  }
  const auto per_utt = classify_corpus(alignments, lists, oov, c.common.jobs);
  for (std::size_t i = 0; i < per_utt.size(); ++i) {
    if (per_utt[i].total() != [&] {
          const EditCounts e = edit_counts(alignments[i]);
          return ErrorCounts{e.substitutions, e.deletions, e.insertions, e.ref_len};
        }()) {
      throw Error("partitioned counts do not add up for " + corpus[i].id);
    }
  }
  const EvalReport report = aggregate(per_utt);
  write_report(c.out, report);
  if (c.per_utt) {
    std::vector<std::string> ids;
    for (const auto& u : corpus) ids.push_back(u.id);
    write_per_utterance_tsv(*c.per_utt, ids, per_utt);
  }
  print_rates(out, report);
  return 0;
}

// ------------------------------------------------------------------- report

struct ReportCmd {
  std::vector<std::string> entries;
  std::optional<std::string> out;
};

std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::ostringstream s;
  auto cell = [&](const std::string& text, int width) {
    s << std::left << std::setw(width) << text;
  };
  std::size_t name_width = 6;
  for (const auto& [name, r] : rows) name_width = std::max(name_width, name.size());
  const int nw = static_cast<int>(name_width) + 2;
  cell("System", nw);
  for (const char* h : {"WER", "U-WER", "R-WER", "OOV-WER", "R-WERR", "OOV-WERR"}) cell(h, 10);
  s << '\n';
  const Rates& base = rows.front().second.rates;
  auto relative = [](const std::optional<double>& b, const std::optional<double>& x) {
    if (!b || !x || *b <= 0.0) return std::string("-");
    return format_rate(relative_improvement(*b, *x));
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rates& r = rows[i].second.rates;
    cell(rows[i].first, nw);
    cell(format_rate(r.wer), 10);
    cell(format_rate(r.u_wer), 10);
    cell(format_rate(r.r_wer), 10);
    cell(format_rate(r.oov_wer), 10);
    cell(i == 0 ? "-" : relative(base.r_wer, r.r_wer), 10);
    cell(i == 0 ? "-" : relative(base.oov_wer, r.oov_wer), 10);
    s << '\n';
  }
  return s.str();
}

int do_report(const ReportCmd& c, std::ostream& out) {
  std::vector<std::pair<std::string, EvalReport>> rows;
  for (const auto& entry : c.entries) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size()) {
      throw ConfigError("--entry expects NAME=REPORT.json, got '" + entry + "'");
    }
    rows.emplace_back(entry.substr(0, eq), read_report(entry.substr(eq + 1)));
  }
  const std::string table = render_table(rows);
  out << table;
  if (c.out) {
    std::ofstream f(*c.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + *c.out);
    f << table;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"biasforge: contextual-biasing data preparation and evaluation"};
  app.require_subcommand(1);

  NormalizeCmd norm;
  auto* s_norm = app.add_subcommand("normalize", "Normalize transcripts in a JSONL file");
  norm.common.attach(s_norm);
  s_norm->add_option("--refs", norm.refs, "Input utterances JSONL")->required();
  s_norm->add_option("--out", norm.out, "Output JSONL")->required();

  BuildVocabCmd vocab;
  auto* s_vocab = app.add_subcommand("build-vocab", "Word counts and the common/rare split");
  vocab.common.attach(s_vocab);
  s_vocab->add_option("--refs", vocab.refs, "Training references JSONL")->required();
  s_vocab->add_option("--out", vocab.out, "Vocabulary TSV")->required();
  s_vocab->add_option("--threshold", vocab.threshold, "Cumulative mass of the common set")
      ->check(CLI::Range(0.0, 1.0));

  AlignCmd align;
  auto* s_align = app.add_subcommand("align", "Word alignments of reference/hypothesis pairs");
  align.common.attach(s_align);
  auto* a_pairs = s_align->add_option("--pairs", align.pairs, "JSONL of {id, ref, hyp}");
  s_align->add_option("--refs", align.refs, "References JSONL")->excludes(a_pairs);
  s_align->add_option("--hyps", align.hyps, "Hypotheses JSONL")->excludes(a_pairs);
  s_align->add_option("--out", align.out, "Alignments JSONL")->required();

  MineCmd mine;
  auto* s_mine = app.add_subcommand("mine-bias-words", "Collect misrecognized rare words");
  mine.common.attach(s_mine);
  auto* m_al = s_mine->add_option("--alignments", mine.alignments, "Alignments JSONL");
  s_mine->add_option("--refs", mine.refs, "References JSONL")->excludes(m_al);
  s_mine->add_option("--hyps", mine.hyps, "Baseline hypotheses JSONL")->excludes(m_al);
  s_mine->add_option("--vocab", mine.vocab, "Vocabulary TSV")->required();
  s_mine->add_option("--out", mine.out, "Lexicon file (one word per line)")->required();
  s_mine->add_option("--mined", mine.mined, "Per-utterance mined words JSONL");

  TrainManifestCmd train;
  auto* s_train = app.add_subcommand("make-train-manifest", "Prompts, targets and loss weights");
  train.common.attach(s_train);
  s_train->add_option("--refs", train.refs, "Training references JSONL")->required();
  s_train->add_option("--mined", train.mined, "Per-utterance mined words JSONL")->required();
  s_train->add_option("--lexicon", train.lexicon, "Global bias lexicon")->required();
  s_train->add_option("--tokenizer", train.tokenizer, "BPE ranks file")->required();
  s_train->add_option("--specials", train.specials, "Special tokens JSON");
  s_train->add_option("--vocab", train.vocab, "Vocabulary TSV (checks prompt words are rare)");
  s_train->add_option("--p-neg", train.sampling.p_neg, "True-bias drop probability")
      ->check(CLI::Range(0.0, 1.0));
  s_train->add_option("--p-empty", train.sampling.p_empty, "Empty-list probability")
      ->check(CLI::Range(0.0, 1.0));
  s_train->add_option("--l-min", train.sampling.l_min, "Minimum false-bias count");
  s_train->add_option("--l-max", train.sampling.l_max, "Maximum false-bias count");
  s_train->add_option("--beta", train.beta, "Loss weight of true-bias tokens");
  auto* t_budget = s_train->add_option("--budget", train.budget, "Prompt token budget");
  s_train->add_flag("--extended", train.extended,
                    "Use the extended position budget instead of 224")
      ->excludes(t_budget);
  s_train->add_option("--target-reserve", train.target_reserve,
                      "Positions reserved for the target in extended mode");
  s_train->add_option("--out", train.out, "Training manifest JSONL")->required();

  TestListsCmd lists;
  auto* s_lists = app.add_subcommand("make-test-lists", "Test-time biasing lists");
  lists.common.attach(s_lists);
  s_lists->add_option("--refs", lists.refs, "Test references JSONL")->required();
  s_lists->add_option("--vocab", lists.vocab, "Training vocabulary TSV")->required();
  s_lists->add_option("--lexicon", lists.lexicon,
                      "Pool of false-bias words (default: rare training words)");
  s_lists->add_option("--scenario", lists.scenario, "1: rare reference words + fill, 2: distractors only")
      ->check(CLI::IsMember({1, 2}));
  s_lists->add_option("--n", lists.n, "Total list size");
  s_lists->add_option("--out", lists.out, "Biasing lists JSONL")->required();

  SimulateCmd sim;
  sim.model.p_sub_common = 0.05;
  sim.model.p_sub_rare = 0.4;
  sim.model.p_del = 0.02;
  sim.model.p_ins = 0.02;
  sim.model.bias_effect = 0.5;
  auto* s_sim = app.add_subcommand("simulate", "Synthetic noisy hypotheses");
  sim.common.attach(s_sim);
  s_sim->add_option("--refs", sim.refs, "References JSONL")->required();
  s_sim->add_option("--vocab", sim.vocab, "Training vocabulary TSV")->required();
  s_sim->add_option("--lists", sim.lists, "Biasing lists JSONL (omit for no biasing)");
  s_sim->add_option("--confusion", sim.confusion, "Substitution word pool (default: common words)");
  s_sim->add_option("--p-sub-common", sim.model.p_sub_common, "Common-word substitution probability");
  s_sim->add_option("--p-sub-rare", sim.model.p_sub_rare, "Rare-word substitution probability");
  s_sim->add_option("--p-del", sim.model.p_del, "Deletion probability");
  s_sim->add_option("--p-ins", sim.model.p_ins, "Insertion probability");
  s_sim->add_option("--bias-effect", sim.model.bias_effect, "Multiplier for listed rare words");
  s_sim->add_option("--distractor-slope", sim.model.distractor_slope,
                    "Extra rare-word substitution probability per false-bias word");
  s_sim->add_option("--out", sim.out, "Hypotheses JSONL")->required();

  EvaluateCmd eval;
  auto* s_eval = app.add_subcommand("evaluate", "WER, U-WER, R-WER and OOV-WER");
  eval.common.attach(s_eval);
  s_eval->add_option("--refs", eval.refs, "References JSONL")->required();
  s_eval->add_option("--hyps", eval.hyps, "Hypotheses JSONL")->required();
  s_eval->add_option("--lists", eval.lists, "Biasing lists JSONL");
  s_eval->add_option("--vocab", eval.vocab, "Training vocabulary TSV (enables OOV-WER)");
  s_eval->add_option("--out", eval.out, "Report JSON")->required();
  s_eval->add_option("--per-utt", eval.per_utt, "Per-utterance TSV");

  ReportCmd report;
  auto* s_report = app.add_subcommand("report", "Compare evaluation reports");
  s_report->add_option("--entry", report.entries, "NAME=REPORT.json; the first is the baseline")
      ->required();
  s_report->add_option("--out", report.out, "Also write the table here");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (s_norm->parsed()) return do_normalize(norm, out);
    if (s_vocab->parsed()) return do_build_vocab(vocab, out);
    if (s_align->parsed()) return do_align(align, out);
    if (s_mine->parsed()) return do_mine(mine, out);
    if (s_train->parsed()) return do_train_manifest(train, out);
    if (s_lists->parsed()) return do_test_lists(lists, out);
    if (s_sim->parsed()) return do_simulate(sim, out);
    if (s_eval->parsed()) return do_evaluate(eval, out);
    if (s_report->parsed()) return do_report(report, out);
  } catch (const std::exception& e) {
    err << "biasforge: error: " << e.what() << '\n';
    return 1;
  }
  err << "biasforge: no subcommand\n";
  return 2;
}

}  // namespace biasforge::cli
