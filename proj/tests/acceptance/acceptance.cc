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

// Acceptance checks for the toolkit. Prints one PASS/FAIL line per check
// and exits nonzero if any check fails. Time limits apply where given.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "biasforge/align.h"
#include "biasforge/biasing.h"
#include "biasforge/loss.h"
#include "biasforge/metrics.h"
#include "biasforge/simulator.h"
#include "biasforge/text_norm.h"
#include "biasforge/tokenizer.h"
#include "biasforge/vocab.h"
#include "fixtures.h"
#include "oracles.h"
#include "pipeline.h"

using namespace biasforge;
using Words = std::vector<std::string>;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

// Records the first failure; later failures only bump the count.
class Checker {
 public:
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (failures_++ == 0) first_ = what;
  }
  Verdict verdict(std::string summary) const {
    if (failures_ == 0) return {true, std::move(summary)};
    return {false, std::to_string(failures_) + " failure(s), first: " + first_};
  }

 private:
  std::size_t failures_ = 0;
  std::string first_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Words random_words(std::mt19937_64& rng, std::size_t max_len, char last) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> letter('a', last);
  Words w(len(rng));
  for (auto& s : w) s = std::string(1, static_cast<char>(letter(rng)));
  return w;
}

Verdict alignment_optimality() {
  std::mt19937_64 rng(1);
  Checker c;
  for (int t = 0; t < 1000; ++t) {
    const Words ref = random_words(rng, 6, 'd');
    const Words hyp = random_words(rng, 6, 'd');
    const WordAlignment a = align_words(ref, hyp);
    const std::size_t oracle = testing::exhaustive_edit_distance(ref, hyp);
    c.expect(edit_counts(a).errors() == oracle, "pair " + std::to_string(t) + " cost mismatch");
    c.expect(a.ref_words() == ref && a.hyp_words() == hyp,
             "pair " + std::to_string(t) + " does not reconstruct");
  }
  return c.verdict("1000 pairs equal the exhaustive minimum");
}

Verdict metric_decomposition() {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution member(0.35);
  Checker c;
  for (int t = 0; t < 1000; ++t) {
    const WordAlignment a = align_words(random_words(rng, 15, 'j'), random_words(rng, 15, 'j'));
    BiasingList list;
    std::unordered_set<std::string> oov;
    for (char ch = 'a'; ch <= 'j'; ++ch) {
      if (!member(rng)) continue;
      list.words.emplace_back(1, ch);
      if (member(rng)) oov.insert(list.words.back());
    }
    const PartitionedCounts p = classify_errors(a, list, oov);
    const EditCounts e = edit_counts(a);
    const ErrorCounts sum = p.biased + p.unbiased;
    const std::string tag = "instance " + std::to_string(t);
    c.expect(sum.sub == e.substitutions && sum.del == e.deletions &&
                 sum.ins == e.insertions && sum.ref_count == e.ref_len,
             tag + ": biased + unbiased != totals");
    c.expect(p.oov.errors() <= p.biased.errors() && p.oov.ref_count <= p.biased.ref_count,
             tag + ": oov not within biased");

    const Rates r = rates_of(classify_errors(a, BiasingList{}, {}));
    c.expect(r.u_wer.has_value() == r.wer.has_value(), tag + ": empty-list presence differs");
    if (r.wer && r.u_wer) {
      c.expect(*r.u_wer == *r.wer, tag + ": empty-list U-WER != WER");
    }
  }
  return c.verdict("1000 instances decompose; empty-list U-WER == WER bitwise");
}

Verdict transcript_pairs() {
  struct Row {
    const char* ref;
    const char* baseline;
    Words list;
    std::string true_bias;
  };
  const std::vector<Row> rows = {
      {"foreign rule to the phanariote period", "foreign rule to the fanaret period",
       {"mcphillips", "phanariote", "lukyamuzi"}, "phanariote"},
      {"i feel pain in my ears with tinnitus", "i feel pain in my ears with cheetahs",
       {"kimbolton", "tinnitus", "polygynandy"}, "tinnitus"},
  };
  Checker c;
  std::vector<PartitionedCounts> baseline, corrected;
  for (const auto& row : rows) {
    const NormalizedText ref = normalize(row.ref);
    const NormalizedText hyp = normalize(row.baseline);
    const WordAlignment a = align_words(ref, hyp);
    const EditCounts e = edit_counts(a);
    c.expect(e.substitutions == 1 && e.deletions == 0 && e.insertions == 0,
             std::string("not one substitution: ") + row.ref);

    BiasingList list;
    list.utterance_id = row.true_bias;
    list.words = row.list;
    list.true_bias = {row.true_bias};
    validate_list(list, ref);

    const PartitionedCounts w = classify_errors(a, list, {});
    const PartitionedCounts k = classify_errors(align_words(ref, ref), list, {});
    c.expect(w.biased.rate() == 100.0, std::string("baseline R-WER != 100: ") + row.ref);
    c.expect(k.biased.rate() == 0.0, std::string("corrected R-WER != 0: ") + row.ref);
    c.expect(w.unbiased.rate() == 0.0, std::string("baseline U-WER != 0: ") + row.ref);
    baseline.push_back(w);
    corrected.push_back(k);
  }
  const EvalReport rw = aggregate(baseline);
  const EvalReport rk = aggregate(corrected);
  c.expect(rw.rates.r_wer == 100.0, "pooled baseline R-WER != 100");
  c.expect(rk.rates.r_wer == 0.0, "pooled corrected R-WER != 0");
  return c.verdict("1 substitution each; R-WER 100 -> 0");
}

Verdict loss_numerics() {
  std::mt19937_64 rng(4);
  Checker c;
  const double beta = kDefaultBeta;

  double worst_uniform = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t s = std::uniform_int_distribution<std::size_t>(1, 32)(rng);
    const std::size_t v = std::uniform_int_distribution<std::size_t>(2, 512)(rng);
    const double fill = std::uniform_real_distribution<double>(-50.0, 50.0)(rng);
    WeightedTarget target;
    std::uniform_int_distribution<TokenId> tok(0, static_cast<TokenId>(v - 1));
    for (std::size_t i = 0; i < s; ++i) target.token_ids.push_back(tok(rng));
    target.weights.assign(s, 1.0);
    target.weights[std::uniform_int_distribution<std::size_t>(0, s - 1)(rng)] = beta;
    const double expected = (static_cast<double>(s) - 1.0 + beta) * std::log(static_cast<double>(v));
    const double got = weighted_ce(LogitsMatrix(s, v, fill), target);
    worst_uniform = std::max(worst_uniform, std::abs(got - expected) / expected);
  }
  c.expect(worst_uniform <= 1e-12, fmt("uniform relative error %.3g", worst_uniform));

  // Central differences. Every entry is checked on its own row, where the
  // loss is w_i * CE(row_i); a sample of entries is also checked by
  // perturbing the full matrix.
  const double h = 1e-5;
  double worst_row = 0.0, worst_full = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t s = std::uniform_int_distribution<std::size_t>(1, 32)(rng);
    const std::size_t v = std::uniform_int_distribution<std::size_t>(2, 512)(rng);
    std::normal_distribution<double> z(0.0, 3.0);
    LogitsMatrix logits(s, v);
    for (double& x : logits.data()) x = z(rng);
    WeightedTarget target;
    std::uniform_int_distribution<TokenId> tok(0, static_cast<TokenId>(v - 1));
    std::bernoulli_distribution biased(0.25);
    for (std::size_t i = 0; i < s; ++i) {
      target.token_ids.push_back(tok(rng));
      target.weights.push_back(biased(rng) ? beta : 1.0);
    }
    const LogitsMatrix grad = weighted_ce_grad(logits, target);

    double gmax = 0.0;
    for (double g : grad.data()) gmax = std::max(gmax, std::abs(g));

    double err_row = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      LogitsMatrix row(1, v);
      std::copy(logits.row(i).begin(), logits.row(i).end(), row.row(0).begin());
      const WeightedTarget one{{target.token_ids[i]}, {target.weights[i]}, {}};
      for (std::size_t j = 0; j < v; ++j) {
        const double x = row(0, j);
        row(0, j) = x + h;
        const double up = weighted_ce_serial(row, one);
        row(0, j) = x - h;
        const double down = weighted_ce_serial(row, one);
        row(0, j) = x;
        err_row = std::max(err_row, std::abs((up - down) / (2 * h) - grad(i, j)));
      }
    }
    worst_row = std::max(worst_row, err_row / gmax);

    double err_full = 0.0;
    LogitsMatrix work = logits;
    std::uniform_int_distribution<std::size_t> ri(0, s - 1), rj(0, v - 1);
    for (int k = 0; k < 32; ++k) {
      const std::size_t i = ri(rng), j = k % 2 ? target.token_ids[i] : rj(rng);
      const double x = work(i, j);
      work(i, j) = x + h;
      const double up = weighted_ce(work, target);
      work(i, j) = x - h;
      const double down = weighted_ce(work, target);
      work(i, j) = x;
      err_full = std::max(err_full, std::abs((up - down) / (2 * h) - grad(i, j)));
    }
    worst_full = std::max(worst_full, err_full / gmax);
  }
  c.expect(worst_row <= 1e-5, fmt("row finite-difference relative error %.3g", worst_row));
  c.expect(worst_full <= 1e-5, fmt("full finite-difference relative error %.3g", worst_full));
  return c.verdict(fmt("uniform %.2g", worst_uniform) + fmt(", fd row %.2g", worst_row) +
                   fmt(", fd full %.2g", worst_full));
}

Verdict sampling_calibration() {
  TrainSamplingConfig cfg;
  cfg.seed = 2024;
  Words lex;
  for (std::size_t i = 0; i < 2000; ++i) lex.push_back(testing::synthetic_word(1000 + i));
  const GlobalBiasLexicon lexicon(lex);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> common(0, 199), rare(0, 1999), extra(0, 2);
  std::size_t empty = 0, non_empty = 0, included = 0;
  std::vector<std::size_t> histogram(cfg.l_max - cfg.l_min + 1, 0);
  Checker c;
  for (std::size_t u = 0; u < 10000; ++u) {
    NormalizedText ref;
    Words mined;
    for (int k = 0; k < 5; ++k) ref.words.push_back(testing::synthetic_word(common(rng)));
    for (std::size_t k = 0, n = 1 + extra(rng); k < n; ++k) {
      mined.push_back(lex[rare(rng)]);
      ref.words.push_back(mined.back());
    }
    char id[32];
    std::snprintf(id, sizeof id, "cal%05zu", u);
    const BiasingList list = build_train_list(id, ref, mined, lexicon, cfg);
    validate_list(list, ref);
    if (list.empty()) {
      ++empty;
      continue;
    }
    ++non_empty;
    included += !list.true_bias.empty();
    const std::size_t l = list.num_false_bias();
    if (l < cfg.l_min || l > cfg.l_max) {
      c.expect(false, "L out of range: " + std::to_string(l));
      continue;
    }
    ++histogram[l - cfg.l_min];
  }
  const double empty_rate = empty / 10000.0;
  const double inclusion = static_cast<double>(included) / static_cast<double>(non_empty);
  const double expected = static_cast<double>(non_empty) / static_cast<double>(histogram.size());
  double chi2 = 0.0;
  for (std::size_t n : histogram) chi2 += (n - expected) * (n - expected) / expected;
  const double critical =
      testing::chi_square_critical(static_cast<double>(histogram.size() - 1), 0.001);
  c.expect(std::abs(empty_rate - 0.2) <= 0.02, fmt("empty rate %.4f", empty_rate));
  c.expect(std::abs(inclusion - 0.7) <= 0.02, fmt("inclusion %.4f", inclusion));
  c.expect(chi2 <= critical, fmt("L chi-square %.2f", chi2) + fmt(" > %.2f", critical));
  return c.verdict(fmt("empty %.4f", empty_rate) + fmt(", inclusion %.4f", inclusion) +
                   fmt(", chi2 %.1f", chi2) + fmt(" <= %.1f", critical));
}

struct World {
  std::vector<Utterance> train;
  std::vector<Utterance> test;
  VocabStats stats;
  WordPool common_pool;
  WordPool rare_pool;
};

World make_world(std::size_t test_utterances) {
  World w;
  testing::SyntheticCorpusConfig cfg;
  cfg.num_utterances = 2000;
  cfg.seed = 7;
  w.train = testing::synthetic_corpus(cfg);
  cfg.num_utterances = test_utterances;
  cfg.seed = 8;
  cfg.id_prefix = "test";
  w.test = testing::synthetic_corpus(cfg);
  std::vector<NormalizedText> texts;
  for (const auto& u : w.train) texts.push_back(u.text);
  w.stats = build_stats(texts, kDefaultMassThreshold);
  Words common;
  for (const auto& word : w.stats.ranked_words()) {
    if (!w.stats.is_rare(word)) common.push_back(word);
  }
  w.common_pool = WordPool(common);
  w.rare_pool = WordPool(w.stats.rare_words());
  return w;
}

Verdict scenario_contracts() {
  const World w = make_world(500);
  Checker c;
  std::size_t true_bias_total = 0;
  for (std::size_t n : {35u, 70u, 150u}) {
    for (const auto& u : w.test) {
      const std::string tag = u.id + " n=" + std::to_string(n);
      const std::set<std::string> ref(u.text.words.begin(), u.text.words.end());
      std::set<std::string> rare_ref;
      for (const auto& word : ref) {
        if (w.stats.is_rare(word)) rare_ref.insert(word);
      }

      const BiasingList s1 = build_scenario1_list(u.id, u.text, w.stats, w.rare_pool, n, 11);
      validate_list(s1, u.text);
      c.expect(s1.words.size() == n, tag + ": scenario 1 size");
      for (const auto& word : rare_ref) {
        c.expect(s1.contains(word) && s1.is_true_bias(word),
                 tag + ": scenario 1 misses rare word " + word);
      }
      c.expect(s1.true_bias.size() == rare_ref.size(), tag + ": scenario 1 true-bias set");
      true_bias_total += s1.true_bias.size();

      const BiasingList s2 = build_scenario2_list(u.id, u.text, w.rare_pool, n, 11);
      validate_list(s2, u.text);
      c.expect(s2.words.size() == n, tag + ": scenario 2 size");
      c.expect(s2.true_bias.empty(), tag + ": scenario 2 has true-bias words");
      for (const auto& word : s2.words) {
        c.expect(!ref.contains(word), tag + ": scenario 2 intersects reference at " + word);
      }
    }
  }
  c.expect(true_bias_total > 0, "fixture has no rare reference words");
  return c.verdict("500 utterances x sizes {35, 70, 150}, " + std::to_string(true_bias_total) +
                   " true-bias slots");
}

Verdict vocabulary_rule() {
  Checker c;
  const std::map<std::string, std::uint64_t> cat = {{"the", 5}, {"cat", 3}, {"sat", 1}, {"mat", 1}};
  const VocabStats stats = stats_from_counts(WordCounts(cat.begin(), cat.end()), 0.9);
  const std::set<std::string> got(stats.common.begin(), stats.common.end());
  c.expect(got == testing::rational_common_set(cat, 9, 10), "fixture differs from brute force");
  c.expect(got == std::set<std::string>{"the", "cat", "sat"}, "fixture common set");

  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t types = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    std::map<std::string, std::uint64_t> counts;
    std::geometric_distribution<std::uint64_t> count(0.2);
    for (std::size_t k = 0; k < types; ++k) counts[testing::synthetic_word(k)] = 1 + count(rng);
    std::unordered_set<std::string> previous;
    for (int step = 1; step <= 20; ++step) {
      const double threshold = step / 20.0;
      const VocabStats s = stats_from_counts(WordCounts(counts.begin(), counts.end()), threshold);
      const std::set<std::string> common(s.common.begin(), s.common.end());
      const std::string tag = "corpus " + std::to_string(t) + " @" + fmt("%.2f", threshold);
      c.expect(common == testing::rational_common_set(counts, step, 20),
               tag + ": differs from brute force");
      for (const auto& word : previous) {
        c.expect(s.common.contains(word), tag + ": not monotone, lost " + word);
      }
      previous = s.common;
    }
  }
  return c.verdict("fixture {the, cat, sat}; 100 corpora x 20 thresholds monotone");
}

Verdict end_to_end_determinism() {
  testing::ScratchDir dir("acceptance-e2e");
  const testing::PipelineInputs in = testing::write_pipeline_inputs(dir.path(), 50);
  const auto reference = testing::run_pipeline(in, dir / "run-a", 1, 42);
  Checker c;
  const std::vector<std::pair<std::string, int>> runs = {
      {"run-b", 1}, {"run-c", 2}, {"run-d", 4}, {"run-e", 8}};
  for (const auto& [name, jobs] : runs) {
    const auto outputs = testing::run_pipeline(in, dir / name, jobs, 42);
    c.expect(outputs.size() == reference.size(), name + ": different output set");
    for (const auto& [file, bytes] : reference) {
      const auto it = outputs.find(file);
      c.expect(it != outputs.end() && it->second == bytes,
               file + " differs with --jobs " + std::to_string(jobs));
    }
  }
  std::size_t bytes = 0;
  for (const auto& [file, contents] : reference) bytes += contents.size();
  return c.verdict(std::to_string(reference.size()) + " outputs (" + std::to_string(bytes) +
                   " bytes) identical over 5 runs, --jobs 1/2/4/8");
}

Verdict sweep_trend() {
  const World w = make_world(1000);
  ErrorModel model;
  model.p_sub_common = 0.05;
  model.p_sub_rare = 0.4;
  model.p_del = 0.02;
  model.p_ins = 0.02;
  model.bias_effect = 0.5;
  model.distractor_slope = 0.002;
  model.confusion_pool = w.common_pool;
  model.seed = 3;
  const std::vector<std::size_t> sizes = {35, 70, 150};
  const auto points = sweep_list_size(w.test, w.stats, w.rare_pool, sizes,
                                      Scenario::kAllRareReferenceWords, model, 11);
  Checker c;
  std::string summary = "R-WER";
  std::optional<double> last;
  for (const auto& p : points) {
    const auto r = p.with_list.rates.r_wer;
    if (!r) {
      c.expect(false, "R-WER absent at n=" + std::to_string(p.list_size));
      continue;
    }
    summary += " " + std::to_string(p.list_size) + ":" + fmt("%.2f", *r);
    c.expect(!last || *r >= *last, "R-WER decreases at n=" + std::to_string(p.list_size));
    last = r;
  }
  const SweepPoint& at70 = points[1];
  const auto with = at70.with_list.rates.r_wer;
  const auto without = at70.without_list.rates.r_wer;
  c.expect(with && without && *with < *without, "n=70 list does not beat no list");
  if (without) summary += fmt(", no list %.2f", *without);
  return c.verdict(summary);
}

std::string random_line(std::mt19937_64& rng) {
  static const std::vector<std::string> atoms = {
      " ",  "  ", "\t", ".", ",", "'s", "!", "?", "-", "0", "42", "1999", "\xC3\xA9",
      "\xC3\xBC", "\xC3\xB1", "\xE4\xB8\xAD\xE6\x96\x87", "\xF0\x9F\x98\x80", "\xE2\x80\x99",
      "(", ")", "\"", "://", "@"};
  std::uniform_int_distribution<int> kind(0, 9);
  std::uniform_int_distribution<std::size_t> length(0, 40), word(0, 30000),
      atom(0, atoms.size() - 1);
  std::uniform_int_distribution<int> byte(1, 255);
  std::string line;
  if (kind(rng) == 0) {
    // Arbitrary bytes, not necessarily UTF-8.
    for (std::size_t k = length(rng) * 2; k > 0; --k) line.push_back(static_cast<char>(byte(rng)));
    return line;
  }
  for (std::size_t k = length(rng); k > 0; --k) {
    if (kind(rng) < 6) {
      std::string w = testing::synthetic_word(word(rng));
      if (kind(rng) == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
      if (!line.empty()) line += ' ';
      line += w;
    } else {
      line += atoms[atom(rng)];
    }
  }
  return line;
}

Verdict tokenizer_contract() {
  const Tokenizer& tok = testing::toy_tokenizer();
  std::mt19937_64 rng(10);
  Checker c;
  for (int i = 0; i < 10000; ++i) {
    const std::string line = random_line(rng);
    const auto ids = tok.encode(line);
    c.expect(tok.decode(ids) == line, "line " + std::to_string(i) + " does not round-trip");
  }

  const std::size_t budget = prompt_budget(PromptMode::kBaseline);
  c.expect(budget == 224, "baseline budget " + std::to_string(budget));
  std::uniform_int_distribution<std::size_t> count(0, 400), word(0, 50000);
  std::size_t truncated = 0;
  for (int t = 0; t < 2000; ++t) {
    Words words;
    for (std::size_t k = count(rng); k > 0; --k) words.push_back(testing::synthetic_word(word(rng)));
    BiasingList list;
    list.words = words;
    const std::string prompt = render_prompt(list);
    const std::string kept = truncate_prompt(tok, prompt, budget);
    const std::string tag = "prompt " + std::to_string(t);
    c.expect(tok.count_tokens(kept) <= budget, tag + " exceeds the budget");
    c.expect(prompt.compare(0, kept.size(), kept) == 0 &&
                 (kept.size() == prompt.size() || prompt[kept.size()] == ' ' || kept.empty()),
             tag + " is not a word prefix");
    if (kept.size() < prompt.size()) {
      ++truncated;
      const std::size_t next = prompt.find(' ', kept.size() + 1);
      const std::string longer = prompt.substr(0, next);
      c.expect(tok.count_tokens(longer) > budget, tag + " dropped a word that fits");
    }
  }
  c.expect(truncated > 0, "no prompt needed truncation");
  return c.verdict("10000 lines round-trip; 2000 prompts <= 224 tokens (" +
                   std::to_string(truncated) + " truncated)");
}

struct Criterion {
  const char* name;
  std::optional<double> limit_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"alignment-optimality", 10.0, alignment_optimality},
      {"metric-decomposition", 10.0, metric_decomposition},
      {"transcript-pairs", std::nullopt, transcript_pairs},
      {"weighted-ce-numerics", 30.0, loss_numerics},
      {"sampling-calibration", 60.0, sampling_calibration},
      {"scenario-contracts", std::nullopt, scenario_contracts},
      {"vocabulary-rule", std::nullopt, vocabulary_rule},
      {"end-to-end-determinism", std::nullopt, end_to_end_determinism},
      {"list-size-trend", 120.0, sweep_trend},
      {"tokenizer", std::nullopt, tokenizer_contract},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criterion.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criterion.limit_seconds && seconds >= *criterion.limit_seconds) {
      v.ok = false;
      v.detail += fmt("; over the %.0f s limit", *criterion.limit_seconds);
    }
    std::string timing = fmt("%.2f s", seconds);
    if (criterion.limit_seconds) timing += fmt(" / %.0f s", *criterion.limit_seconds);
    std::printf("%s %-24s [%s] %s\n", v.ok ? "PASS" : "FAIL", criterion.name, timing.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
    failed += !v.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
