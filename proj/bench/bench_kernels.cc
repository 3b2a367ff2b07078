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

// Serial reference vs OpenMP kernel, per stage. Args are {jobs}; jobs 0
// means the serial reference.

#include <benchmark/benchmark.h>

#include <random>
#include <unordered_set>

#include "biasforge/align.h"
#include "biasforge/biasing.h"
#include "biasforge/loss.h"
#include "biasforge/metrics.h"
#include "biasforge/simulator.h"
#include "biasforge/vocab.h"
#include "fixtures.h"

namespace {

using namespace biasforge;

struct Data {
  std::vector<Utterance> corpus;
  std::vector<NormalizedText> refs;
  std::vector<NormalizedText> hyps;
  VocabStats stats;
  std::vector<BiasingList> lists;
  std::vector<WordAlignment> alignments;
  std::vector<std::unordered_set<std::string>> oov;
  ErrorModel model;
};

const Data& data() {
  static const Data d = [] {
    Data d;
    testing::SyntheticCorpusConfig cfg;
    cfg.num_utterances = 4000;
    cfg.vocabulary = 20000;
    d.corpus = testing::synthetic_corpus(cfg);
    for (const auto& u : d.corpus) d.refs.push_back(u.text);
    d.stats = build_stats_serial(d.refs, kDefaultMassThreshold);
    std::vector<std::string> common;
    for (const auto& w : d.stats.ranked_words()) {
      if (!d.stats.is_rare(w)) common.push_back(w);
    }
    const WordPool rare(d.stats.rare_words());
    for (const auto& u : d.corpus) {
      d.lists.push_back(build_scenario1_list(u.id, u.text, d.stats, rare, 70, 1));
    }
    d.model.p_sub_common = 0.05;
    d.model.p_sub_rare = 0.4;
    d.model.p_del = 0.02;
    d.model.p_ins = 0.02;
    d.model.bias_effect = 0.5;
    d.model.confusion_pool = WordPool(common);
    d.model.seed = 3;
    d.hyps = simulate_corpus_serial(d.corpus, d.stats, d.lists, d.model);
    d.alignments = align_corpus_serial(d.refs, d.hyps);
    d.oov.resize(d.corpus.size());
    return d;
  }();
  return d;
}

struct LossData {
  LogitsMatrix logits{448, 4096};
  WeightedTarget target;
};

const LossData& loss_data() {
  static const LossData d = [] {
    LossData d;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> z(0.0, 2.0);
    for (double& x : d.logits.data()) x = z(rng);
    std::uniform_int_distribution<TokenId> tok(0, 4095);
    for (std::size_t i = 0; i < d.logits.rows(); ++i) {
      d.target.token_ids.push_back(tok(rng));
      d.target.weights.push_back(i % 7 == 0 ? kDefaultBeta : 1.0);
    }
    return d;
  }();
  return d;
}

void BM_align_corpus(benchmark::State& state) {
  const Data& d = data();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = jobs == 0 ? align_corpus_serial(d.refs, d.hyps) : align_corpus(d.refs, d.hyps, jobs);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.refs.size()));
}

void BM_build_stats(benchmark::State& state) {
  const Data& d = data();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = jobs == 0 ? build_stats_serial(d.refs, kDefaultMassThreshold)
                       : build_stats(d.refs, kDefaultMassThreshold, jobs);
    benchmark::DoNotOptimize(s.total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.refs.size()));
}

void BM_classify_corpus(benchmark::State& state) {
  const Data& d = data();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = jobs == 0 ? classify_corpus_serial(d.alignments, d.lists, d.oov)
                         : classify_corpus(d.alignments, d.lists, d.oov, jobs);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.refs.size()));
}

void BM_simulate_corpus(benchmark::State& state) {
  const Data& d = data();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = jobs == 0 ? simulate_corpus_serial(d.corpus, d.stats, d.lists, d.model)
                         : simulate_corpus(d.corpus, d.stats, d.lists, d.model, jobs);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.refs.size()));
}

void BM_weighted_ce(benchmark::State& state) {
  const LossData& d = loss_data();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double loss = jobs == 0 ? weighted_ce_serial(d.logits, d.target)
                            : weighted_ce(d.logits, d.target, jobs);
    benchmark::DoNotOptimize(loss);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.logits.rows()));
}

void BM_weighted_ce_grad(benchmark::State& state) {
  const LossData& d = loss_data();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto g = jobs == 0 ? weighted_ce_grad_serial(d.logits, d.target)
                       : weighted_ce_grad(d.logits, d.target, jobs);
    benchmark::DoNotOptimize(g.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.logits.rows()));
}

void jobs_args(benchmark::internal::Benchmark* b) {
  b->ArgName("jobs")->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
}

BENCHMARK(BM_align_corpus)->Apply(jobs_args);
BENCHMARK(BM_build_stats)->Apply(jobs_args);
BENCHMARK(BM_classify_corpus)->Apply(jobs_args);
BENCHMARK(BM_simulate_corpus)->Apply(jobs_args);
BENCHMARK(BM_weighted_ce)->Apply(jobs_args);
BENCHMARK(BM_weighted_ce_grad)->Apply(jobs_args);

}  // namespace

BENCHMARK_MAIN();
