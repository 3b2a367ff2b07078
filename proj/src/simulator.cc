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

#include "biasforge/simulator.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "biasforge/error.h"
#include "biasforge/parallel.h"
#include "biasforge/rng.h"

namespace biasforge {

namespace {

std::size_t scaled_index(double u, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
}

void check_unit(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

void ErrorModel::validate() const {
  check_unit(p_sub_common, "p_sub_common");
  check_unit(p_sub_rare, "p_sub_rare");
  check_unit(p_del, "p_del");
  check_unit(p_ins, "p_ins");
  check_unit(bias_effect, "bias_effect");
  if (!(distractor_slope >= 0.0) || !std::isfinite(distractor_slope)) {
    throw ConfigError("distractor_slope must be finite and non-negative");
  }
  if (p_sub_rare < p_sub_common) {
    throw ConfigError("p_sub_rare must be at least p_sub_common");
  }
  const bool noisy = p_sub_common > 0 || p_sub_rare > 0 || p_ins > 0;
  if (noisy && confusion_pool.empty()) {
    throw ConfigError("confusion pool is empty but error probabilities are positive");
  }
}

NormalizedText simulate_hypothesis(std::string_view utterance_id, const NormalizedText& ref,
                                   const VocabStats& stats, const BiasingList* list,
                                   const ErrorModel& model) {
  model.validate();
  std::unordered_set<std::string> members;
  double distractor_shift = 0.0;
  if (list != nullptr) {
    members.insert(list->words.begin(), list->words.end());
    distractor_shift =
        model.distractor_slope * static_cast<double>(list->num_false_bias());
  }

  const WordPool& pool = model.confusion_pool;
  UtteranceRng rng(model.seed, utterance_id, "simulate");
  NormalizedText hyp;
  for (const auto& word : ref.words) {
    const double u_del = rng.uniform();
    const double u_sub = rng.uniform();
    const double u_pick = rng.uniform();
    const double u_ins = rng.uniform();
    const double u_ins_pick = rng.uniform();

    double p_sub = model.p_sub_common;
    if (stats.is_rare(word)) {
      p_sub = model.p_sub_rare;
      if (members.contains(word)) p_sub *= model.bias_effect;
      p_sub = std::min(1.0, p_sub + distractor_shift);
    }

    if (u_del < model.p_del) {
      // deleted
    } else if (u_sub < p_sub) {
      const bool in_pool = pool.contains(word);
      const std::size_t choices = pool.size() - (in_pool ? 1 : 0);
      if (choices == 0) {
        hyp.words.push_back(word);
      } else {
        const std::string& candidate = pool[scaled_index(u_pick, choices)];
        // With the true word excluded, the last pool slot stands in for it.
        hyp.words.push_back(candidate == word ? pool[pool.size() - 1] : candidate);
      }
    } else {
      hyp.words.push_back(word);
    }

    if (u_ins < model.p_ins) hyp.words.push_back(pool[scaled_index(u_ins_pick, pool.size())]);
  }
  hyp.raw = hyp.render();
  return hyp;
}

namespace {

void check_lists(std::span<const Utterance> corpus, std::span<const BiasingList> lists) {
  if (!lists.empty() && lists.size() != corpus.size()) {
    throw ConfigError("simulate_corpus: lists must be empty or match the corpus");
  }
}

}  // namespace

std::vector<NormalizedText> simulate_corpus(std::span<const Utterance> corpus,
                                            const VocabStats& stats,
                                            std::span<const BiasingList> lists,
                                            const ErrorModel& model, int jobs) {
  check_lists(corpus, lists);
  model.validate();
  std::vector<NormalizedText> out(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    out[i] = simulate_hypothesis(corpus[i].id, corpus[i].text, stats,
                                 lists.empty() ? nullptr : &lists[i], model);
  });
  return out;
}

std::vector<NormalizedText> simulate_corpus_serial(std::span<const Utterance> corpus,
                                                   const VocabStats& stats,
                                                   std::span<const BiasingList> lists,
                                                   const ErrorModel& model) {
  check_lists(corpus, lists);
  std::vector<NormalizedText> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out.push_back(simulate_hypothesis(corpus[i].id, corpus[i].text, stats,
                                      lists.empty() ? nullptr : &lists[i], model));
  }
  return out;
}

std::vector<SweepPoint> sweep_list_size(std::span<const Utterance> corpus,
                                        const VocabStats& stats, const WordPool& rare_pool,
                                        std::span<const std::size_t> sizes,
                                        Scenario scenario, const ErrorModel& model,
                                        std::uint64_t list_seed, int jobs) {
  if (sizes.empty()) throw ConfigError("sweep needs at least one list size");
  if (corpus.empty()) throw ConfigError("sweep needs a non-empty corpus");
  model.validate();

  std::vector<NormalizedText> refs;
  refs.reserve(corpus.size());
  for (const auto& u : corpus) refs.push_back(u.text);
  const auto plain_hyps = simulate_corpus(corpus, stats, {}, model, jobs);
  const auto plain_alignments = align_corpus(refs, plain_hyps, jobs);

  std::vector<SweepPoint> points;
  for (std::size_t n : sizes) {
    std::vector<BiasingList> lists(corpus.size());
    std::vector<std::unordered_set<std::string>> oov(corpus.size());
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
      lists[i] = scenario == Scenario::kAllRareReferenceWords
                     ? build_scenario1_list(corpus[i].id, corpus[i].text, stats,
                                            rare_pool, n, list_seed)
                     : build_scenario2_list(corpus[i].id, corpus[i].text, rare_pool, n,
                                            list_seed);
      const auto absent = oov_subset(lists[i].words, stats);
      oov[i].insert(absent.begin(), absent.end());
    });
    const auto hyps = simulate_corpus(corpus, stats, lists, model, jobs);
    const auto alignments = align_corpus(refs, hyps, jobs);

    SweepPoint point;
    point.list_size = n;
    point.with_list = aggregate(classify_corpus(alignments, lists, oov, jobs));
    point.without_list = aggregate(classify_corpus(plain_alignments, lists, oov, jobs));
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace biasforge
