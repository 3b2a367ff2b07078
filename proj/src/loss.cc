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

#include "biasforge/loss.h"

#include <algorithm>
#include <cmath>

#include "biasforge/error.h"
#include "biasforge/parallel.h"

namespace biasforge {

namespace {

void check_shapes(const LogitsMatrix& logits, std::span<const TokenId> tokens,
                  std::span<const double> weights) {
  if (logits.rows() != tokens.size()) {
    throw ConfigError("logits have " + std::to_string(logits.rows()) +
                      " rows for " + std::to_string(tokens.size()) + " target tokens");
  }
  if (weights.size() != tokens.size()) {
    throw ConfigError("weights length does not match target length");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] >= logits.cols()) {
      throw ConfigError("token id " + std::to_string(tokens[i]) + " at position " +
                        std::to_string(i) + " outside vocabulary of size " +
                        std::to_string(logits.cols()));
    }
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("weights must be positive and finite");
  }
  for (double x : logits.data()) {
    if (!std::isfinite(x)) throw ConfigError("logits must be finite");
  }
}

double log_sum_exp(std::span<const double> row) {
  const double max = *std::max_element(row.begin(), row.end());
  double sum = 0.0;
  for (double x : row) sum += std::exp(x - max);
  return max + std::log(sum);
}

void softmax_minus_onehot(std::span<const double> row, TokenId token, double weight,
                          std::span<double> out) {
  const double lse = log_sum_exp(row);
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = weight * (std::exp(row[j] - lse) - (j == token ? 1.0 : 0.0));
  }
}

}  // namespace

WeightedTarget assign_weights(const NormalizedText& target_words,
                              std::span<const TokenId> token_ids,
                              std::span<const TokenSpan> spans,
                              const std::unordered_set<std::string>& true_bias_words,
                              double beta) {
  if (!(beta >= 1.0) || !std::isfinite(beta)) {
    throw ConfigError("beta must be a finite value >= 1");
  }
  if (spans.size() != target_words.words.size()) {
    throw ConfigError("expected one token span per target word");
  }
  WeightedTarget target;
  target.token_ids.assign(token_ids.begin(), token_ids.end());
  target.weights.assign(token_ids.size(), 1.0);
  std::size_t expected_start = 0;
  for (const auto& span : spans) {
    if (span.start != expected_start || span.end < span.start ||
        span.end > token_ids.size() || span.word_index >= target_words.words.size()) {
      throw ConfigError("token spans are not contiguous over the target");
    }
    expected_start = span.end;
    if (!true_bias_words.contains(target_words.words[span.word_index])) continue;
    for (std::size_t t = span.start; t < span.end; ++t) target.weights[t] = beta;
    target.true_bias_spans.push_back(span);
  }
  if (expected_start != token_ids.size()) {
    throw ConfigError("token spans do not cover the target");
  }
  return target;
}

WeightedTarget make_weighted_target(const Tokenizer& tok, const NormalizedText& target_words,
                                    const std::unordered_set<std::string>& true_bias_words,
                                    double beta) {
  const TargetTokens tt = word_token_spans(tok, target_words);
  return assign_weights(target_words, tt.ids, tt.spans, true_bias_words, beta);
}

double token_cross_entropy(std::span<const double> row, TokenId token) {
  return log_sum_exp(row) - row[token];
}

double weighted_ce_serial(const LogitsMatrix& logits, const WeightedTarget& target) {
  check_shapes(logits, target.token_ids, target.weights);
  double loss = 0.0;
  for (std::size_t i = 0; i < target.token_ids.size(); ++i) {
    loss += target.weights[i] * token_cross_entropy(logits.row(i), target.token_ids[i]);
  }
  return loss;
}

double weighted_ce(const LogitsMatrix& logits, const WeightedTarget& target, int jobs) {
  check_shapes(logits, target.token_ids, target.weights);
  const std::size_t s = target.token_ids.size();
  std::vector<double> terms(s);
  parallel_for(s, jobs, [&](std::size_t i) {
    terms[i] = target.weights[i] * token_cross_entropy(logits.row(i), target.token_ids[i]);
  });
  double loss = 0.0;
  for (double t : terms) loss += t;
  return loss;
}

double unweighted_ce(const LogitsMatrix& logits, std::span<const TokenId> tokens) {
  const std::vector<double> ones(tokens.size(), 1.0);
  check_shapes(logits, tokens, ones);
  double loss = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    loss += token_cross_entropy(logits.row(i), tokens[i]);
  }
  return loss;
}

LogitsMatrix weighted_ce_grad_serial(const LogitsMatrix& logits,
                                     const WeightedTarget& target) {
  check_shapes(logits, target.token_ids, target.weights);
  LogitsMatrix grad(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    softmax_minus_onehot(logits.row(i), target.token_ids[i], target.weights[i], grad.row(i));
  }
  return grad;
}

LogitsMatrix weighted_ce_grad(const LogitsMatrix& logits, const WeightedTarget& target,
                              int jobs) {
  check_shapes(logits, target.token_ids, target.weights);
  LogitsMatrix grad(logits.rows(), logits.cols());
  parallel_for(logits.rows(), jobs, [&](std::size_t i) {
    softmax_minus_onehot(logits.row(i), target.token_ids[i], target.weights[i], grad.row(i));
  });
  return grad;
}

}  // namespace biasforge
