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

#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "biasforge/text_norm.h"
#include "biasforge/tokenizer.h"

namespace biasforge {

/// Weight given to tokens of true-bias words.
inline constexpr double kDefaultBeta = 1.1;

/// Target tokens with per-token loss weights: beta inside true-bias word
/// spans, 1 elsewhere.
struct WeightedTarget {
  std::vector<TokenId> token_ids;
  std::vector<double> weights;
  std::vector<TokenSpan> true_bias_spans;
};

/// Row-major S x V matrix of unnormalized scores.
class LogitsMatrix {
 public:
  LogitsMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Assigns beta to every token of every occurrence of a true-bias word.
/// `spans` must come from word_token_spans over `target_words` and index
/// into `token_ids`. Throws ConfigError for beta < 1 or inconsistent spans.
WeightedTarget assign_weights(const NormalizedText& target_words,
                              std::span<const TokenId> token_ids,
                              std::span<const TokenSpan> spans,
                              const std::unordered_set<std::string>& true_bias_words,
                              double beta = kDefaultBeta);

/// Tokenizes the target and assigns weights in one step.
WeightedTarget make_weighted_target(const Tokenizer& tok, const NormalizedText& target_words,
                                    const std::unordered_set<std::string>& true_bias_words,
                                    double beta = kDefaultBeta);

/// -log softmax(row)[token], via log-sum-exp.
double token_cross_entropy(std::span<const double> row, TokenId token);

/// Sum over positions of w_i * H(onehot(token_i), softmax(logits_i)).
/// Rows are evaluated on `jobs` threads and summed in position order, so
/// the result is bitwise identical to weighted_ce_serial. Throws
/// ConfigError on shape mismatch or a token id outside the vocabulary.
double weighted_ce(const LogitsMatrix& logits, const WeightedTarget& target, int jobs = 0);
double weighted_ce_serial(const LogitsMatrix& logits, const WeightedTarget& target);

/// Sum of unweighted token cross-entropies, in position order.
double unweighted_ce(const LogitsMatrix& logits, std::span<const TokenId> tokens);

/// Gradient of weighted_ce: row i is w_i * (softmax(logits_i) - onehot(token_i)).
LogitsMatrix weighted_ce_grad(const LogitsMatrix& logits, const WeightedTarget& target,
                              int jobs = 0);
LogitsMatrix weighted_ce_grad_serial(const LogitsMatrix& logits,
                                     const WeightedTarget& target);

}  // namespace biasforge
