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

#include "biasforge/align.h"

#include <algorithm>

#include "biasforge/error.h"
#include "biasforge/parallel.h"

namespace biasforge {

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::kMatch: return "match";
    case EditKind::kSubstitute: return "substitute";
    case EditKind::kInsert: return "insert";
    case EditKind::kDelete: return "delete";
  }
  return "?";
}

EditKind edit_kind_from_string(std::string_view name) {
  if (name == "match") return EditKind::kMatch;
  if (name == "substitute") return EditKind::kSubstitute;
  if (name == "insert") return EditKind::kInsert;
  if (name == "delete") return EditKind::kDelete;
  throw ParseError("unknown edit operation '" + std::string(name) + "'", 0);
}

std::vector<std::string> WordAlignment::ref_words() const {
  std::vector<std::string> out;
  for (const auto& op : ops) {
    if (op.kind != EditKind::kInsert) out.push_back(*op.ref);
  }
  return out;
}

std::vector<std::string> WordAlignment::hyp_words() const {
  std::vector<std::string> out;
  for (const auto& op : ops) {
    if (op.kind != EditKind::kDelete) out.push_back(*op.hyp);
  }
  return out;
}

WordAlignment align_words(std::span<const std::string> ref,
                          std::span<const std::string> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t cols = m + 1;
  // cost[i * cols + j]: distance between ref[0, i) and hyp[0, j).
  std::vector<std::size_t> cost((n + 1) * cols);
  for (std::size_t j = 0; j <= m; ++j) cost[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cost[i * cols] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag =
          cost[(i - 1) * cols + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::size_t del = cost[(i - 1) * cols + j] + 1;
      const std::size_t ins = cost[i * cols + j - 1] + 1;
      cost[i * cols + j] = std::min({diag, del, ins});
    }
  }

  WordAlignment alignment;
  alignment.ops.reserve(std::max(n, m));
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = cost[i * cols + j];
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (here == cost[(i - 1) * cols + j - 1] + (same ? 0 : 1)) {
        alignment.ops.push_back({same ? EditKind::kMatch : EditKind::kSubstitute,
                                 ref[i - 1], hyp[j - 1]});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && here == cost[(i - 1) * cols + j] + 1) {
      alignment.ops.push_back({EditKind::kDelete, ref[i - 1], std::nullopt});
      --i;
      continue;
    }
    alignment.ops.push_back({EditKind::kInsert, std::nullopt, hyp[j - 1]});
    --j;
  }
  std::reverse(alignment.ops.begin(), alignment.ops.end());
  return alignment;
}

EditCounts edit_counts(const WordAlignment& alignment) {
  EditCounts c;
  for (const auto& op : alignment.ops) {
    switch (op.kind) {
      case EditKind::kMatch: ++c.matches; break;
      case EditKind::kSubstitute: ++c.substitutions; break;
      case EditKind::kInsert: ++c.insertions; break;
      case EditKind::kDelete: ++c.deletions; break;
    }
  }
  c.ref_len = c.matches + c.substitutions + c.deletions;
  return c;
}

namespace {

void check_sizes(std::size_t refs, std::size_t hyps) {
  if (refs != hyps) {
    throw ConfigError("align_corpus: " + std::to_string(refs) +
                      " references but " + std::to_string(hyps) + " hypotheses");
  }
}

}  // namespace

std::vector<WordAlignment> align_corpus(std::span<const NormalizedText> refs,
                                        std::span<const NormalizedText> hyps,
                                        int jobs) {
  check_sizes(refs.size(), hyps.size());
  std::vector<WordAlignment> out(refs.size());
  parallel_for(refs.size(), jobs, [&](std::size_t i) {
    out[i] = align_words(refs[i], hyps[i]);
  });
  return out;
}

std::vector<WordAlignment> align_corpus_serial(std::span<const NormalizedText> refs,
                                               std::span<const NormalizedText> hyps) {
  check_sizes(refs.size(), hyps.size());
  std::vector<WordAlignment> out;
  out.reserve(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out.push_back(align_words(refs[i], hyps[i]));
  }
  return out;
}

}  // namespace biasforge
