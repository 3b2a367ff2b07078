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
#include <cstdint>
#include <exception>
#include <mutex>

namespace biasforge {

/// Number of workers used when a caller passes jobs <= 0.
int default_jobs();

/// Runs body(i) for i in [0, n) on `jobs` OpenMP threads.
///
/// Each index is written by exactly one iteration, so callers fill
/// preallocated, index-addressed outputs and get results identical to a
/// serial loop. If any iteration throws, the exception from the lowest
/// failing index is rethrown after the loop.
template <typename Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
  if (jobs <= 0) jobs = default_jobs();
  std::exception_ptr error;
  std::size_t error_index = n;
  std::mutex error_mutex;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(jobs) if (jobs > 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (static_cast<std::size_t>(i) < error_index) {
        error_index = static_cast<std::size_t>(i);
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace biasforge
