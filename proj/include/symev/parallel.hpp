/* Copyright 2026 The symev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SYMEV_PARALLEL_HPP_
#define SYMEV_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <vector>

namespace symev {

// Runs fn(i) for i in [0, n), on OpenMP threads when `parallel` is set.
// Iterations must write to disjoint state. If any iteration throws, the
// exception of the lowest failing index is rethrown after the loop.
template <typename Fn>
void ParallelFor(std::size_t n, bool parallel, Fn&& fn) {
  if (!parallel || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Worker threads OpenMP would use for a parallel region.
int MaxThreads();

}  // namespace symev

#endif  // SYMEV_PARALLEL_HPP_
