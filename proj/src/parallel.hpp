// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace gltmean::detail {

/// Runs fn(i) for i in [0, count) on up to `threads` threads, contiguous
/// chunks per thread. The first exception (lowest chunk) is rethrown.
template <class Fn>
void parallel_for(long count, int threads, Fn&& fn) {
  const long workers = std::clamp<long>(threads, 1, std::max(1L, count));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  const long chunk = (count + workers - 1) / workers;
  for (long w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (long i = w * chunk; i < std::min(count, (w + 1) * chunk); ++i) fn(i);
      } catch (...) {
        errors[std::size_t(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gltmean::detail
