// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QWALK_PARALLEL_H_
#define QWALK_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace qwalk {

/// Worker count: QWALK_THREADS if set and positive, else the hardware
/// concurrency.
std::size_t thread_budget();

/// out[i] = fn(i) for i < count, computed on up to thread_budget() threads.
/// Results land in index order regardless of scheduling. The exception of
/// the lowest failing index is rethrown.
template <typename Fn>
auto parallel_map(std::size_t count, Fn &&fn) -> std::vector<std::invoke_result_t<Fn &, std::size_t>> {
    using Result = std::invoke_result_t<Fn &, std::size_t>;
    std::vector<Result> out(count);
    std::vector<std::exception_ptr> errors(count);
    const std::size_t workers = std::min(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

}  // namespace qwalk

#endif  // QWALK_PARALLEL_H_
