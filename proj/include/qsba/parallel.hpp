#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "qsba/rng.hpp"

namespace qsba {

/// Worker count: QSBA_WORKERS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
inline unsigned worker_count() {
    if (const char* env = std::getenv("QSBA_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `trial(index, rng, tally)` for index in [0, trials), each with the
/// stream Rng::for_trial(seed, index). Workers take contiguous index ranges
/// and their tallies are summed in worker order, so the result does not
/// depend on the number of workers as long as Tally::operator+= is
/// associative. The first exception thrown by a trial is rethrown.
template <class Tally, class Trial>
Tally run_trials(std::uint64_t trials, std::uint64_t seed, Trial trial) {
    const std::uint64_t workers = std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(trials, 1));
    std::vector<Tally> partial(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto body = [&](std::uint64_t w) {
        const std::uint64_t begin = trials * w / workers;
        const std::uint64_t end = trials * (w + 1) / workers;
        try {
            for (std::uint64_t i = begin; i < end; ++i) {
                Rng rng = Rng::for_trial(seed, i);
                trial(i, rng, partial[w]);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) {
            pool.emplace_back(body, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    Tally total{};
    for (const Tally& t : partial) {
        total += t;
    }
    return total;
}

} // namespace qsba
