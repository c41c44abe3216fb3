#pragma once

// Seed-split Monte-Carlo: samples are divided into a fixed number of streams,
// stream j draws from Rng(derive_seed(seed, j)), and per-stream sums are merged
// in stream order. Results do not depend on the number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "hypack/errors.hpp"
#include "hypack/sampling.hpp"

namespace hypack {

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};

inline constexpr std::size_t kMcStreams = 16;

/// Worker count: HYPACK_THREADS if set and positive, else hardware concurrency,
/// capped at kMcStreams.
std::size_t mc_thread_count();

/// Runs fn(rng, out) once per sample, where out has `dims` slots to fill.
/// Returns one estimate per slot.
template <class Fn>
std::vector<McEstimate> run_streams(std::size_t samples, std::uint64_t seed, std::size_t dims, Fn&& fn) {
    if (samples == 0) throw DomainError("sample count must be positive");
    struct Acc {
        std::vector<double> sum, sum2;
        std::exception_ptr error;
    };
    std::vector<Acc> acc(kMcStreams);
    auto run_stream = [&](std::size_t j) {
        Acc& a = acc[j];
        a.sum.assign(dims, 0.0);
        a.sum2.assign(dims, 0.0);
        const std::size_t lo = samples * j / kMcStreams, hi = samples * (j + 1) / kMcStreams;
        Rng rng(derive_seed(seed, j));
        std::vector<double> out(dims);
        try {
            for (std::size_t s = lo; s < hi; ++s) {
                std::fill(out.begin(), out.end(), 0.0);
                fn(rng, out);
                for (std::size_t d = 0; d < dims; ++d) {
                    a.sum[d] += out[d];
                    a.sum2[d] += out[d] * out[d];
                }
            }
        } catch (...) {
            a.error = std::current_exception();
        }
    };
    const std::size_t threads = std::min(mc_thread_count(), kMcStreams);
    if (threads <= 1) {
        for (std::size_t j = 0; j < kMcStreams; ++j) run_stream(j);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t j = t; j < kMcStreams; j += threads) run_stream(j);
            });
        for (auto& th : pool) th.join();
    }
    std::vector<double> sum(dims, 0.0), sum2(dims, 0.0);
    for (auto& a : acc) {
        if (a.error) std::rethrow_exception(a.error);
        for (std::size_t d = 0; d < dims; ++d) {
            sum[d] += a.sum[d];
            sum2[d] += a.sum2[d];
        }
    }
    std::vector<McEstimate> res(dims);
    const double n = static_cast<double>(samples);
    for (std::size_t d = 0; d < dims; ++d) {
        const double mean = sum[d] / n;
        const double var = samples > 1 ? std::max(0.0, (sum2[d] - n * mean * mean) / (n - 1.0)) : 0.0;
        res[d] = {mean, std::sqrt(var / n), samples};
    }
    return res;
}

template <class Fn>
McEstimate run_streams_scalar(std::size_t samples, std::uint64_t seed, Fn&& fn) {
    return run_streams(samples, seed, 1, [&](Rng& rng, std::vector<double>& out) { out[0] = fn(rng); })[0];
}

}  // namespace hypack
