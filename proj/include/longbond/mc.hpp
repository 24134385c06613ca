/**
 * @file mc.hpp
 * @brief Deterministic parallel Monte Carlo reduction
 */

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "longbond/errors.hpp"
#include "longbond/math.hpp"
#include "longbond/rng.hpp"

namespace longbond {

/// Monte Carlo point estimate with its sampling error
struct MCEstimate {
    double mean = 0.0;
    double std_err = 0.0;  // sample std / sqrt(n)
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
};

/// Ensemble size, seed, and worker cap
struct MCConfig {
    std::uint64_t paths = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

namespace detail {

constexpr std::uint64_t kChunk = 8192;  // fixed so the reduction order never depends on threads

/// Run fn over path indices [0, paths), accumulating sums and squared sums of
/// each of the `width` statistics per fixed-size chunk, then merging in chunk
/// order: results are identical for any thread count.
///
/// fn(rng, path_index, out) writes `width` doubles into out.
template <class Fn>
void chunked_sums(const MCConfig& config, std::size_t width, Fn&& fn, std::vector<double>& sums,
                  std::vector<double>& sumsqs) {
    const std::uint64_t n_chunks = (config.paths + kChunk - 1) / kChunk;
    // per chunk: width Kahan pairs for values, width for squares
    std::vector<std::vector<KahanSum>> chunk_sums(n_chunks),
        chunk_sumsqs(n_chunks);
    auto run_chunk = [&](std::uint64_t c) {
        chunk_sums[c].resize(width);
        chunk_sumsqs[c].resize(width);
        std::vector<double> vals(width);
        const std::uint64_t lo = c * kChunk;
        const std::uint64_t hi = std::min(lo + kChunk, config.paths);
        for (std::uint64_t p = lo; p < hi; ++p) {
            PathRng rng(config.seed, p);
            fn(rng, p, vals.data());
            for (std::size_t k = 0; k < width; ++k) {
                chunk_sums[c][k].add(vals[k]);
                chunk_sumsqs[c][k].add(vals[k] * vals[k]);
            }
        }
    };
    const unsigned workers =
        std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(n_chunks)));
    if (workers == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
                    run_chunk(c);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    sums.assign(width, 0.0);
    sumsqs.assign(width, 0.0);
    for (std::size_t k = 0; k < width; ++k) {
        KahanSum total, totalsq;
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            total.add(chunk_sums[c][k].value());
            totalsq.add(chunk_sumsqs[c][k].value());
        }
        sums[k] = total.value();
        sumsqs[k] = totalsq.value();
    }
}

inline MCEstimate finish_estimate(double sum, double sumsq, const MCConfig& config) {
    const double n = static_cast<double>(config.paths);
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return MCEstimate{mean, std::sqrt(var / n), config.paths, config.seed};
}

}  // namespace detail

/// Mean and stderr of fn(rng, path_index) over the ensemble
template <class Fn>
MCEstimate ensemble_mean(const MCConfig& config, Fn&& fn) {
    if (config.paths < 2) throw InvalidParameter("ensemble_mean: need at least 2 paths");
    std::vector<double> sums, sumsqs;
    detail::chunked_sums(
        config, 1,
        [&fn](PathRng& rng, std::uint64_t p, double* out) { out[0] = fn(rng, p); }, sums,
        sumsqs);
    return detail::finish_estimate(sums[0], sumsqs[0], config);
}

/// Means and stderrs of a vector statistic computed on shared paths
/// (common random numbers across the components)
template <class Fn>
std::vector<MCEstimate> ensemble_mean_vec(const MCConfig& config, std::size_t width, Fn&& fn) {
    if (config.paths < 2) throw InvalidParameter("ensemble_mean_vec: need at least 2 paths");
    if (width == 0) throw InvalidParameter("ensemble_mean_vec: width must be > 0");
    std::vector<double> sums, sumsqs;
    detail::chunked_sums(config, width, std::forward<Fn>(fn), sums, sumsqs);
    std::vector<MCEstimate> out;
    out.reserve(width);
    for (std::size_t k = 0; k < width; ++k) {
        out.push_back(detail::finish_estimate(sums[k], sumsqs[k], config));
    }
    return out;
}

}  // namespace longbond
