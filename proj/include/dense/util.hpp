#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace dense {

using Rng = std::mt19937_64;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    if (a > kPi) a -= kTwoPi;
    return a;
}

// Wraps an angle into [0, 2*pi).
inline double wrap_angle_positive(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow; equals -log(sigmoid(-x)).
inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Runs body(begin, end) over [0, count) split across `workers` threads.
// workers <= 1 executes inline on the calling thread.
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t, std::size_t)>& body) {
    if (workers <= 1 || count < 2) {
        body(0, count);
        return;
    }
    const std::size_t n_threads = std::min<std::size_t>(workers, count);
    const std::size_t chunk = (count + n_threads - 1) / n_threads;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) th.join();
}

// Like parallel_for but also hands the body its chunk index, for
// worker-local accumulation buffers. Chunk boundaries are identical for the
// same (count, workers) pair.
inline std::size_t parallel_for_chunks(
    std::size_t count, int workers,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (workers <= 1 || count < 2) {
        if (count > 0) body(0, 0, count);
        return count > 0 ? 1 : 0;
    }
    const std::size_t n_threads = std::min<std::size_t>(workers, count);
    const std::size_t chunk = (count + n_threads - 1) / n_threads;
    std::vector<std::thread> pool;
    std::size_t n_chunks = 0;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        ++n_chunks;
        pool.emplace_back([&body, t, begin, end] { body(t, begin, end); });
    }
    for (auto& th : pool) th.join();
    return n_chunks;
}

// SplitMix64 step; used to derive independent per-task seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline int default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace dense
