#ifndef ESTSAT_PARALLEL_HPP
#define ESTSAT_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace estsat {

// Reduction helpers shared by all exhaustive sweeps. The parallel variants
// split the index range into fixed-size chunks, reduce each chunk in index
// order, then fold the per-chunk results in chunk order. The outcome is
// bit-identical no matter how many OpenMP threads run the chunks, which is
// what keeps reports byte-stable across machines.

inline constexpr std::uint64_t kSweepChunk = 1 << 13;

// Plain sequential sum, kept as the reference implementation.
template <class F>
double serial_sum(std::uint64_t count, F&& item) {
    double total = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) total += item(i);
    return total;
}

template <class F>
double parallel_sum(std::uint64_t count, F&& item) {
    if (count == 0) return 0.0;
    const std::uint64_t chunks = (count + kSweepChunk - 1) / kSweepChunk;
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kSweepChunk;
        const std::uint64_t hi = lo + kSweepChunk < count ? lo + kSweepChunk : count;
        double acc = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) acc += item(i);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    double total = 0.0;
    for (double part : partial) total += part;
    return total;
}

// Minimum of item(i) over [0, count), returning the smallest index that
// attains it. Used by covering checks to report the worst valuation.
template <class F>
std::pair<double, std::uint64_t> serial_min(std::uint64_t count, F&& item) {
    double best = item(0);
    std::uint64_t best_i = 0;
    for (std::uint64_t i = 1; i < count; ++i) {
        const double x = item(i);
        if (x < best) {
            best = x;
            best_i = i;
        }
    }
    return {best, best_i};
}

template <class F>
std::pair<double, std::uint64_t> parallel_min(std::uint64_t count, F&& item) {
    const std::uint64_t chunks = (count + kSweepChunk - 1) / kSweepChunk;
    std::vector<std::pair<double, std::uint64_t>> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kSweepChunk;
        const std::uint64_t hi = lo + kSweepChunk < count ? lo + kSweepChunk : count;
        double best = item(lo);
        std::uint64_t best_i = lo;
        for (std::uint64_t i = lo + 1; i < hi; ++i) {
            const double x = item(i);
            if (x < best) {
                best = x;
                best_i = i;
            }
        }
        partial[static_cast<std::size_t>(c)] = {best, best_i};
    }
    auto best = partial[0];
    for (std::size_t c = 1; c < partial.size(); ++c)
        if (partial[c].first < best.first) best = partial[c];
    return best;
}

} // namespace estsat

#endif
