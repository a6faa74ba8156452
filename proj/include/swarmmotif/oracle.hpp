#pragma once

#include "swarmmotif/dissimilarity.hpp"
#include "swarmmotif/motif_store.hpp"
#include "swarmmotif/random.hpp"
#include "swarmmotif/stats.hpp"
#include "swarmmotif/swarm.hpp"
#include "swarmmotif/types.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <queue>
#include <vector>

namespace swarmmotif {

/// Number of admissible (a, w_a, b, w_b) tuples under bounds.
inline std::uint64_t search_space_size(const SearchBounds& bounds) {
    std::uint64_t total = 0;
    for (Index wa = bounds.w_min; wa <= bounds.w_max; ++wa) {
        for (Index wb = bounds.w_min; wb <= bounds.w_max; ++wb) {
            if (bounds.equal_lengths && wa != wb) continue;
            if (bounds.has_max_stretch() && std::abs(wa - wb) > bounds.max_stretch) continue;
            // a in [1, M], b in [a + wa + 1, n - wb + 1] with M = n - wa - wb
            const Index room = bounds.n - wa - wb;
            if (room > 0) total += static_cast<std::uint64_t>(room) * static_cast<std::uint64_t>(room + 1) / 2;
        }
    }
    return total;
}

struct OracleOptions {
    std::uint64_t budget = 100'000'000;  ///< maximum D evaluations
    double overlap_fraction = 0.0;
    std::size_t initial_pool = std::size_t{1} << 16;
};

struct OracleResult {
    MotifSet motifs;
    std::uint64_t evaluations = 0;
    std::uint64_t search_space = 0;
    double elapsed_ms = 0.0;
};

/**
 * Exact top-k by exhaustive enumeration.
 *
 * Only the `pool` smallest candidates (total order on (d, coords)) are kept.
 * When the greedy extractor finds k motifs inside that prefix, the result is
 * identical to running it over the fully sorted space; otherwise the pool
 * doubles and the enumeration repeats.
 */
template <class Fitness>
OracleResult brute_force_topk(Fitness&& fitness, const SearchBounds& bounds, std::size_t k,
                              const OracleOptions& options = {}) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    bounds.require_feasible();

    OracleResult result;
    result.search_space = search_space_size(bounds);
    if (result.search_space > options.budget) {
        throw BudgetExceeded("exhaustive search needs " + std::to_string(result.search_space) +
                             " evaluations, budget is " + std::to_string(options.budget));
    }

    std::size_t pool = std::max<std::size_t>(options.initial_pool, 2 * k + 1);
    for (;;) {
        std::priority_queue<Motif> worst_on_top;  // max-heap holding the pool smallest
        for (Index wa = bounds.w_min; wa <= bounds.w_max; ++wa) {
            for (Index wb = bounds.w_min; wb <= bounds.w_max; ++wb) {
                if (bounds.equal_lengths && wa != wb) continue;
                if (bounds.has_max_stretch() && std::abs(wa - wb) > bounds.max_stretch) continue;
                for (Index a = 1; a + wa + wb <= bounds.n; ++a) {
                    for (Index b = a + wa + 1; b + wb - 1 <= bounds.n; ++b) {
                        const MotifCoords m{a, wa, b, wb};
                        const double d = fitness(m);
                        ++result.evaluations;
                        if (worst_on_top.size() < pool) {
                            worst_on_top.emplace(m, d);
                        } else {
                            Motif candidate(m, d);
                            if (candidate < worst_on_top.top()) {
                                worst_on_top.pop();
                                worst_on_top.push(candidate);
                            }
                        }
                    }
                }
            }
        }
        const bool truncated = result.search_space > worst_on_top.size();
        std::vector<Motif> sorted;
        sorted.reserve(worst_on_top.size());
        while (!worst_on_top.empty()) {
            sorted.push_back(worst_on_top.top());
            worst_on_top.pop();
        }
        std::reverse(sorted.begin(), sorted.end());
        result.motifs = top_k_nonoverlapping(sorted, k, bounds.n, options.overlap_fraction);
        if (!result.motifs.shortfall() || !truncated) break;
        if (result.evaluations + result.search_space > options.budget) {
            throw BudgetExceeded("exhaustive search exceeded its budget while widening the candidate pool");
        }
        pool *= 2;
    }
    result.elapsed_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    return result;
}

inline OracleResult brute_force_topk(const TimeSeries& z, const DissimilarityMeasure& measure,
                                     const SearchBounds& bounds, std::size_t k,
                                     const OracleOptions& options = {}) {
    return brute_force_topk(SeriesFitness(z, measure), bounds, k, options);
}

/// Percentile summary of D over uniformly drawn motifs.
struct SampleReference {
    std::size_t count = 0;
    Spread spread;
    std::vector<double> values;  ///< in draw order
};

/**
 * Draws count admissible motifs with the swarm initializer's distribution
 * (rejecting the rare invalid draw) and summarizes their dissimilarities.
 */
template <class Fitness>
SampleReference random_sample_reference(Fitness&& fitness, const SearchBounds& bounds, std::size_t count,
                                        Random& rng) {
    if (count == 0) throw std::invalid_argument("sample count must be at least 1");
    bounds.require_feasible();
    SampleReference ref;
    ref.count = count;
    ref.values.reserve(count);
    while (ref.values.size() < count) {
        const auto m = floor_position(draw_position(bounds, rng), bounds);
        if (!m) continue;
        ref.values.push_back(fitness(*m));
    }
    ref.spread = spread(ref.values);
    return ref;
}

inline SampleReference random_sample_reference(const TimeSeries& z, const DissimilarityMeasure& measure,
                                               const SearchBounds& bounds, std::size_t count, Random& rng) {
    return random_sample_reference(SeriesFitness(z, measure), bounds, count, rng);
}

}  // namespace swarmmotif
