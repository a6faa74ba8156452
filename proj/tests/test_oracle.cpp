#include "swarmmotif/oracle.hpp"
#include "support/reference.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <vector>

using namespace swarmmotif;

namespace {

TimeSeries periodic(Index repeats) {
    std::vector<double> v;
    for (Index r = 0; r < repeats; ++r) v.insert(v.end(), {0, 1, 2, 3});
    return TimeSeries(v);
}

struct Counted {
    SeriesFitness inner;
    std::size_t* calls;
    double operator()(const MotifCoords& m) const {
        ++*calls;
        return inner(m);
    }
};

// Every admissible motif, enumerated b-major, fully sorted.
std::vector<Motif> enumerate_all(const TimeSeries& z, const DissimilarityMeasure& measure, const SearchBounds& b) {
    std::vector<Motif> all;
    for (Index bb = 1; bb <= b.n; ++bb) {
        for (Index aa = 1; aa < bb; ++aa) {
            for (Index wb = b.w_max; wb >= b.w_min; --wb) {
                for (Index wa = b.w_max; wa >= b.w_min; --wa) {
                    const MotifCoords m{aa, wa, bb, wb};
                    if (!b.admits(m)) continue;
                    all.emplace_back(m, evaluate(measure, z, m));
                }
            }
        }
    }
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

TEST_CASE("search space size", "[oracle][count]") {
    REQUIRE(search_space_size(SearchBounds{100, 10, 12, true}) == 3240 + 3081 + 2926);

    const auto z = generate_random_walk(100, 1);
    std::size_t calls = 0;
    auto r = brute_force_topk(Counted{SeriesFitness(z, {}), &calls}, SearchBounds{100, 10, 12, true}, 2);
    REQUIRE(calls == 9247);
    REQUIRE(r.evaluations == 9247);
    REQUIRE(r.search_space == 9247);

    for (Index n : {30, 47, 80}) {
        for (bool eq : {false, true}) {
            for (Index stretch : {Index{-1}, Index{0}, Index{1}}) {
                SearchBounds b{n, 5, 9, eq, stretch};
                std::uint64_t brute = 0;
                for (Index a = 1; a <= n; ++a)
                    for (Index wa = 1; wa <= n; ++wa)
                        for (Index bb = 1; bb <= n; ++bb)
                            for (Index wb = 1; wb <= 12; ++wb) brute += b.admits({a, wa, bb, wb}) ? 1 : 0;
                REQUIRE(search_space_size(b) == brute);
            }
        }
    }
}

TEST_CASE("exact repeats give zero", "[oracle]") {
    auto r = brute_force_topk(periodic(25), DissimilarityMeasure{}, SearchBounds{100, 4, 4, true}, 1);
    REQUIRE(r.motifs.size() == 1);
    REQUIRE(r.motifs.motifs[0].d() == 0.0);
}

TEST_CASE("oracle matches a full independent enumeration", "[oracle][property]") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto z = generate_random_walk(90, seed);
        for (const auto& measure : {parse_measure("zeuclid"), parse_measure("dtw")}) {
            const SearchBounds b{90, 6, 9, seed % 2 == 0};
            const auto all = enumerate_all(z, measure, b);
            REQUIRE(all.size() == search_space_size(b));
            for (std::size_t k : {1u, 3u, 5u}) {
                auto expected = testing::ref_extract(all, k);
                auto got = brute_force_topk(z, measure, b, k);
                REQUIRE(got.motifs.motifs == expected);
                // a tiny pool forces the widening path and must not change the answer
                OracleOptions small;
                small.initial_pool = 1;
                auto widened = brute_force_topk(z, measure, b, k, small);
                REQUIRE(widened.motifs.motifs == expected);
                REQUIRE(widened.evaluations >= got.evaluations);
            }
            for (const auto& m : all) REQUIRE(m.d() >= all.front().d());
        }
    }
}

TEST_CASE("oracle guards", "[oracle][errors]") {
    const auto z = generate_random_walk(1500, 2);
    OracleOptions opts;
    opts.budget = 1000;
    REQUIRE_THROWS_AS(brute_force_topk(z, DissimilarityMeasure{}, SearchBounds{1500, 10, 12}, 1, opts),
                      BudgetExceeded);
    REQUIRE_THROWS_AS(brute_force_topk(z, DissimilarityMeasure{}, SearchBounds{1500, 800, 900}, 1), InfeasibleTask);
    REQUIRE_THROWS_AS(brute_force_topk(z, DissimilarityMeasure{}, SearchBounds{1500, 12, 10}, 1),
                      std::invalid_argument);
}

TEST_CASE("oracle shortfall", "[oracle]") {
    const auto z = generate_random_walk(50, 3);
    auto r = brute_force_topk(z, DissimilarityMeasure{}, SearchBounds{50, 20, 22}, 3);
    REQUIRE(r.motifs.size() == 1);
    REQUIRE(r.motifs.shortfall());
}

TEST_CASE("planted pair is the exact optimum", "[oracle][planted]") {
    const auto planted = testing::make_planted_pair(2000, 60, 5);
    const TimeSeries z(planted.values);
    const SearchBounds b{2000, 60, 60, true};
    for (const auto& measure : {parse_measure("zeuclid")}) {
        auto r = brute_force_topk(z, measure, b, 1);
        REQUIRE(r.motifs.size() == 1);
        const auto& m = r.motifs.motifs[0];
        REQUIRE(std::abs(m.a() - planted.first) <= 1);
        REQUIRE(std::abs(m.b() - planted.second) <= 1);

        Random rng(1);
        auto sample = random_sample_reference(z, measure, b, 2000, rng);
        REQUIRE(sample.spread.p50 >= 2.0 * m.d());
    }
    // with a length range the optimum may shrink inside the burst but stays aligned
    auto ranged = brute_force_topk(z, DissimilarityMeasure{}, SearchBounds{2000, 56, 64, true}, 1);
    const auto& m = ranged.motifs.motifs[0];
    REQUIRE(testing::planted_coverage(m.a(), m.w_a(), planted.first, 60) >= 0.9);
    REQUIRE(testing::planted_coverage(m.b(), m.w_b(), planted.second, 60) >= 0.9);
}

TEST_CASE("random sampling reference", "[oracle][sample]") {
    const auto z = generate_random_walk(400, 4);
    const SearchBounds b{400, 10, 30};
    SECTION("single sample") {
        Random rng(1);
        auto r = random_sample_reference(z, DissimilarityMeasure{}, b, 1, rng);
        REQUIRE(r.count == 1);
        REQUIRE(r.spread.min == r.spread.max);
        REQUIRE(r.spread.p05 == r.spread.min);
        REQUIRE(r.spread.p50 == r.spread.min);
        REQUIRE(r.spread.p95 == r.spread.min);
    }
    SECTION("determinism and ordering") {
        Random r1(9), r2(9);
        auto a = random_sample_reference(z, DissimilarityMeasure{}, b, 400, r1);
        auto c = random_sample_reference(z, DissimilarityMeasure{}, b, 400, r2);
        REQUIRE(a.values == c.values);
        REQUIRE(a.spread.min <= a.spread.p05);
        REQUIRE(a.spread.p05 <= a.spread.p50);
        REQUIRE(a.spread.p50 <= a.spread.p95);
        REQUIRE(a.spread.p95 <= a.spread.max);
    }
    SECTION("every sampled tuple is valid") {
        std::size_t bad = 0, calls = 0;
        auto check = [&](const MotifCoords& m) {
            ++calls;
            if (!b.admits(m)) ++bad;
            return 1.0;
        };
        Random rng(3);
        random_sample_reference(check, b, 5000, rng);
        REQUIRE(calls == 5000);
        REQUIRE(bad == 0);
    }
    SECTION("zero count is rejected") {
        Random rng(1);
        REQUIRE_THROWS(random_sample_reference(z, DissimilarityMeasure{}, b, 0, rng));
    }
}

TEST_CASE("percentiles", "[oracle][stats]") {
    std::vector<double> v{5, 1, 4, 2, 3};
    auto s = spread(v);
    REQUIRE(s.min == 1);
    REQUIRE(s.max == 5);
    REQUIRE(s.p50 == 3);
    REQUIRE(s.p05 == Catch::Approx(1.2));
    REQUIRE(s.p95 == Catch::Approx(4.8));
    REQUIRE_THROWS(spread({}));
}
