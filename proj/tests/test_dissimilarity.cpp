#include "swarmmotif/dissimilarity.hpp"
#include "support/reference.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace swarmmotif;
using Catch::Approx;

namespace {

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t len) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(len);
    for (auto& v : x) v = g(gen);
    return x;
}

// Smooth random segment: a few random sinusoids.
std::vector<double> smooth_vector(std::mt19937_64& gen, std::size_t len) {
    std::uniform_real_distribution<double> amp(0.2, 1.0), freq(0.01, 0.08), phase(0, 6.28);
    std::vector<double> x(len, 0.0);
    for (int c = 0; c < 3; ++c) {
        const double a = amp(gen), f = freq(gen), p = phase(gen);
        for (std::size_t i = 0; i < len; ++i) x[i] += a * std::sin(f * static_cast<double>(i) + p);
    }
    return x;
}

}  // namespace

TEST_CASE("measure parsing", "[dissimilarity]") {
    REQUIRE(parse_measure("zeuclid").kind == MeasureKind::znorm_euclidean);
    auto dtw = parse_measure("dtw", 5);
    REQUIRE(dtw.kind == MeasureKind::norm_dtw);
    REQUIRE(dtw.dtw_band == 5);
    REQUIRE(dtw.name() == "dtw");
    REQUIRE_THROWS(parse_measure("manhattan"));
}

TEST_CASE("znorm euclidean examples", "[dissimilarity][zeuclid]") {
    const std::vector<double> x{1, 2, 3};
    REQUIRE(znorm_euclidean(x, x) == 0.0);
    REQUIRE(znorm_euclidean(x, std::vector<double>{4, 5, 6}) == Approx(0.0).margin(1e-15));
    REQUIRE(znorm_euclidean(x, std::vector<double>{3, 2, 1}) == Approx(std::sqrt(12.0) / 3.0).margin(1e-12));
    REQUIRE(znorm_euclidean(x, std::vector<double>{3, 2, 1}) == Approx(1.1547).margin(1e-4));
    REQUIRE_THROWS(znorm_euclidean(std::vector<double>{}, x));

    TimeSeries z({1, 2, 3, 0, 3, 2, 1});
    REQUIRE(evaluate(DissimilarityMeasure{}, z, MotifCoords{1, 3, 5, 3}) == Approx(1.1547).margin(1e-4));
    REQUIRE_THROWS(evaluate(DissimilarityMeasure{}, z, MotifCoords{1, 3, 4, 3}));
    REQUIRE_THROWS(evaluate(DissimilarityMeasure{}, z, MotifCoords{1, 3, 6, 3}));
}

TEST_CASE("norm dtw examples", "[dissimilarity][dtw]") {
    const std::vector<double> x{0, 1, 0};
    REQUIRE(norm_dtw(x, x) == 0.0);
    REQUIRE(norm_dtw(x, std::vector<double>{0, 0, 1, 0}) == 0.0);
    REQUIRE_THROWS(norm_dtw(x, std::vector<double>{}));

    // [0,2] vs [1,1,1]: every path pays 1 + 1 at least; the optimum is 2
    REQUIRE(norm_dtw(std::vector<double>{0, 2}, std::vector<double>{1, 1, 1}) ==
            Approx(std::sqrt(3.0) / 3.0).margin(1e-15));
}

TEST_CASE("measures match independent reimplementations", "[dissimilarity][oracle]") {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<std::size_t> len(2, 80);
    for (int trial = 0; trial < 2000; ++trial) {
        auto x = random_vector(gen, len(gen));
        auto y = random_vector(gen, trial % 3 == 0 ? x.size() : len(gen));
        REQUIRE(std::abs(znorm_euclidean(x, y) - testing::ref_znorm_euclidean(x, y)) < 1e-9);
        const auto zx = testing::ref_znorm(x), zy = testing::ref_znorm(y);
        REQUIRE(std::abs(norm_dtw(zx, zy) - testing::ref_dtw(zx, zy)) < 1e-9);
        REQUIRE(std::abs(evaluate_segments(parse_measure("dtw"), x, y) - testing::ref_dtw(zx, zy)) < 1e-9);
    }
}

TEST_CASE("dtw band", "[dissimilarity][dtw]") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 300; ++trial) {
        auto x = testing::ref_znorm(random_vector(gen, 40));
        auto y = testing::ref_znorm(random_vector(gen, 30 + static_cast<std::size_t>(trial % 15)));
        const double full = norm_dtw(x, y);
        const double wide = norm_dtw(x, y, 100);
        const double narrow = norm_dtw(x, y, 2);
        REQUIRE(wide == Approx(full).margin(1e-12));
        REQUIRE(narrow >= full - 1e-12);
        REQUIRE(std::isfinite(narrow));
    }
    // band 0 on equal lengths is the diagonal path, i.e. plain Euclidean
    auto x = testing::ref_znorm(random_vector(gen, 25));
    auto y = testing::ref_znorm(random_vector(gen, 25));
    double sq = 0;
    for (std::size_t i = 0; i < 25; ++i) sq += (x[i] - y[i]) * (x[i] - y[i]);
    REQUIRE(norm_dtw(x, y, 0) == Approx(std::sqrt(sq) / 25.0).margin(1e-12));
}

TEST_CASE("measure properties", "[dissimilarity][property]") {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<std::size_t> len(3, 60);
    std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-50, 50);
    const auto zeuclid = parse_measure("zeuclid");
    const auto dtw = parse_measure("dtw");
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = random_vector(gen, len(gen));
        auto y = random_vector(gen, len(gen));
        for (const auto& m : {zeuclid, dtw}) {
            const double dxy = evaluate_segments(m, x, y);
            REQUIRE(dxy >= 0.0);
            REQUIRE(evaluate_segments(m, y, x) == Approx(dxy).margin(1e-12));
            REQUIRE(evaluate_segments(m, x, x) == 0.0);
        }
        const double alpha = scale(gen), beta = shift(gen);
        std::vector<double> ax(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) ax[i] = alpha * x[i] + beta;
        REQUIRE(znorm_euclidean(x, ax) < 1e-9);

        // warping never costs more than the diagonal path
        auto y2 = random_vector(gen, x.size());
        const auto zx = testing::ref_znorm(x), zy = testing::ref_znorm(y2);
        REQUIRE(norm_dtw(zx, zy) <= znorm_euclidean(x, y2) + 1e-12);
    }
}

TEST_CASE("constant segments", "[dissimilarity]") {
    const std::vector<double> flat(10, 4.0), flat2(12, -1.0);
    REQUIRE(znorm_euclidean(flat, flat2) == 0.0);
    REQUIRE(evaluate_segments(parse_measure("dtw"), flat, flat2) == 0.0);
    std::vector<double> ramp(10);
    for (std::size_t i = 0; i < 10; ++i) ramp[i] = static_cast<double>(i);
    // all-zeros vs a unit-variance vector of length 10: sqrt(10)/10
    REQUIRE(znorm_euclidean(flat, ramp) == Approx(std::sqrt(10.0) / 10.0).margin(1e-12));
}

TEST_CASE("length normalization under sample duplication", "[dissimilarity][property]") {
    // Repeating every sample keeps mean and sigma, doubles the squared sum and
    // doubles the length, so the value scales by exactly 1/sqrt(2).
    std::mt19937_64 gen(8);
    std::uniform_int_distribution<std::size_t> len(10, 80);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t w = len(gen);
        auto x = smooth_vector(gen, w);
        auto y = smooth_vector(gen, w);
        std::vector<double> x2, y2;
        for (std::size_t i = 0; i < w; ++i) {
            x2.insert(x2.end(), {x[i], x[i]});
            y2.insert(y2.end(), {y[i], y[i]});
        }
        const double d = znorm_euclidean(x, y);
        REQUIRE(znorm_euclidean(x2, y2) == Approx(d / std::sqrt(2.0)).margin(1e-12));
    }
}

TEST_CASE("unequal lengths upsample the shorter segment", "[dissimilarity][zeuclid]") {
    std::mt19937_64 gen(4);
    auto x = smooth_vector(gen, 40);
    auto y = smooth_vector(gen, 55);
    auto up = upsample(x, 55);
    REQUIRE(znorm_euclidean(x, y) == Approx(znorm_euclidean(up, y)).margin(1e-14));
    // normalizing before upsampling gives the same value
    auto pre = upsample(z_normalize(x), 55);
    REQUIRE(znorm_euclidean(x, y) == Approx(znorm_euclidean(pre, y)).margin(1e-12));
}

TEST_CASE("series fitness binds a measure", "[dissimilarity]") {
    std::vector<double> v(100);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 4);
    TimeSeries z(v);
    SeriesFitness f(z, DissimilarityMeasure{});
    REQUIRE(f(MotifCoords{1, 4, 9, 4}) == 0.0);
    REQUIRE(f(MotifCoords{1, 4, 10, 4}) > 0.0);
    REQUIRE(f.measure().kind == MeasureKind::znorm_euclidean);
}
