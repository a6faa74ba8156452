#pragma once

#include "swarmmotif/series.hpp"
#include "swarmmotif/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace swarmmotif {

enum class MeasureKind { znorm_euclidean, norm_dtw };

/**
 * Length-normalized segment dissimilarity, the swarm's fitness function.
 *
 * znorm_euclidean: z-normalize, upsample the shorter segment to the longer
 * one, Euclidean distance divided by the common length.
 * norm_dtw: z-normalize, unconstrained (or Sakoe-Chiba banded) DTW with
 * squared local cost, square-rooted and divided by the longer length.
 */
struct DissimilarityMeasure {
    MeasureKind kind = MeasureKind::znorm_euclidean;
    /// Sakoe-Chiba half-width in samples; negative disables the band.
    Index dtw_band = -1;

    [[nodiscard]] std::string name() const {
        return kind == MeasureKind::znorm_euclidean ? "zeuclid" : "dtw";
    }
};

inline DissimilarityMeasure parse_measure(std::string_view name, Index dtw_band = -1) {
    if (name == "zeuclid") return {MeasureKind::znorm_euclidean, -1};
    if (name == "dtw") return {MeasureKind::norm_dtw, dtw_band};
    throw std::invalid_argument("unknown measure '" + std::string(name) + "' (expected zeuclid or dtw)");
}

namespace detail {

struct Moments {
    double mean = 0.0;
    double sigma = 0.0;
    bool constant = true;
};

inline Moments moments(std::span<const double> x) {
    const auto w = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= w;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    double sigma = std::sqrt(ss / w);
    bool constant = sigma <= 1e-12 * std::max(1.0, std::abs(mean));
    return {mean, sigma, constant};
}

// Squared Euclidean distance between the z-normalized forms of two
// equal-length vectors, without materializing them.
inline double znorm_sq_distance(std::span<const double> x, std::span<const double> y) {
    const auto mx = moments(x);
    const auto my = moments(y);
    const double sx = mx.constant ? 0.0 : 1.0 / mx.sigma;
    const double sy = my.constant ? 0.0 : 1.0 / my.sigma;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double diff = (x[i] - mx.mean) * sx - (y[i] - my.mean) * sy;
        acc += diff * diff;
    }
    return acc;
}

inline std::vector<double>& scratch(int slot) {
    thread_local std::vector<double> buffers[3];
    return buffers[slot];
}

}  // namespace detail

/**
 * Euclidean distance between z-normalized vectors divided by their length.
 * Unequal lengths are resolved by linearly upsampling the shorter input.
 */
inline double znorm_euclidean(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("znorm_euclidean: empty input");
    if (x.size() == y.size()) {
        return std::sqrt(detail::znorm_sq_distance(x, y)) / static_cast<double>(x.size());
    }
    auto shorter = x.size() < y.size() ? x : y;
    auto longer = x.size() < y.size() ? y : x;
    auto& buf = detail::scratch(0);
    buf.resize(longer.size());
    upsample_into(shorter, buf);
    return std::sqrt(detail::znorm_sq_distance(buf, longer)) / static_cast<double>(longer.size());
}

/**
 * Length-normalized DTW on inputs the caller has already z-normalized.
 * Local cost is the squared difference; the accumulated cost is square-rooted
 * and divided by max(|x|, |y|). band < 0 means unconstrained; otherwise cells
 * with |i - j| > max(band, ||x| - |y||) are excluded.
 */
inline double norm_dtw(std::span<const double> x, std::span<const double> y, Index band = -1) {
    if (x.empty() || y.empty()) throw std::invalid_argument("norm_dtw: empty input");
    const std::size_t n = x.size();
    const std::size_t m = y.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::size_t window = std::max(n, m);
    if (band >= 0) {
        window = std::max(static_cast<std::size_t>(band), n > m ? n - m : m - n);
    }

    auto& prev = detail::scratch(1);
    auto& curr = detail::scratch(2);
    prev.assign(m + 1, inf);
    curr.assign(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t j_lo = i > window ? i - window : 1;
        const std::size_t j_hi = std::min(m, i + window);
        curr[0] = inf;
        if (j_lo > 1) curr[j_lo - 1] = inf;
        const double xi = x[i - 1];
        for (std::size_t j = j_lo; j <= j_hi; ++j) {
            const double diff = xi - y[j - 1];
            const double best = std::min({prev[j - 1], prev[j], curr[j - 1]});
            curr[j] = diff * diff + best;
        }
        if (j_hi < m) curr[j_hi + 1] = inf;
        std::swap(prev, curr);
    }
    return std::sqrt(prev[m]) / static_cast<double>(std::max(n, m));
}

/// Dissimilarity of two arbitrary segments (no motif constraints applied).
inline double evaluate_segments(const DissimilarityMeasure& measure, std::span<const double> x,
                                std::span<const double> y) {
    switch (measure.kind) {
        case MeasureKind::znorm_euclidean:
            // Linear interpolation commutes with affine maps: normalizing,
            // upsampling and renormalizing equals upsampling then normalizing.
            return znorm_euclidean(x, y);
        case MeasureKind::norm_dtw: {
            thread_local std::vector<double> zx, zy;
            zx.resize(x.size());
            zy.resize(y.size());
            z_normalize_into(x, zx);
            z_normalize_into(y, zy);
            return norm_dtw(zx, zy, measure.dtw_band);
        }
    }
    throw std::logic_error("unhandled measure kind");
}

/// D(a, w_a, b, w_b) on series z. Throws on coordinates that are not a motif.
inline double evaluate(const DissimilarityMeasure& measure, const TimeSeries& z, const MotifCoords& m) {
    if (!m.fits(z.size())) {
        throw std::invalid_argument("evaluate: coordinates do not form a valid motif on this series");
    }
    return evaluate_segments(measure, z.segment(m.a, m.w_a).values, z.segment(m.b, m.w_b).values);
}

/// Binds a measure to a series; the callable form the engine and oracle use.
class SeriesFitness {
public:
    SeriesFitness(const TimeSeries& z, DissimilarityMeasure measure) : z_(&z), measure_(measure) {}

    double operator()(const MotifCoords& m) const { return evaluate(measure_, *z_, m); }

    [[nodiscard]] const TimeSeries& series() const noexcept { return *z_; }
    [[nodiscard]] const DissimilarityMeasure& measure() const noexcept { return measure_; }

private:
    const TimeSeries* z_;
    DissimilarityMeasure measure_;
};

}  // namespace swarmmotif
