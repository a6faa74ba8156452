#pragma once

#include "swarmmotif/dissimilarity.hpp"
#include "swarmmotif/series.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmmotif {

/// Which pair of coordinates stays fixed while the other two sweep a window.
enum class SliceAxes {
    fixed_starts,   ///< a, b fixed; rows sweep w_a, columns sweep w_b
    fixed_lengths,  ///< w_a, w_b fixed; rows sweep a, columns sweep b
};

struct LandscapeSlice {
    SliceAxes axes = SliceAxes::fixed_starts;
    Index first = 0;   ///< a or w_a
    Index second = 0;  ///< b or w_b
    Index lo = 0;      ///< inclusive sweep window, applied to both free axes
    Index hi = 0;
};

struct LandscapeMatrix {
    std::vector<Index> labels;  ///< row and column coordinate values
    std::vector<double> values; ///< row-major, labels.size()^2 entries

    [[nodiscard]] std::size_t dim() const noexcept { return labels.size(); }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return values[r * dim() + c]; }
};

/**
 * Evaluates D over a two-dimensional slice of the motif space for heatmap
 * inspection. Cells are plain segment-pair dissimilarities: the slice may
 * cross the a + w_a < b boundary, but every segment must lie inside z.
 */
inline LandscapeMatrix slice_landscape(const TimeSeries& z, const LandscapeSlice& slice,
                                       const DissimilarityMeasure& measure) {
    if (slice.hi < slice.lo) throw std::invalid_argument("landscape range is empty");
    const Index n = z.size();
    auto in_bounds = [n](Index start, Index len) { return start >= 1 && len >= 1 && start + len - 1 <= n; };

    LandscapeMatrix out;
    for (Index v = slice.lo; v <= slice.hi; ++v) out.labels.push_back(v);
    const std::size_t dim = out.labels.size();
    out.values.resize(dim * dim);

    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            Index a, wa, b, wb;
            if (slice.axes == SliceAxes::fixed_starts) {
                a = slice.first;
                b = slice.second;
                wa = out.labels[r];
                wb = out.labels[c];
            } else {
                wa = slice.first;
                wb = slice.second;
                a = out.labels[r];
                b = out.labels[c];
            }
            if (!in_bounds(a, wa) || !in_bounds(b, wb)) {
                throw std::invalid_argument("landscape cell (" + std::to_string(a) + ", " + std::to_string(wa) +
                                            ", " + std::to_string(b) + ", " + std::to_string(wb) +
                                            ") reaches outside the series");
            }
            out.values[r * dim + c] =
                evaluate_segments(measure, z.segment(a, wa).values, z.segment(b, wb).values);
        }
    }
    return out;
}

/// CSV with the column coordinates in the first row and row coordinates in the first column.
inline void write_landscape_csv(std::ostream& os, const LandscapeMatrix& m, const LandscapeSlice& slice) {
    os << (slice.axes == SliceAxes::fixed_starts ? "w_a\\w_b" : "a\\b");
    for (Index label : m.labels) os << ',' << label;
    os << '\n';
    char buf[32];
    for (std::size_t r = 0; r < m.dim(); ++r) {
        os << m.labels[r];
        for (std::size_t c = 0; c < m.dim(); ++c) {
            std::snprintf(buf, sizeof buf, "%.12g", m(r, c));
            os << ',' << buf;
        }
        os << '\n';
    }
}

}  // namespace swarmmotif
