#pragma once

#include <array>
#include <compare>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmmotif {

/// 1-based sample index or sample count.
using Index = std::int64_t;

/// Continuous particle coordinates (a, w_a, b, w_b).
using Vec4 = std::array<double, 4>;

/// Thrown when a task cannot produce any valid motif on the given series.
class InfeasibleTask : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when an exhaustive enumeration would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Integer motif coordinates: two segments [a, a+w_a-1] and [b, b+w_b-1],
 * 1-based. Ordering is lexicographic so it can serve as a tie breaker.
 */
struct MotifCoords {
    Index a = 0;
    Index w_a = 0;
    Index b = 0;
    Index w_b = 0;

    auto operator<=>(const MotifCoords&) const = default;

    /// Structural motif constraints that do not depend on the task.
    [[nodiscard]] bool well_formed() const noexcept {
        return a >= 1 && w_a >= 1 && w_b >= 1 && a + w_a < b;
    }

    [[nodiscard]] bool fits(Index n) const noexcept { return well_formed() && b + w_b - 1 <= n; }
};

struct MotifCoordsHash {
    std::size_t operator()(const MotifCoords& m) const noexcept {
        // splitmix-style mixing of the four coordinates
        auto mix = [](std::uint64_t h, std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= h >> 31;
            h *= 0xbf58476d1ce4e5b9ULL;
            return h;
        };
        std::uint64_t h = 0;
        h = mix(h, static_cast<std::uint64_t>(m.a));
        h = mix(h, static_cast<std::uint64_t>(m.w_a));
        h = mix(h, static_cast<std::uint64_t>(m.b));
        h = mix(h, static_cast<std::uint64_t>(m.w_b));
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

/**
 * A motif pair together with its dissimilarity. The constructor rejects
 * coordinates that would describe a trivial or repeated match.
 */
class Motif {
public:
    Motif(MotifCoords coords, double d) : coords_(coords), d_(d) {
        if (!coords.well_formed()) {
            throw std::invalid_argument("motif requires a >= 1, w_a, w_b >= 1 and a + w_a < b");
        }
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("motif dissimilarity must be finite and non-negative");
        }
    }

    [[nodiscard]] const MotifCoords& coords() const noexcept { return coords_; }
    [[nodiscard]] Index a() const noexcept { return coords_.a; }
    [[nodiscard]] Index w_a() const noexcept { return coords_.w_a; }
    [[nodiscard]] Index b() const noexcept { return coords_.b; }
    [[nodiscard]] Index w_b() const noexcept { return coords_.w_b; }
    [[nodiscard]] double d() const noexcept { return d_; }

    /// Total order: dissimilarity first, coordinates break ties.
    friend bool operator<(const Motif& lhs, const Motif& rhs) noexcept {
        if (lhs.d_ != rhs.d_) return lhs.d_ < rhs.d_;
        return lhs.coords_ < rhs.coords_;
    }
    friend bool operator==(const Motif& lhs, const Motif& rhs) noexcept {
        return lhs.d_ == rhs.d_ && lhs.coords_ == rhs.coords_;
    }

private:
    MotifCoords coords_;
    double d_;
};

/// Ordered, pairwise non-overlapping motifs m_1..m_k (ascending d).
struct MotifSet {
    std::vector<Motif> motifs;
    std::size_t requested = 0;

    [[nodiscard]] bool shortfall() const noexcept { return motifs.size() < requested; }
    [[nodiscard]] std::size_t size() const noexcept { return motifs.size(); }
    [[nodiscard]] bool empty() const noexcept { return motifs.empty(); }

    [[nodiscard]] std::vector<double> dissimilarities() const {
        std::vector<double> out;
        out.reserve(motifs.size());
        for (const auto& m : motifs) out.push_back(m.d());
        return out;
    }
};

/**
 * Task-level constraints on the motif space. valid_position() and the
 * exhaustive oracle both consult this.
 */
struct SearchBounds {
    Index n = 0;
    Index w_min = 0;
    Index w_max = 0;
    bool equal_lengths = false;
    Index max_stretch = -1;  ///< negative: unconstrained

    [[nodiscard]] Index w_delta() const noexcept { return w_max - w_min + 1; }
    [[nodiscard]] bool has_max_stretch() const noexcept { return max_stretch >= 0; }

    [[nodiscard]] bool admits(const MotifCoords& m) const noexcept {
        if (!m.fits(n)) return false;
        if (m.w_a < w_min || m.w_a > w_max || m.w_b < w_min || m.w_b > w_max) return false;
        if (equal_lengths && m.w_a != m.w_b) return false;
        if (has_max_stretch() && std::abs(m.w_a - m.w_b) > max_stretch) return false;
        return true;
    }

    /// A valid motif exists iff two shortest segments fit with a gap.
    [[nodiscard]] bool feasible() const noexcept {
        return w_min >= 1 && w_min <= w_max && n >= 2 * w_min + 1;
    }

    void require_feasible() const {
        if (w_min < 1 || w_min > w_max) {
            throw std::invalid_argument("segment length range requires 1 <= w_min <= w_max");
        }
        if (n < 2 * w_min + 1) {
            throw InfeasibleTask("series of length " + std::to_string(n) +
                                 " cannot hold two non-overlapping segments of length " +
                                 std::to_string(w_min));
        }
    }
};

}  // namespace swarmmotif
