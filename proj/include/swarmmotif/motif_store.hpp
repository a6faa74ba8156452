#pragma once

#include "swarmmotif/types.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iterator>
#include <ranges>
#include <set>
#include <stdexcept>
#include <vector>

namespace swarmmotif {

// ----------------------------------------------------------------------------
// Overlap semantics

/// Number of shared samples between [s1, s1+w1-1] and [s2, s2+w2-1].
inline Index interval_intersection(Index s1, Index w1, Index s2, Index w2) noexcept {
    const Index lo = std::max(s1, s2);
    const Index hi = std::min(s1 + w1 - 1, s2 + w2 - 1);
    return hi >= lo ? hi - lo + 1 : 0;
}

/**
 * True when any of the four segment pairings of m1 and m2 intersect. With a
 * non-zero fraction f, a pairing only counts when the shared samples exceed
 * f times the shorter of its two segments.
 */
inline bool overlaps(const MotifCoords& m1, const MotifCoords& m2, double max_overlap_fraction = 0.0) {
    const Index s1[2] = {m1.a, m1.b};
    const Index w1[2] = {m1.w_a, m1.w_b};
    const Index s2[2] = {m2.a, m2.b};
    const Index w2[2] = {m2.w_a, m2.w_b};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Index shared = interval_intersection(s1[i], w1[i], s2[j], w2[j]);
            if (max_overlap_fraction <= 0.0) {
                if (shared > 0) return true;
            } else if (static_cast<double>(shared) >
                       max_overlap_fraction * static_cast<double>(std::min(w1[i], w2[j]))) {
                return true;
            }
        }
    }
    return false;
}

inline bool overlaps(const Motif& m1, const Motif& m2, double max_overlap_fraction = 0.0) {
    return overlaps(m1.coords(), m2.coords(), max_overlap_fraction);
}

// ----------------------------------------------------------------------------
// Non-overlapping top-k extraction

namespace detail {

class Occupancy {
public:
    explicit Occupancy(Index n) : marks_(static_cast<std::size_t>(n) + 2, 0) {}

    [[nodiscard]] bool free(const MotifCoords& m) const noexcept {
        return span_free(m.a, m.w_a) && span_free(m.b, m.w_b);
    }

    void mark(const MotifCoords& m, std::uint8_t value = 1) noexcept {
        fill(m.a, m.w_a, value);
        fill(m.b, m.w_b, value);
    }

    [[nodiscard]] Index size() const noexcept { return static_cast<Index>(marks_.size()) - 2; }

private:
    [[nodiscard]] bool span_free(Index s, Index w) const noexcept {
        const auto* p = marks_.data() + s;
        for (Index i = 0; i < w; ++i) {
            if (p[i]) return false;
        }
        return true;
    }
    void fill(Index s, Index w, std::uint8_t value) noexcept {
        std::fill_n(marks_.begin() + s, w, value);
    }

    std::vector<std::uint8_t> marks_;
};

}  // namespace detail

/**
 * Greedy scan over candidates sorted by ascending d: accept a candidate when
 * none of its samples is already claimed, stop after k accepts. Strict
 * non-overlap (fraction 0) uses a boolean occupancy array of size n; partial
 * overlap falls back to pairwise checks against the accepted motifs.
 */
template <std::ranges::input_range R>
    requires std::same_as<std::ranges::range_value_t<R>, Motif>
MotifSet top_k_nonoverlapping(const R& sorted, std::size_t k, Index n, double max_overlap_fraction = 0.0) {
    MotifSet out;
    out.requested = k;
    if (k == 0) return out;
    if (max_overlap_fraction <= 0.0) {
        detail::Occupancy occupied(n);
        for (const Motif& m : sorted) {
            if (!m.coords().fits(n)) throw std::invalid_argument("motif does not fit the series");
            if (!occupied.free(m.coords())) continue;
            occupied.mark(m.coords());
            out.motifs.push_back(m);
            if (out.motifs.size() == k) break;
        }
        return out;
    }
    for (const Motif& m : sorted) {
        bool clash = std::any_of(out.motifs.begin(), out.motifs.end(),
                                 [&](const Motif& kept) { return overlaps(kept, m, max_overlap_fraction); });
        if (clash) continue;
        out.motifs.push_back(m);
        if (out.motifs.size() == k) break;
    }
    return out;
}

// ----------------------------------------------------------------------------
// Motif priority queue

/**
 * Dissimilarity-ordered candidate store. Bounded: past capacity the worst
 * unprotected entry goes. Protected entries are the greedy non-overlapping
 * selection extended to max(k, capacity / 2) members; its first k are the
 * current top-k, so eviction never changes the selection, and the rest keep
 * spare disjoint candidates for when a better entry displaces selected ones.
 * Identical coordinates always carry identical d, so duplicates collapse.
 */
class MotifQueue {
public:
    using const_iterator = std::set<Motif>::const_iterator;

    static std::size_t default_capacity(std::size_t k) { return std::max<std::size_t>(100, 20 * k); }

    MotifQueue(Index n, std::size_t k, std::size_t capacity = 0)
        : n_(n), k_(k), capacity_(capacity == 0 ? default_capacity(k) : capacity), scratch_(n) {
        if (capacity_ <= k_) throw std::invalid_argument("queue capacity must exceed k");
    }

    /// Returns false when the candidate was already present.
    bool push(double d, const MotifCoords& m) {
        if (!m.fits(n_)) throw std::invalid_argument("queued motif does not fit the series");
        auto [it, inserted] = entries_.insert(Motif(m, d));
        if (!inserted) return false;
        if (entries_.size() > capacity_) evict_one();
        return true;
    }

    [[nodiscard]] MotifSet top_k(std::size_t k, double max_overlap_fraction = 0.0) const {
        return top_k_nonoverlapping(entries_, k, n_, max_overlap_fraction);
    }
    [[nodiscard]] MotifSet top_k() const { return top_k(k_); }

    [[nodiscard]] const_iterator begin() const noexcept { return entries_.begin(); }
    [[nodiscard]] const_iterator end() const noexcept { return entries_.end(); }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    [[nodiscard]] Index series_length() const noexcept { return n_; }
    [[nodiscard]] const Motif& best() const { return *entries_.begin(); }

private:
    void evict_one() {
        const std::size_t reserve = std::max(k_, capacity_ / 2);
        std::vector<const_iterator> selected;
        selected.reserve(reserve);
        for (auto it = entries_.begin(); it != entries_.end() && selected.size() < reserve; ++it) {
            if (!scratch_.free(it->coords())) continue;
            scratch_.mark(it->coords());
            selected.push_back(it);
        }
        for (auto s : selected) scratch_.mark(s->coords(), 0);

        // selected is ascending, so walk both from the back
        auto victim = std::prev(entries_.end());
        auto protect = selected.rbegin();
        while (protect != selected.rend() && *protect == victim) {
            --victim;
            ++protect;
        }
        entries_.erase(victim);
    }

    Index n_;
    std::size_t k_;
    std::size_t capacity_;
    std::set<Motif> entries_;
    detail::Occupancy scratch_;
};

// ----------------------------------------------------------------------------
// Visited-position cache

/**
 * Bounded hash table from floored coordinates to d. Open addressing with a
 * short probe window. A full window doubles the table while it is below its
 * final size of twice the capacity; after that, or once the table holds
 * capacity entries, an existing entry is overwritten. Below capacity an entry
 * is therefore only lost in the rare case of a full window at final size.
 * clear() is O(1) via a generation stamp.
 */
class PositionCache {
public:
    static constexpr std::size_t default_capacity = std::size_t{1} << 20;
    static constexpr std::size_t probe_window = 8;

    explicit PositionCache(std::size_t capacity = default_capacity) : capacity_(capacity) {
        if (capacity_ == 0) throw std::invalid_argument("cache capacity must be positive");
        max_slots_ = 2 * std::bit_ceil(capacity_);
        slots_.resize(std::min<std::size_t>(max_slots_, 1024));
    }

    /// Stored d for key, or compute() (stored before returning) on a miss.
    template <class Compute>
    double lookup_or_insert(const MotifCoords& key, Compute&& compute) {
        if (const double* hit = find(key)) {
            ++hits_;
            return *hit;
        }
        const double d = compute();
        insert(key, d);
        return d;
    }

    [[nodiscard]] const double* find(const MotifCoords& key) const noexcept {
        const std::size_t mask = slots_.size() - 1;
        std::size_t idx = MotifCoordsHash{}(key) & mask;
        const std::size_t window = std::min(probe_window, slots_.size());
        for (std::size_t p = 0; p < window; ++p, idx = (idx + 1) & mask) {
            const Slot& s = slots_[idx];
            if (s.generation == generation_ && s.key == key) return &s.d;
        }
        return nullptr;
    }

    void insert(const MotifCoords& key, double d) {
        if (size_ + 1 > slots_.size() / 2 && slots_.size() < max_slots_) grow();
        place(key, d);
    }

    /// Drops every entry in O(1).
    void clear() noexcept {
        if (++generation_ == 0) {
            std::fill(slots_.begin(), slots_.end(), Slot{});
            generation_ = 1;
        }
        size_ = 0;
    }

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] std::size_t hits() const noexcept { return hits_; }
    [[nodiscard]] std::size_t evictions() const noexcept { return evictions_; }

    [[nodiscard]] bool contains(const MotifCoords& key) const noexcept { return find(key) != nullptr; }

private:
    struct Slot {
        MotifCoords key;
        double d = 0.0;
        std::uint32_t generation = 0;
    };

    [[nodiscard]] bool live(std::size_t idx) const noexcept { return slots_[idx].generation == generation_; }

    void place(const MotifCoords& key, double d) {
        const std::size_t mask = slots_.size() - 1;
        const std::size_t home = MotifCoordsHash{}(key) & mask;
        const std::size_t window = std::min(probe_window, slots_.size());

        std::size_t first_dead = slots_.size();
        std::size_t first_live = slots_.size();
        for (std::size_t p = 0, idx = home; p < window; ++p, idx = (idx + 1) & mask) {
            if (live(idx)) {
                if (slots_[idx].key == key) {
                    slots_[idx].d = d;
                    return;
                }
                if (first_live == slots_.size()) first_live = idx;
            } else if (first_dead == slots_.size()) {
                first_dead = idx;
            }
        }

        if (size_ < capacity_) {
            if (first_dead != slots_.size()) {
                slots_[first_dead] = Slot{key, d, generation_};
                ++size_;
            } else if (slots_.size() < max_slots_) {
                grow();
                place(key, d);
            } else {
                slots_[home] = Slot{key, d, generation_};
                ++evictions_;
            }
            return;
        }
        ++evictions_;
        if (first_live != slots_.size()) {
            slots_[first_live] = Slot{key, d, generation_};
            return;
        }
        // Table is at capacity but this window is empty: retire the next live
        // entry further along, then take the home slot.
        for (std::size_t idx = (home + window) & mask;; idx = (idx + 1) & mask) {
            if (live(idx)) {
                slots_[idx].generation = 0;
                break;
            }
        }
        slots_[home] = Slot{key, d, generation_};
    }

    void grow() {
        std::vector<Slot> old(std::min(slots_.size() * 2, max_slots_));
        old.swap(slots_);
        size_ = 0;
        for (const Slot& s : old) {
            if (s.generation == generation_) place(s.key, s.d);
        }
    }

    std::size_t capacity_;
    std::size_t max_slots_;
    std::vector<Slot> slots_;
    std::size_t size_ = 0;
    std::uint32_t generation_ = 1;
    std::size_t hits_ = 0;
    std::size_t evictions_ = 0;
};

}  // namespace swarmmotif
