#pragma once

#include <cstdint>
#include <random>

namespace swarmmotif {

/**
 * Seeded random stream. Every stochastic routine in the library draws its
 * U(0,1) numbers through operator(), so the consumption order of one run is
 * fixed by the call sequence and a seed reproduces a run bit for bit.
 */
class Random {
public:
    explicit Random(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform real in [0, 1) with 53 random bits.
    double operator()() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept {
        auto v = static_cast<std::uint64_t>((*this)() * static_cast<double>(bound));
        return v < bound ? v : bound - 1;
    }

    double gaussian() { return normal_(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace swarmmotif
