#pragma once

#include "swarmmotif/motif_store.hpp"
#include "swarmmotif/random.hpp"
#include "swarmmotif/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swarmmotif {

/// Any callable producing U(0,1) reals; Random satisfies it.
template <class U>
concept UniformSource = std::invocable<U&> && std::convertible_to<std::invoke_result_t<U&>, double>;

// ----------------------------------------------------------------------------
// Configuration

enum class Topology { gbest, lbest_ring, von_neumann, random3, wheel, btree };

inline Topology parse_topology(std::string_view name) {
    if (name == "gbest") return Topology::gbest;
    if (name == "lbest-ring" || name == "lbest") return Topology::lbest_ring;
    if (name == "von-neumann") return Topology::von_neumann;
    if (name == "random3") return Topology::random3;
    if (name == "wheel") return Topology::wheel;
    if (name == "btree") return Topology::btree;
    throw std::invalid_argument("unknown topology '" + std::string(name) + "'");
}

inline std::string to_string(Topology t) {
    switch (t) {
        case Topology::gbest: return "gbest";
        case Topology::lbest_ring: return "lbest-ring";
        case Topology::von_neumann: return "von-neumann";
        case Topology::random3: return "random3";
        case Topology::wheel: return "wheel";
        case Topology::btree: return "btree";
    }
    return "?";
}

inline std::size_t min_particles(Topology t) {
    return (t == Topology::von_neumann || t == Topology::random3) ? 4 : 2;
}

/**
 * Optimizer parameters. kappa and tau of 0 select the task-adaptive values
 * from adaptive_defaults(). The remaining defaults are the tuned settings:
 * ring topology, phi = 4.05, velocity clamping on, craziness 0.002.
 */
struct SwarmConfig {
    std::size_t kappa = 0;
    Topology topology = Topology::lbest_ring;
    double phi = 4.05;
    std::size_t tau = 0;
    double alpha = 0.5;
    double rho = 0.002;
    bool clamp_velocity = true;
    bool stochastic_inertia = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(phi > 4.0)) throw std::invalid_argument("constriction constant phi must exceed 4");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
        if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
        if (kappa != 0 && kappa < min_particles(topology)) {
            throw std::invalid_argument("topology " + to_string(topology) + " needs at least " +
                                        std::to_string(min_particles(topology)) + " particles");
        }
    }
};

struct AdaptiveSize {
    std::size_t kappa;
    std::size_t tau;
};

/**
 * Swarm size grows with series length, length range and k; the stagnation
 * threshold is proportional to the swarm size.
 *   kappa = clamp(round(50 + n/10000 + w_delta/10 + 2k), 50, 400), tau = 20 kappa
 */
inline AdaptiveSize adaptive_defaults(Index n, Index w_delta, std::size_t k) {
    const double raw = 50.0 + static_cast<double>(n) / 10000.0 + static_cast<double>(w_delta) / 10.0 +
                       2.0 * static_cast<double>(k);
    const auto kappa = static_cast<std::size_t>(std::clamp(std::round(raw), 50.0, 400.0));
    return {kappa, 20 * kappa};
}

// ----------------------------------------------------------------------------
// Constriction

struct UpdateConstants {
    double c0;
    double c1;
    double c2;
};

/// Clerc constriction; alpha weighs the social term (0.5 gives c1 == c2).
inline UpdateConstants get_constants(double phi, double alpha = 0.5) {
    if (!(phi > 4.0)) throw std::invalid_argument("constriction requires phi > 4");
    const double c0 = 2.0 / std::abs(2.0 - phi - std::sqrt(phi * phi - 4.0 * phi));
    return {c0, c0 * phi * (1.0 - alpha), c0 * phi * alpha};
}

// ----------------------------------------------------------------------------
// Positions

/// Floors x component-wise; nullopt unless the result is an admissible motif.
inline std::optional<MotifCoords> floor_position(const Vec4& x, const SearchBounds& bounds) noexcept {
    const auto limit = static_cast<double>(bounds.n) + 1.0;
    for (double c : x) {
        if (!(c >= 1.0 && c < limit)) return std::nullopt;  // also rejects NaN
    }
    MotifCoords m{static_cast<Index>(std::floor(x[0])), static_cast<Index>(std::floor(x[1])),
                  static_cast<Index>(std::floor(x[2])), static_cast<Index>(std::floor(x[3]))};
    if (!bounds.admits(m)) return std::nullopt;
    return m;
}

inline bool valid_position(const Vec4& x, const SearchBounds& bounds) noexcept {
    return floor_position(x, bounds).has_value();
}

/**
 * One random position: lengths uniform over [w_min, w_max+1), first start
 * from the triangular law 1 + (n - w_a)(1 - sqrt(u)), second start uniform
 * over the room left after the first segment. Draws may still be invalid at
 * the far right edge; callers route them through valid_position().
 */
template <UniformSource U>
Vec4 draw_position(const SearchBounds& bounds, U& u01) {
    const auto n = static_cast<double>(bounds.n);
    const auto w_min = static_cast<double>(bounds.w_min);
    const auto span = static_cast<double>(bounds.w_max + 1 - bounds.w_min);
    Vec4 x{};
    x[1] = w_min + span * u01();
    if (bounds.equal_lengths) {
        x[3] = x[1];
    } else if (bounds.has_max_stretch()) {
        const Index wa = static_cast<Index>(std::floor(x[1]));
        const Index lo = std::max(bounds.w_min, wa - bounds.max_stretch);
        const Index hi = std::min(bounds.w_max, wa + bounds.max_stretch);
        x[3] = static_cast<double>(lo) + static_cast<double>(hi + 1 - lo) * u01();
    } else {
        x[3] = w_min + span * u01();
    }
    x[0] = 1.0 + (n - x[1]) * (1.0 - std::sqrt(u01()));
    const double after_first = x[0] + x[1];
    x[2] = after_first + 1.0 + (n - x[3] - after_first) * u01();
    return x;
}

/// Difference of two independent random positions.
template <UniformSource U>
Vec4 draw_velocity(const SearchBounds& bounds, U& u01) {
    const Vec4 from = draw_position(bounds, u01);
    const Vec4 to = draw_position(bounds, u01);
    return {to[0] - from[0], to[1] - from[1], to[2] - from[2], to[3] - from[3]};
}

// ----------------------------------------------------------------------------
// Swarm state

struct Particle {
    Vec4 x{};
    Vec4 v{};
    Vec4 p{};
    double s = std::numeric_limits<double>::infinity();
};

/// Per-particle neighbor indices (0-based, ascending).
using Neighborhoods = std::vector<std::vector<std::size_t>>;

template <UniformSource U>
std::vector<Particle> initialize_swarm(const SearchBounds& bounds, std::size_t kappa, U& u01) {
    if (!bounds.feasible()) bounds.require_feasible();
    std::vector<Particle> swarm(kappa);
    for (auto& particle : swarm) {
        particle.x = draw_position(bounds, u01);
        const Vec4 other = draw_position(bounds, u01);
        for (int j = 0; j < 4; ++j) particle.v[j] = other[j] - particle.x[j];
        particle.s = std::numeric_limits<double>::infinity();
        particle.p = particle.x;
    }
    return swarm;
}

template <UniformSource U>
Neighborhoods initialize_topology(Topology topology, std::size_t kappa, U& u01) {
    if (kappa < min_particles(topology)) {
        throw std::invalid_argument("topology " + to_string(topology) + " needs at least " +
                                    std::to_string(min_particles(topology)) + " particles, got " +
                                    std::to_string(kappa));
    }
    Neighborhoods nb(kappa);
    auto add = [&](std::size_t i, std::size_t j) {
        if (i != j) nb[i].push_back(j);
    };
    switch (topology) {
        case Topology::gbest:
            for (std::size_t i = 0; i < kappa; ++i)
                for (std::size_t j = 0; j < kappa; ++j) add(i, j);
            break;
        case Topology::lbest_ring:
            for (std::size_t i = 0; i < kappa; ++i) {
                add(i, (i + kappa - 1) % kappa);
                add(i, (i + 1) % kappa);
            }
            break;
        case Topology::von_neumann: {
            // wrapped lattice with near-square row length
            const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(kappa))));
            for (std::size_t i = 0; i < kappa; ++i) {
                add(i, (i + 1) % kappa);
                add(i, (i + kappa - 1) % kappa);
                add(i, (i + cols) % kappa);
                add(i, (i + kappa - cols % kappa) % kappa);
            }
            break;
        }
        case Topology::random3:
            for (std::size_t i = 0; i < kappa; ++i) {
                while (nb[i].size() < 3) {
                    auto j = static_cast<std::size_t>(u01() * static_cast<double>(kappa));
                    if (j >= kappa) j = kappa - 1;
                    if (j != i && std::find(nb[i].begin(), nb[i].end(), j) == nb[i].end()) nb[i].push_back(j);
                }
            }
            break;
        case Topology::wheel:
            for (std::size_t j = 1; j < kappa; ++j) {
                add(0, j);
                add(j, 0);
            }
            break;
        case Topology::btree:
            // heap layout, 1-based: parent i/2, children 2i and 2i+1
            for (std::size_t i = 1; i <= kappa; ++i) {
                if (i > 1) add(i - 1, i / 2 - 1);
                if (2 * i <= kappa) add(i - 1, 2 * i - 1);
                if (2 * i + 1 <= kappa) add(i - 1, 2 * i);
            }
            break;
    }
    for (auto& list : nb) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return nb;
}

/// Scan starts at i; any neighbor with s_j <= s_g takes over, so ties go to the last scanned.
inline std::size_t best_neighbor(std::size_t i, const std::vector<Particle>& swarm, const Neighborhoods& nb) {
    std::size_t g = i;
    for (std::size_t j : nb[i]) {
        if (swarm[j].s <= swarm[g].s) g = j;
    }
    return g;
}

inline void clamp_velocity(Vec4& v, const SearchBounds& bounds) noexcept {
    const double series = static_cast<double>(bounds.n) / 2.0;
    const double lengths = static_cast<double>(bounds.w_delta()) / 2.0;
    const double range[4] = {series, lengths, series, lengths};
    for (int j = 0; j < 4; ++j) v[j] = std::min(range[j], std::max(-range[j], v[j]));
}

/// Counters for instrumentation of the update rule.
struct UpdateTally {
    std::size_t updates = 0;
    std::size_t redrawn_components = 0;
};

/**
 * Velocity and position update for one particle toward its own best p and
 * the neighborhood best p_g, followed by the enabled variants: stochastic
 * inertia, clamping to [n, w_delta, n, w_delta]/2, and per-component
 * craziness with probability rho.
 */
template <UniformSource U>
void update_particle(Particle& particle, const Vec4& p_g, const UpdateConstants& k, const SwarmConfig& config,
                     const SearchBounds& bounds, U& u01, UpdateTally* tally = nullptr) {
    const double inertia = config.stochastic_inertia ? (1.0 - 2.0 * (1.0 - k.c0)) * u01() : k.c0;
    for (int j = 0; j < 4; ++j) {
        const double u1 = u01();
        const double u2 = u01();
        particle.v[j] = inertia * particle.v[j] + k.c1 * u1 * (particle.p[j] - particle.x[j]) +
                        k.c2 * u2 * (p_g[j] - particle.x[j]);
    }
    if (config.clamp_velocity) clamp_velocity(particle.v, bounds);
    if (config.rho > 0.0) {
        bool redraw[4];
        bool any = false;
        for (int j = 0; j < 4; ++j) {
            redraw[j] = u01() < config.rho;
            any = any || redraw[j];
        }
        if (any) {
            const Vec4 fresh = draw_velocity(bounds, u01);
            for (int j = 0; j < 4; ++j) {
                if (!redraw[j]) continue;
                particle.v[j] = fresh[j];
                if (tally) ++tally->redrawn_components;
            }
        }
    }
    if (bounds.equal_lengths) particle.v[3] = particle.v[1];
    for (int j = 0; j < 4; ++j) particle.x[j] += particle.v[j];
    if (bounds.equal_lengths) particle.x[3] = particle.x[1];
    if (tally) ++tally->updates;
}

// ----------------------------------------------------------------------------
// Engine

struct EngineOptions {
    std::size_t queue_capacity = 0;  ///< 0: MotifQueue::default_capacity(k)
    std::size_t cache_capacity = PositionCache::default_capacity;
    bool use_cache = true;
    double overlap_fraction = 0.0;
};

struct EngineStats {
    std::size_t evaluations = 0;  ///< fitness invocations (cache hits excluded)
    std::size_t cache_hits = 0;
    std::size_t invalid_positions = 0;
    std::size_t restarts = 0;
    UpdateTally updates;
};

/**
 * Anytime particle-swarm motif search. Each step() runs one iteration: score
 * every particle at a valid position, push personal-best improvements into
 * the motif queue, move the particles, and reinitialize the swarm once the
 * global best has not improved for tau iterations. The queue and its
 * candidates survive restarts; the visited-position cache does not.
 *
 * Fitness is any callable double(const MotifCoords&); it is only ever
 * invoked on coordinates admitted by the search bounds.
 */
template <class Fitness>
    requires std::invocable<Fitness&, const MotifCoords&>
class SwarmMotif {
public:
    SwarmMotif(Fitness fitness, SearchBounds bounds, std::size_t k, SwarmConfig config, EngineOptions options = {})
        : fitness_(std::move(fitness)),
          bounds_(bounds),
          k_(k),
          config_(config),
          options_(options),
          rng_(config.seed),
          queue_(bounds.n, k, options.queue_capacity),
          cache_(options.cache_capacity) {
        if (k == 0) throw std::invalid_argument("k must be at least 1");
        bounds_.require_feasible();
        config_.validate();
        const auto adaptive = adaptive_defaults(bounds_.n, bounds_.w_delta(), k_);
        kappa_ = config_.kappa != 0 ? config_.kappa : adaptive.kappa;
        tau_ = config_.tau != 0 ? config_.tau : 20 * kappa_;
        if (kappa_ < min_particles(config_.topology)) {
            throw std::invalid_argument("too few particles for topology " + to_string(config_.topology));
        }
        constants_ = get_constants(config_.phi, config_.alpha);
        swarm_ = initialize_swarm(bounds_, kappa_, rng_);
        neighbors_ = initialize_topology(config_.topology, kappa_, rng_);
    }

    void step() {
        ++t_;
        for (auto& particle : swarm_) {
            const auto m = floor_position(particle.x, bounds_);
            if (!m) {
                ++stats_.invalid_positions;
                continue;
            }
            const double d = score(*m);
            if (d < particle.s) {
                particle.s = d;
                particle.p = particle.x;
                queue_.push(d, *m);
                if (d < s_star_) {
                    s_star_ = d;
                    t_update_ = t_;
                }
            }
        }
        for (std::size_t i = 0; i < swarm_.size(); ++i) {
            const std::size_t g = best_neighbor(i, swarm_, neighbors_);
            const Vec4 p_g = swarm_[g].p;
            update_particle(swarm_[i], p_g, constants_, config_, bounds_, rng_, &stats_.updates);
        }
        if (t_ - t_update_ >= tau_) restart();
    }

    /// Current best non-overlapping motifs; callable at any time.
    [[nodiscard]] MotifSet top_k() const { return queue_.top_k(k_, options_.overlap_fraction); }

    [[nodiscard]] std::size_t iteration() const noexcept { return t_; }
    [[nodiscard]] std::size_t kappa() const noexcept { return kappa_; }
    [[nodiscard]] std::size_t tau() const noexcept { return tau_; }
    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    [[nodiscard]] double global_best() const noexcept { return s_star_; }
    [[nodiscard]] std::size_t last_improvement() const noexcept { return t_update_; }
    [[nodiscard]] const UpdateConstants& constants() const noexcept { return constants_; }
    [[nodiscard]] const std::vector<Particle>& particles() const noexcept { return swarm_; }
    [[nodiscard]] const Neighborhoods& neighbors() const noexcept { return neighbors_; }
    [[nodiscard]] const MotifQueue& queue() const noexcept { return queue_; }
    [[nodiscard]] const PositionCache& cache() const noexcept { return cache_; }
    [[nodiscard]] const EngineStats& stats() const noexcept { return stats_; }
    [[nodiscard]] const SearchBounds& bounds() const noexcept { return bounds_; }
    [[nodiscard]] const SwarmConfig& config() const noexcept { return config_; }

private:
    double score(const MotifCoords& m) {
        if (!options_.use_cache) {
            ++stats_.evaluations;
            return fitness_(m);
        }
        const std::size_t hits_before = cache_.hits();
        const double d = cache_.lookup_or_insert(m, [&] {
            ++stats_.evaluations;
            return fitness_(m);
        });
        stats_.cache_hits += cache_.hits() - hits_before;
        return d;
    }

    void restart() {
        swarm_ = initialize_swarm(bounds_, kappa_, rng_);
        s_star_ = std::numeric_limits<double>::infinity();
        t_update_ = t_;
        cache_.clear();
        ++stats_.restarts;
    }

    Fitness fitness_;
    SearchBounds bounds_;
    std::size_t k_;
    SwarmConfig config_;
    EngineOptions options_;
    Random rng_;
    MotifQueue queue_;
    PositionCache cache_;
    UpdateConstants constants_{};
    std::size_t kappa_ = 0;
    std::size_t tau_ = 0;
    std::vector<Particle> swarm_;
    Neighborhoods neighbors_;
    double s_star_ = std::numeric_limits<double>::infinity();
    std::size_t t_ = 0;
    std::size_t t_update_ = 0;
    EngineStats stats_;
};

// ----------------------------------------------------------------------------
// Anytime driver

struct Snapshot {
    std::size_t iteration = 0;
    double elapsed_ms = 0.0;
    std::size_t evaluations = 0;
    MotifSet top;
};

class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void on_snapshot(const Snapshot& snapshot) = 0;
};

struct RunOptions {
    std::size_t t_max = 0;
    std::size_t snapshot_interval = 100;
    /// Soft wall-clock cutoff in seconds, checked at snapshot boundaries.
    std::optional<double> time_budget_s;
    /// Report wall-clock time in snapshots; when false elapsed_ms is 0.
    bool record_time = true;
    /// Early stop, evaluated on each snapshot.
    std::function<bool(const MotifSet&)> stop;
};

struct RunResult {
    MotifSet motifs;
    std::size_t iterations = 0;
    EngineStats stats;
    bool stopped_by_criterion = false;
    bool out_of_time = false;
};

template <class Fitness>
RunResult run(SwarmMotif<Fitness>& engine, const RunOptions& options, TraceSink* sink = nullptr) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const std::size_t interval = std::max<std::size_t>(1, options.snapshot_interval);
    RunResult result;
    while (engine.iteration() < options.t_max) {
        engine.step();
        const std::size_t t = engine.iteration();
        if (t % interval != 0 && t != options.t_max) continue;

        const double elapsed = std::chrono::duration<double, std::milli>(clock::now() - start).count();
        Snapshot snap{t, options.record_time ? elapsed : 0.0, engine.stats().evaluations, engine.top_k()};
        if (sink) sink->on_snapshot(snap);
        if (options.stop && options.stop(snap.top)) {
            result.stopped_by_criterion = true;
            break;
        }
        if (options.time_budget_s && elapsed >= *options.time_budget_s * 1000.0) {
            result.out_of_time = true;
            break;
        }
    }
    result.motifs = engine.top_k();
    result.iterations = engine.iteration();
    result.stats = engine.stats();
    return result;
}

}  // namespace swarmmotif
