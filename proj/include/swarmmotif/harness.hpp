#pragma once

#include "swarmmotif/dissimilarity.hpp"
#include "swarmmotif/landscape.hpp"
#include "swarmmotif/oracle.hpp"
#include "swarmmotif/series.hpp"
#include "swarmmotif/stats.hpp"
#include "swarmmotif/swarm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmmotif {

enum ExitStatus : int {
    exit_ok = 0,
    exit_failure = 1,     ///< I/O or unexpected runtime error
    exit_usage = 2,       ///< invalid run specification
    exit_shortfall = 3,   ///< fewer than k non-overlapping motifs found
    exit_infeasible = 4,  ///< no valid motif fits the series
    exit_budget = 5,      ///< exhaustive search over budget
};

/// Which reading of "95% of the motifs within M*" gates early stopping.
enum class StopRule {
    band,    ///< d <= max(M*)
    ranked,  ///< d_i <= D(m_i)* rank by rank
};

/**
 * True when at least ceil(fraction * k) of the current top-k dissimilarities
 * fall inside the reference region. Requires at least one current motif.
 */
inline bool stop_when_within_reference(const std::vector<double>& current, const std::vector<double>& reference,
                                       std::size_t k, double fraction = 0.95, StopRule rule = StopRule::band) {
    if (reference.empty()) throw std::invalid_argument("reference motif set is empty");
    if (current.empty()) return false;
    // the epsilon keeps products like 0.9 * 10 from rounding up a whole motif
    const auto needed = static_cast<std::size_t>(std::max(0.0, std::ceil(fraction * static_cast<double>(k) - 1e-9)));
    std::size_t inside = 0;
    if (rule == StopRule::band) {
        const double ceiling = *std::max_element(reference.begin(), reference.end());
        for (double d : current) inside += d <= ceiling ? 1 : 0;
    } else {
        for (std::size_t i = 0; i < current.size() && i < reference.size(); ++i) {
            inside += current[i] <= reference[i] ? 1 : 0;
        }
    }
    return inside >= needed;
}

// ----------------------------------------------------------------------------
// File formats

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// "rank,a,w_a,b,w_b,d" with 1-based indices and d at 12 significant digits.
inline void write_motif_csv(std::ostream& os, const MotifSet& set) {
    os << "rank,a,w_a,b,w_b,d\n";
    std::size_t rank = 1;
    for (const auto& m : set.motifs) {
        os << rank++ << ',' << m.a() << ',' << m.w_a() << ',' << m.b() << ',' << m.w_b() << ','
           << format_real(m.d()) << '\n';
    }
}

inline MotifSet read_motif_csv(std::istream& is) {
    MotifSet set;
    std::string line;
    if (!std::getline(is, line) || detail::trim(line) != "rank,a,w_a,b,w_b,d") {
        throw std::runtime_error("motif file must start with header 'rank,a,w_a,b,w_b,d'");
    }
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        auto view = detail::trim(line);
        if (view.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss{std::string(view)};
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 6) throw std::runtime_error("motif file row " + std::to_string(row) + " needs 6 fields");
        auto num = [&](const std::string& s) {
            auto v = detail::parse_real(detail::trim(s));
            if (!v) throw std::runtime_error("motif file row " + std::to_string(row) + ": bad number '" + s + "'");
            return *v;
        };
        auto idx = [&](const std::string& s) {
            double v = num(s);
            if (v != std::floor(v)) throw std::runtime_error("motif file row " + std::to_string(row) + ": bad index");
            return static_cast<Index>(v);
        };
        set.motifs.emplace_back(MotifCoords{idx(fields[1]), idx(fields[2]), idx(fields[3]), idx(fields[4])},
                                num(fields[5]));
    }
    set.requested = set.motifs.size();
    return set;
}

inline MotifSet load_motif_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_motif_csv(in);
}

/**
 * Streams snapshots as flat CSV: iteration, elapsed_ms, evaluations, found,
 * best_d, p05, p50, p95, then (a, w_a, b, w_b, d) for ranks 1..k. Cells of
 * missing ranks are left empty.
 */
class CsvTraceWriter : public TraceSink {
public:
    CsvTraceWriter(std::ostream& os, std::size_t k) : os_(os), k_(k) {
        os_ << "iteration,elapsed_ms,evaluations,found,best_d,p05,p50,p95";
        for (std::size_t r = 1; r <= k_; ++r) {
            os_ << ",a" << r << ",w_a" << r << ",b" << r << ",w_b" << r << ",d" << r;
        }
        os_ << '\n';
    }

    void on_snapshot(const Snapshot& snap) override {
        char elapsed[32];
        std::snprintf(elapsed, sizeof elapsed, "%.3f", snap.elapsed_ms);
        os_ << snap.iteration << ',' << elapsed << ',' << snap.evaluations << ',' << snap.top.size();
        if (snap.top.empty()) {
            os_ << ",,,,";
        } else {
            const auto s = spread(snap.top.dissimilarities());
            os_ << ',' << format_real(snap.top.motifs.front().d()) << ',' << format_real(s.p05) << ','
                << format_real(s.p50) << ',' << format_real(s.p95);
        }
        for (std::size_t r = 0; r < k_; ++r) {
            if (r < snap.top.size()) {
                const auto& m = snap.top.motifs[r];
                os_ << ',' << m.a() << ',' << m.w_a() << ',' << m.b() << ',' << m.w_b() << ',' << format_real(m.d());
            } else {
                os_ << ",,,,,";
            }
        }
        os_ << '\n';
        os_.flush();
    }

private:
    std::ostream& os_;
    std::size_t k_;
};

/// One parsed trace row: the columns needed to re-check stopping offline.
struct TraceRow {
    std::size_t iteration = 0;
    double elapsed_ms = 0.0;
    std::size_t evaluations = 0;
    std::optional<double> best_d;
    std::optional<double> p50;
    std::vector<double> d;  ///< found dissimilarities, ranks 1..found
};

inline std::vector<TraceRow> read_trace_csv(std::istream& is) {
    std::vector<TraceRow> rows;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trace is empty");
    while (std::getline(is, line)) {
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            auto pos = line.find(',', start);
            f.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (f.size() < 8) throw std::runtime_error("malformed trace row");
        TraceRow row;
        row.iteration = std::stoull(f[0]);
        row.elapsed_ms = std::stod(f[1]);
        row.evaluations = std::stoull(f[2]);
        const std::size_t found = std::stoull(f[3]);
        if (!f[4].empty()) row.best_d = std::stod(f[4]);
        if (!f[6].empty()) row.p50 = std::stod(f[6]);
        for (std::size_t r = 0; r < found; ++r) row.d.push_back(std::stod(f.at(8 + 5 * r + 4)));
        rows.push_back(std::move(row));
    }
    return rows;
}

// ----------------------------------------------------------------------------
// Run specification and commands

struct RunSpec {
    // input
    std::optional<std::string> input_path;
    std::optional<Index> random_walk_n;
    std::optional<std::uint64_t> walk_seed;  ///< defaults to swarm.seed
    CsvOptions csv;

    // task
    std::string measure = "zeuclid";
    Index dtw_band = -1;
    Index w_min = 0;
    Index w_max = 0;
    std::size_t k = 1;
    bool equal_lengths = false;
    Index max_stretch = -1;
    double overlap_fraction = 0.0;

    // budget
    std::optional<std::size_t> iterations;
    std::optional<double> time_budget_s;

    SwarmConfig swarm;

    // outputs
    std::size_t trace_interval = 100;
    std::optional<std::string> trace_path;
    std::optional<std::string> out_path;
    bool record_time = true;

    // reference gating
    std::optional<std::string> reference_path;
    double stop_fraction = 0.95;
    StopRule stop_rule = StopRule::band;

    // oracle / sampling
    std::uint64_t oracle_budget = 100'000'000;
    std::optional<std::size_t> sample_count;
};

/// Throws std::invalid_argument describing the first problem found.
inline void validate_task(const RunSpec& spec) {
    if (spec.input_path.has_value() == spec.random_walk_n.has_value()) {
        throw std::invalid_argument("exactly one of --input or --random-walk is required");
    }
    if (spec.w_min < 1) throw std::invalid_argument("--wmin must be at least 1");
    if (spec.w_min > spec.w_max) throw std::invalid_argument("--wmin must not exceed --wmax");
    if (spec.k < 1) throw std::invalid_argument("--k must be at least 1");
    if (spec.overlap_fraction < 0.0 || spec.overlap_fraction > 1.0) {
        throw std::invalid_argument("--overlap-fraction must lie in [0, 1]");
    }
    if (spec.max_stretch < -1) throw std::invalid_argument("--max-stretch must be non-negative");
    parse_measure(spec.measure, spec.dtw_band);
}

inline void validate_run(const RunSpec& spec) {
    validate_task(spec);
    if (!spec.iterations && !spec.time_budget_s) {
        throw std::invalid_argument("one of --iterations or --time-budget is required");
    }
    if (spec.time_budget_s && !(*spec.time_budget_s > 0.0)) {
        throw std::invalid_argument("--time-budget must be positive");
    }
    if (spec.stop_fraction < 0.0 || spec.stop_fraction > 1.0) {
        throw std::invalid_argument("--stop-fraction must lie in [0, 1]");
    }
    if (spec.trace_interval == 0) throw std::invalid_argument("trace interval must be positive");
    spec.swarm.validate();
}

inline TimeSeries load_input(const RunSpec& spec) {
    if (spec.input_path) return load_csv(*spec.input_path, spec.csv);
    return generate_random_walk(*spec.random_walk_n, spec.walk_seed.value_or(spec.swarm.seed));
}

inline SearchBounds bounds_for(const RunSpec& spec, Index n) {
    return SearchBounds{n, spec.w_min, spec.w_max, spec.equal_lengths, spec.max_stretch};
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const InfeasibleTask& e) {
        err << "error: " << e.what() << '\n';
        return exit_infeasible;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return exit_budget;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace detail

/**
 * Runs the swarm for a spec: streams the anytime trace, writes the final
 * motif set (to --out or stdout) and returns an ExitStatus. Nothing is
 * written unless the spec and its input validate.
 */
inline int run_command(const RunSpec& spec, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        validate_run(spec);
        const TimeSeries z = load_input(spec);
        const SearchBounds bounds = bounds_for(spec, z.size());
        bounds.require_feasible();
        const auto measure = parse_measure(spec.measure, spec.dtw_band);

        std::vector<double> reference;
        if (spec.reference_path) {
            reference = load_motif_csv(*spec.reference_path).dissimilarities();
            if (reference.empty()) throw std::invalid_argument("reference motif file has no rows");
        }

        EngineOptions engine_opts;
        engine_opts.overlap_fraction = spec.overlap_fraction;
        SwarmMotif engine(SeriesFitness(z, measure), bounds, spec.k, spec.swarm, engine_opts);

        RunOptions run_opts;
        run_opts.t_max = spec.iterations.value_or(std::numeric_limits<std::size_t>::max());
        run_opts.snapshot_interval = spec.trace_interval;
        run_opts.time_budget_s = spec.time_budget_s;
        run_opts.record_time = spec.record_time;
        if (!reference.empty()) {
            run_opts.stop = [&](const MotifSet& top) {
                return stop_when_within_reference(top.dissimilarities(), reference, spec.k, spec.stop_fraction,
                                                  spec.stop_rule);
            };
        }

        std::optional<std::ofstream> trace_file;
        std::optional<CsvTraceWriter> trace;
        if (spec.trace_path) {
            trace_file.emplace(detail::open_output(*spec.trace_path));
            trace.emplace(*trace_file, spec.k);
        }
        const RunResult result = run(engine, run_opts, trace ? &*trace : nullptr);

        if (spec.out_path) {
            auto file = detail::open_output(*spec.out_path);
            write_motif_csv(file, result.motifs);
        } else {
            write_motif_csv(out, result.motifs);
        }
        if (result.motifs.shortfall()) {
            err << "warning: found " << result.motifs.size() << " of " << spec.k << " non-overlapping motifs\n";
            return static_cast<int>(exit_shortfall);
        }
        return static_cast<int>(exit_ok);
    });
}

/// Exhaustive M*: motif CSV plus a "<out>.meta" sidecar with evaluation count and wall time.
inline int oracle_command(const RunSpec& spec, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        validate_task(spec);
        const TimeSeries z = load_input(spec);
        const SearchBounds bounds = bounds_for(spec, z.size());
        bounds.require_feasible();
        OracleOptions opts;
        opts.budget = spec.oracle_budget;
        opts.overlap_fraction = spec.overlap_fraction;
        const auto result = brute_force_topk(z, parse_measure(spec.measure, spec.dtw_band), bounds, spec.k, opts);

        if (spec.out_path) {
            auto file = detail::open_output(*spec.out_path);
            write_motif_csv(file, result.motifs);
            auto meta = detail::open_output(*spec.out_path + ".meta");
            char elapsed[32];
            std::snprintf(elapsed, sizeof elapsed, "%.3f", result.elapsed_ms);
            meta << "evaluations,search_space,elapsed_ms\n"
                 << result.evaluations << ',' << result.search_space << ',' << elapsed << '\n';
        } else {
            write_motif_csv(out, result.motifs);
        }
        return static_cast<int>(result.motifs.shortfall() ? exit_shortfall : exit_ok);
    });
}

/// Random-sampling reference: one CSV row "count,min,p05,p50,p95,max"; count defaults to n.
inline int sample_command(const RunSpec& spec, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        validate_task(spec);
        const TimeSeries z = load_input(spec);
        const SearchBounds bounds = bounds_for(spec, z.size());
        bounds.require_feasible();
        const std::size_t count = spec.sample_count.value_or(static_cast<std::size_t>(z.size()));
        Random rng(spec.swarm.seed);
        const auto ref = random_sample_reference(z, parse_measure(spec.measure, spec.dtw_band), bounds, count, rng);

        std::ostringstream row;
        row << "count,min,p05,p50,p95,max\n"
            << ref.count << ',' << format_real(ref.spread.min) << ',' << format_real(ref.spread.p05) << ','
            << format_real(ref.spread.p50) << ',' << format_real(ref.spread.p95) << ','
            << format_real(ref.spread.max) << '\n';
        if (spec.out_path) {
            auto file = detail::open_output(*spec.out_path);
            file << row.str();
        } else {
            out << row.str();
        }
        return static_cast<int>(exit_ok);
    });
}

/// Landscape slice as a CSV matrix (diagnostic).
inline int landscape_command(const RunSpec& spec, const LandscapeSlice& slice, std::ostream& out = std::cout,
                             std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        if (spec.input_path.has_value() == spec.random_walk_n.has_value()) {
            throw std::invalid_argument("exactly one of --input or --random-walk is required");
        }
        const TimeSeries z = load_input(spec);
        const auto matrix = slice_landscape(z, slice, parse_measure(spec.measure, spec.dtw_band));
        if (spec.out_path) {
            auto file = detail::open_output(*spec.out_path);
            write_landscape_csv(file, matrix, slice);
        } else {
            write_landscape_csv(out, matrix, slice);
        }
        return static_cast<int>(exit_ok);
    });
}

}  // namespace swarmmotif
