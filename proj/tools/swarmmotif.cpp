// Command-line front end: run | oracle | sample | landscape.

#include "swarmmotif/swarmmotif.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace sm = swarmmotif;

namespace {

struct InputFlags {
    std::string input;
    sm::Index random_walk = 0;
    std::uint64_t walk_seed = 0;
    std::string missing = "strict";
    bool header = false;
    bool no_header = false;
};

void add_input_flags(CLI::App& app, InputFlags& in, sm::RunSpec& spec) {
    auto* input = app.add_option("--input", in.input, "CSV file, one sample per row");
    auto* walk = app.add_option("--random-walk", in.random_walk, "generate a random walk of N samples");
    input->excludes(walk);
    app.add_option("--walk-seed", in.walk_seed, "random walk seed (defaults to --seed)");
    app.add_option("--column", spec.csv.column, "0-based CSV column")->capture_default_str();
    app.add_option("--missing", in.missing, "missing-value policy")
        ->check(CLI::IsMember({"strict", "drop", "interpolate"}))
        ->capture_default_str();
    app.add_flag("--header", in.header, "first row is a header");
    app.add_flag("--no-header", in.no_header, "first row is data");
}

void add_task_flags(CLI::App& app, sm::RunSpec& spec) {
    app.add_option("--measure", spec.measure, "zeuclid or dtw")
        ->check(CLI::IsMember({"zeuclid", "dtw"}))
        ->capture_default_str();
    app.add_option("--dtw-band", spec.dtw_band, "Sakoe-Chiba half-width (samples)");
    app.add_option("--wmin", spec.w_min, "minimum segment length")->required();
    app.add_option("--wmax", spec.w_max, "maximum segment length")->required();
    app.add_option("--k", spec.k, "number of motifs")->capture_default_str();
    app.add_flag("--equal-lengths", spec.equal_lengths, "force w_a == w_b");
    app.add_option("--max-stretch", spec.max_stretch, "bound on |w_a - w_b|");
    app.add_option("--overlap-fraction", spec.overlap_fraction, "tolerated overlap between motifs")
        ->capture_default_str();
    app.add_option("--seed", spec.swarm.seed, "RNG seed")->capture_default_str();
    app.add_option("--out", spec.out_path, "output file (default: stdout)");
}

void finish_input(const InputFlags& in, sm::RunSpec& spec) {
    if (!in.input.empty()) spec.input_path = in.input;
    if (in.random_walk != 0) spec.random_walk_n = in.random_walk;
    if (in.walk_seed != 0) spec.walk_seed = in.walk_seed;
    static const std::map<std::string, sm::MissingPolicy> policies{
        {"strict", sm::MissingPolicy::strict},
        {"drop", sm::MissingPolicy::drop},
        {"interpolate", sm::MissingPolicy::interpolate}};
    spec.csv.missing = policies.at(in.missing);
    if (in.header) spec.csv.header = sm::HeaderMode::present;
    if (in.no_header) spec.csv.header = sm::HeaderMode::absent;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anytime time series motif discovery with particle swarms"};
    app.require_subcommand(1);

    // run ---------------------------------------------------------------------
    sm::RunSpec run_spec;
    InputFlags run_in;
    std::string topology = "lbest-ring";
    bool no_clamp = false;
    bool no_time = false;
    bool stop_ranked = false;
    std::size_t iterations = 0;
    double time_budget = 0.0;
    auto* run = app.add_subcommand("run", "search motifs with the particle swarm");
    add_input_flags(*run, run_in, run_spec);
    add_task_flags(*run, run_spec);
    run->add_option("--iterations", iterations, "iteration budget");
    run->add_option("--time-budget", time_budget, "wall-clock budget in seconds");
    run->add_option("--particles", run_spec.swarm.kappa, "swarm size (default: adaptive)");
    run->add_option("--topology", topology, "gbest, lbest-ring, von-neumann, random3, wheel, btree")
        ->check(CLI::IsMember({"gbest", "lbest-ring", "lbest", "von-neumann", "random3", "wheel", "btree"}))
        ->capture_default_str();
    run->add_option("--phi", run_spec.swarm.phi, "constriction constant (> 4)")->capture_default_str();
    run->add_option("--tau", run_spec.swarm.tau, "stagnation threshold (default: 20 x particles)");
    run->add_option("--alpha", run_spec.swarm.alpha, "sociability weight")->capture_default_str();
    run->add_option("--rho", run_spec.swarm.rho, "craziness probability")->capture_default_str();
    run->add_flag("--no-clamp", no_clamp, "disable velocity clamping");
    run->add_flag("--stochastic-inertia", run_spec.swarm.stochastic_inertia, "random inertia weight");
    run->add_option("--trace", run_spec.trace_path, "anytime trace CSV");
    run->add_option("--trace-interval", run_spec.trace_interval, "iterations between snapshots")
        ->capture_default_str();
    run->add_flag("--no-time", no_time, "write 0 in the elapsed_ms column (reproducible traces)");
    run->add_option("--reference", run_spec.reference_path, "M* motif CSV for early stopping");
    run->add_option("--stop-fraction", run_spec.stop_fraction, "share of motifs required inside M*")
        ->capture_default_str();
    run->add_flag("--stop-ranked", stop_ranked, "compare rank by rank instead of against max(M*)");

    // oracle ------------------------------------------------------------------
    sm::RunSpec oracle_spec;
    InputFlags oracle_in;
    auto* oracle = app.add_subcommand("oracle", "exact top-k by exhaustive enumeration");
    add_input_flags(*oracle, oracle_in, oracle_spec);
    add_task_flags(*oracle, oracle_spec);
    oracle->add_option("--budget", oracle_spec.oracle_budget, "maximum D evaluations")->capture_default_str();

    // sample ------------------------------------------------------------------
    sm::RunSpec sample_spec;
    InputFlags sample_in;
    std::size_t sample_count = 0;
    auto* sample = app.add_subcommand("sample", "random-sampling reference percentiles");
    add_input_flags(*sample, sample_in, sample_spec);
    add_task_flags(*sample, sample_spec);
    sample->add_option("--count", sample_count, "number of samples (default: n)");

    // landscape ---------------------------------------------------------------
    sm::RunSpec land_spec;
    InputFlags land_in;
    sm::LandscapeSlice slice;
    std::string fixed = "starts";
    auto* land = app.add_subcommand("landscape", "export a 2-D slice of the motif space");
    add_input_flags(*land, land_in, land_spec);
    land->add_option("--measure", land_spec.measure, "zeuclid or dtw")
        ->check(CLI::IsMember({"zeuclid", "dtw"}))
        ->capture_default_str();
    land->add_option("--dtw-band", land_spec.dtw_band, "Sakoe-Chiba half-width (samples)");
    land->add_option("--fixed", fixed, "starts (fix a, b) or lengths (fix w_a, w_b)")
        ->check(CLI::IsMember({"starts", "lengths"}))
        ->capture_default_str();
    land->add_option("--first", slice.first, "fixed a or w_a")->required();
    land->add_option("--second", slice.second, "fixed b or w_b")->required();
    land->add_option("--from", slice.lo, "first swept value")->required();
    land->add_option("--to", slice.hi, "last swept value")->required();
    land->add_option("--out", land_spec.out_path, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        finish_input(run_in, run_spec);
        run_spec.swarm.topology = sm::parse_topology(topology);
        run_spec.swarm.clamp_velocity = !no_clamp;
        run_spec.record_time = !no_time;
        run_spec.stop_rule = stop_ranked ? sm::StopRule::ranked : sm::StopRule::band;
        if (iterations != 0) run_spec.iterations = iterations;
        if (time_budget > 0.0) run_spec.time_budget_s = time_budget;
        return sm::run_command(run_spec);
    }
    if (oracle->parsed()) {
        finish_input(oracle_in, oracle_spec);
        return sm::oracle_command(oracle_spec);
    }
    if (sample->parsed()) {
        finish_input(sample_in, sample_spec);
        if (sample_count != 0) sample_spec.sample_count = sample_count;
        return sm::sample_command(sample_spec);
    }
    finish_input(land_in, land_spec);
    slice.axes = fixed == "starts" ? sm::SliceAxes::fixed_starts : sm::SliceAxes::fixed_lengths;
    return sm::landscape_command(land_spec, slice);
}
