// Experiment runner and analysis tool for the ASNE shared library. Every
// operation goes through the C API in asne.h.

#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "asne.h"

namespace {

int exit_code(asne_status status) {
    switch (status) {
        case ASNE_OK: return 0;
        case ASNE_CONFIG_ERROR: return 2;
        case ASNE_DATA_ERROR: return 3;
        case ASNE_PARTIAL_FAILURE: return 4;
        default: return 1;
    }
}

int fail(asne_status status) {
    std::fprintf(stderr, "error (%s): %s\n", asne_status_name(status), asne_last_error());
    return exit_code(status);
}

struct ConfigDeleter {
    void operator()(asne_config* c) const { asne_config_free(c); }
};
using ConfigPtr = std::unique_ptr<asne_config, ConfigDeleter>;

struct StringDeleter {
    void operator()(char* s) const { asne_string_free(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Options shared by run/grid/baseline; values are applied to the config in
// key order, which keeps data.kind ahead of the other data.* keys.
struct ConfigArgs {
    std::string config_file;
    std::map<std::string, std::string> overrides;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "experiment config JSON file");

        auto opt = [this, cmd](const char* flag, const char* key, const char* desc) {
            cmd->add_option_function<std::string>(
                flag, [this, key](const std::string& v) { overrides[key] = v; }, desc);
        };
        opt("--ants", "ants", "ants per swarm {20,40,80,160}");
        opt("--species", "species",
            "ant species {std,stdbias,exp,expfwd,expbwd,expfwdbwd}");
        opt("--jump", "jump", "layer jumping {aj,oj}");
        opt("--phi", "phi", "weight inheritance {fn,0.3,0.6,0.9,off}");
        opt("--lamarck-gate", "lamarck_gate",
            "when colony weights update {population,always}");
        opt("--reward", "reward", "deposit scheme {const,fitness,l1,l2}");
        opt("--gamma", "gamma", "regularization strength {0.25,0.65,0.90}");
        opt("--alpha", "alpha", "pheromone decay parameter (default 0.05)");
        opt("--const-c", "constant_c", "constant deposit C (const scheme)");
        opt("--beta", "beta", "evaporation rate (default 0.1)");
        opt("--evaporate-every", "evaporate_every", "results between evaporation sweeps");
        opt("--iterations", "iterations", "genomes generated per run");
        opt("--epochs", "trainer.epochs", "backprop epochs per genome");
        opt("--repeats", "repeats", "independent seeded runs");
        opt("--seed", "seed", "experiment seed");
        opt("--workers", "workers", "worker pool size");
        opt("--population", "population", "population capacity");
        opt("--checkpoint-every", "checkpoint_every", "results between checkpoints");
        opt("--hidden-layers", "colony.hidden_layers", "hidden layer count");
        opt("--hidden-width", "colony.hidden_width", "nodes per hidden layer");
        opt("--max-skip", "colony.max_skip", "largest recurrent time skip");
        opt("--target", "data.target", "target column name");
        opt("--split", "data.split", "contiguous train fraction");
        opt("--length", "data.length", "synthetic series length");
        opt("--width", "data.width", "synthetic series columns");
        opt("--noise", "data.noise", "synthetic noise sigma");
        opt("--synth-seed", "data.synth_seed", "synthetic generator seed");

        cmd->add_option_function<std::string>(
            "--data",
            [this](const std::string& v) {
                overrides["data.kind"] = "csv";
                overrides["data.path"] = v;
            },
            "CSV file (sets data.kind=csv)");
        cmd->add_option_function<std::string>(
            "--synth",
            [this](const std::string& v) {
                overrides["data.kind"] = "synth";
                overrides["data.synth"] = v;
            },
            "synthetic kind {sine_mix,mackey_glass_like} (sets data.kind=synth)");
    }

    asne_status build(ConfigPtr& out) const {
        asne_config* raw = nullptr;
        asne_status status = config_file.empty()
                                 ? asne_config_create(&raw)
                                 : asne_config_from_file(config_file.c_str(), &raw);
        if (status != ASNE_OK) return status;
        out.reset(raw);
        for (const auto& [key, value] : overrides) {
            status = asne_config_set(out.get(), key.c_str(), value.c_str());
            if (status != ASNE_OK) return status;
        }
        return ASNE_OK;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ASNE: ant swarm neuro-evolution for RNN topology search"};
    app.require_subcommand(1);
    app.set_version_flag("--version", asne_version());

    // run
    auto* run = app.add_subcommand("run", "run one experiment (all repeats)");
    ConfigArgs run_args;
    run_args.add_to(run);
    std::string run_out = "asne-run";
    run->add_option("--out", run_out, "output directory")->required();

    // grid
    auto* grid = app.add_subcommand("grid", "expand the full option grid into config files");
    ConfigArgs grid_args;
    grid_args.add_to(grid);
    std::string grid_out;
    grid->add_option("--out", grid_out, "output directory")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic series CSV");
    std::string synth_kind = "sine_mix";
    long synth_length = 512;
    long synth_width = 5;
    double synth_noise = 0.02;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    synth->add_option("--kind", synth_kind, "sine_mix or mackey_glass_like");
    synth->add_option("--length", synth_length, "timesteps (>= 16)");
    synth->add_option("--width", synth_width, "columns including target (>= 2)");
    synth->add_option("--noise", synth_noise, "noise sigma");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "CSV path")->required();

    // rank
    auto* rank = app.add_subcommand("rank", "rank experiments from summary.json files");
    std::vector<std::string> rank_files;
    std::string rank_out;
    rank->add_option("summaries", rank_files, "summary.json files")->required();
    rank->add_option("--out", rank_out, "directory for ranking.csv");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "pretty-print a checkpoint/genome/summary");
    std::string inspect_file;
    inspect->add_option("file", inspect_file, "JSON document")->required();

    // baseline
    auto* baseline = app.add_subcommand(
        "baseline", "oracle baselines: constant mean predictor, random topologies");
    ConfigArgs baseline_args;
    baseline_args.add_to(baseline);
    int baseline_random = 0;
    std::uint64_t baseline_seed = 7;
    baseline->add_option("--random", baseline_random,
                         "also train N random-topology genomes and report the median");
    baseline->add_option("--baseline-seed", baseline_seed, "seed for the random baseline");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        ConfigPtr config;
        asne_status status = run_args.build(config);
        if (status != ASNE_OK) return fail(status);
        char* summary = nullptr;
        status = asne_run_experiment(config.get(), run_out.c_str(), &summary);
        StringPtr summary_owned(summary);
        if (status != ASNE_OK && status != ASNE_PARTIAL_FAILURE) return fail(status);
        if (summary_owned) std::printf("%s\n", summary_owned.get());
        if (status == ASNE_PARTIAL_FAILURE) {
            std::fprintf(stderr, "warning: %s\n", asne_last_error());
            return exit_code(status);
        }
        return 0;
    }

    if (grid->parsed()) {
        ConfigPtr config;
        asne_status status = grid_args.build(config);
        if (status != ASNE_OK) return fail(status);
        int written = 0;
        status = asne_grid_expand(config.get(), grid_out.c_str(), &written);
        if (status != ASNE_OK) return fail(status);
        std::printf("wrote %d experiment files to %s\n", written, grid_out.c_str());
        return 0;
    }

    if (synth->parsed()) {
        const asne_status status = asne_synth_csv(synth_kind.c_str(), synth_length,
                                                  synth_width, synth_noise, synth_seed,
                                                  synth_out.c_str());
        if (status != ASNE_OK) return fail(status);
        std::printf("wrote %s\n", synth_out.c_str());
        return 0;
    }

    if (rank->parsed()) {
        std::vector<const char*> paths;
        paths.reserve(rank_files.size());
        for (const std::string& f : rank_files) paths.push_back(f.c_str());
        char* csv = nullptr;
        const asne_status status =
            asne_rank(paths.data(), paths.size(), rank_out.empty() ? nullptr : rank_out.c_str(),
                      &csv);
        StringPtr csv_owned(csv);
        if (status != ASNE_OK) return fail(status);
        std::printf("%s", csv_owned.get());
        return 0;
    }

    if (inspect->parsed()) {
        char* text = nullptr;
        const asne_status status = asne_inspect(inspect_file.c_str(), &text);
        StringPtr text_owned(text);
        if (status != ASNE_OK) return fail(status);
        std::printf("%s", text_owned.get());
        return 0;
    }

    if (baseline->parsed()) {
        ConfigPtr config;
        asne_status status = baseline_args.build(config);
        if (status != ASNE_OK) return fail(status);
        double constant = 0.0;
        status = asne_baseline_constant(config.get(), &constant);
        if (status != ASNE_OK) return fail(status);
        std::printf("{\n  \"constant_mae\": %.17g", constant);
        if (baseline_random > 0) {
            double median = 0.0;
            status = asne_baseline_random(config.get(), baseline_random, baseline_seed, &median);
            if (status != ASNE_OK) return fail(status);
            std::printf(",\n  \"random_median_mae\": %.17g", median);
        }
        std::printf("\n}\n");
        return 0;
    }

    return 0;
}
