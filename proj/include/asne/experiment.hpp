#ifndef ASNE_EXPERIMENT_HPP
#define ASNE_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "asne/dataio.hpp"
#include "asne/evolution.hpp"

namespace asne {

struct DataSpec {
    enum class Kind { Csv, Synth };
    Kind kind = Kind::Synth;

    // csv
    std::string csv_path;
    std::string target = "y";

    // synth
    SynthKind synth = SynthKind::SineMix;
    std::size_t synth_length = 512;
    std::size_t synth_width = 5;
    double synth_noise = 0.02;
    std::uint64_t synth_seed = 1;

    double split = 0.5; // contiguous train fraction

    void validate() const;
    nlohmann::json to_json() const;
    static DataSpec from_json(const nlohmann::json& doc);
};

// One experiment = one config file; covers the full option grid.
struct ExperimentConfig {
    std::uint64_t seed = 42;
    int repeats = 10;
    int iterations = 2000;
    int workers = 1;

    int hidden_layers = 3;
    int hidden_width = 12;
    int max_skip = 3;
    double tau_init = 1.0;
    double tau_min = 0.05;
    double tau_max = 20.0;

    int ants = 40;
    AntSpecies species = AntSpecies::Explorer;
    JumpMode jump = JumpMode::LayerJump;

    PhiMode phi;
    LamarckGate lamarck_gate = LamarckGate::Population;

    PheromoneScheme scheme;
    double beta = 0.1;
    int evaporate_every = 1;

    std::size_t population = 20;
    int checkpoint_every = 100;

    TrainerConfig trainer;
    DataSpec data;

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& doc);

    // "ants40_expfwd_aj_phi-fn_l2-0.9" style tag used in filenames and
    // ranking tables.
    std::string label() const;

    ColonyConfig colony_config(int input_width) const;
    EvolutionConfig evolution_config(std::uint64_t master_seed) const;
};

struct RepeatStats {
    std::uint64_t master_seed = 0;
    bool ok = false;
    std::string error;
    double best_fitness = 0.0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t rec_edges = 0;
};

struct ExperimentSummary {
    std::string label;
    std::vector<RepeatStats> repeats;
    std::size_t ok_count = 0;
    double mean_fitness = 0.0;
    double median_fitness = 0.0;
    double best_fitness = 0.0;
    double stddev_fitness = 0.0;
    double mean_nodes = 0.0;
    double mean_edges = 0.0;
    double mean_rec_edges = 0.0;
    double edge_reduction = 0.0;     // 1 - mean_edges / colony forward edges
    double rec_edge_reduction = 0.0; // 1 - mean_rec_edges / colony recurrent edges

    nlohmann::json to_json(const ExperimentConfig& config) const;
};

// Executes `repeats` independent seeded runs and writes per-repeat logs,
// best genomes, checkpoints, gnuplot data and summary.json under out_dir.
// Failed repeats are recorded and excluded from the statistics.
ExperimentSummary run_experiment(const ExperimentConfig& config, const std::string& out_dir);

// Per-weight fitness contribution: (1 - MAE) / weight_count.
double fitness_structure_coefficient(double mae_value, std::size_t weight_count);

// Loads and normalizes the configured series (CSV or synthetic).
TimeSeries load_experiment_series(const DataSpec& spec);

// MAE of the constant predictor (train-split target mean) on the validation
// split; the "must beat" oracle for end-to-end runs.
double baseline_constant_mae(const ExperimentConfig& config);

// Median validation MAE of n genomes extracted from a pristine colony
// (uniform pheromones, random weights) and trained identically.
double baseline_random_median(const ExperimentConfig& config, int n_genomes,
                              std::uint64_t seed);

// One record per experiment, extracted from its summary.json.
struct RankRecord {
    std::string name;
    std::string species;
    std::string jump;
    std::string phi;
    std::string reward;
    int ants = 0;
    double mean = 0.0;
    double median = 0.0;
    double best = 0.0;
};

RankRecord rank_record_from_summary(const nlohmann::json& summary);

// Top-{10,25,100,250,500} appearance counts per heuristic by mean, median
// and best fitness; CSV text. Parenthesized values count experiments that
// used that phi/regularization heuristic with everything else at baseline.
std::string rank_heuristics_csv(std::vector<RankRecord> records);

// Expands the full option grid into per-experiment config files; returns
// the number of files written.
int grid_expand(const ExperimentConfig& base, const std::string& out_dir);

// Pretty-prints a colony/genome/checkpoint/summary JSON document.
std::string inspect_file(const std::string& path);

} // namespace asne

#endif
