#include "asne/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "asne/error.hpp"
#include "asne/serialize.hpp"

namespace asne {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v, const char* fmt = "%g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

} // namespace

void DataSpec::validate() const {
    if (!(split > 0.0 && split < 1.0)) throw ConfigError("data: split must be in (0,1)");
    if (kind == Kind::Csv) {
        if (csv_path.empty()) throw ConfigError("data: csv path missing");
        if (target.empty()) throw ConfigError("data: target column missing");
    } else {
        if (synth_length < 16) throw ConfigError("data: synth length must be >= 16");
        if (synth_width < 2) throw ConfigError("data: synth width must be >= 2");
        if (synth_noise < 0) throw ConfigError("data: synth noise must be >= 0");
    }
}

json DataSpec::to_json() const {
    if (kind == Kind::Csv) {
        return json{{"kind", "csv"}, {"path", csv_path}, {"target", target}, {"split", split}};
    }
    return json{{"kind", "synth"},          {"synth", synth_kind_name(synth)},
                {"length", synth_length},   {"width", synth_width},
                {"noise", synth_noise},     {"synth_seed", synth_seed},
                {"split", split}};
}

DataSpec DataSpec::from_json(const json& doc) {
    DataSpec spec;
    const std::string kind = doc.value("kind", "synth");
    spec.split = doc.value("split", spec.split);
    if (kind == "csv") {
        spec.kind = Kind::Csv;
        spec.csv_path = doc.value("path", "");
        spec.target = doc.value("target", "y");
    } else if (kind == "synth") {
        spec.kind = Kind::Synth;
        const std::string name = doc.value("synth", "sine_mix");
        const auto synth = synth_kind_from_name(name);
        if (!synth) throw ConfigError("data: unknown synth kind '" + name + "'");
        spec.synth = *synth;
        spec.synth_length = doc.value("length", spec.synth_length);
        spec.synth_width = doc.value("width", spec.synth_width);
        spec.synth_noise = doc.value("noise", spec.synth_noise);
        spec.synth_seed = doc.value("synth_seed", spec.synth_seed);
    } else {
        throw ConfigError("data: unknown kind '" + kind + "'");
    }
    return spec;
}

void ExperimentConfig::validate() const {
    if (repeats < 1) throw ConfigError("experiment: repeats must be >= 1");
    if (iterations < 1) throw ConfigError("experiment: iterations must be >= 1");
    if (workers < 1) throw ConfigError("experiment: workers must be >= 1");
    if (hidden_layers < 0) throw ConfigError("experiment: hidden_layers must be >= 0");
    if (hidden_layers > 0 && hidden_width < 1)
        throw ConfigError("experiment: hidden_width must be >= 1");
    if (max_skip < 1) throw ConfigError("experiment: max_skip must be >= 1");
    if (ants < 1) throw ConfigError("experiment: ants must be >= 1");
    if (population < 1) throw ConfigError("experiment: population must be >= 1");
    if (checkpoint_every < 0) throw ConfigError("experiment: checkpoint_every must be >= 0");
    if (evaporate_every < 1) throw ConfigError("experiment: evaporate_every must be >= 1");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("experiment: beta must be in (0,1)");
    if (!(tau_min > 0.0 && tau_min < tau_init && tau_init < tau_max))
        throw ConfigError("experiment: require 0 < tau_min < tau_init < tau_max");
    phi.validate();
    scheme.validate();
    trainer.validate();
    data.validate();
}

json ExperimentConfig::to_json() const {
    json doc;
    doc["format"] = "asne-experiment";
    doc["version"] = 1;
    doc["seed"] = seed;
    doc["repeats"] = repeats;
    doc["iterations"] = iterations;
    doc["workers"] = workers;
    doc["colony"] = json{{"hidden_layers", hidden_layers}, {"hidden_width", hidden_width},
                         {"max_skip", max_skip},           {"tau_init", tau_init},
                         {"tau_min", tau_min},             {"tau_max", tau_max}};
    doc["ants"] = ants;
    doc["species"] = ant_species_label(species);
    doc["jump"] = jump_mode_label(jump);
    doc["phi"] = phi.label();
    doc["lamarck_gate"] = lamarck_gate == LamarckGate::Population ? "population" : "always";
    doc["reward"] = deposit_kind_name(scheme.kind);
    doc["gamma"] = scheme.gamma;
    doc["alpha"] = scheme.alpha;
    doc["constant_c"] = scheme.constant_c;
    doc["beta"] = beta;
    doc["evaporate_every"] = evaporate_every;
    doc["population"] = population;
    doc["checkpoint_every"] = checkpoint_every;
    doc["trainer"] = json{{"epochs", trainer.epochs},
                          {"learning_rate", trainer.learning_rate},
                          {"momentum", trainer.momentum},
                          {"clip", trainer.clip_threshold},
                          {"boost", trainer.boost_threshold}};
    doc["data"] = data.to_json();
    return doc;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    if (doc.value("format", "asne-experiment") != "asne-experiment")
        throw ConfigError("not an asne-experiment document");
    ExperimentConfig c;
    c.seed = doc.value("seed", c.seed);
    c.repeats = doc.value("repeats", c.repeats);
    c.iterations = doc.value("iterations", c.iterations);
    c.workers = doc.value("workers", c.workers);
    if (doc.contains("colony")) {
        const auto& col = doc.at("colony");
        c.hidden_layers = col.value("hidden_layers", c.hidden_layers);
        c.hidden_width = col.value("hidden_width", c.hidden_width);
        c.max_skip = col.value("max_skip", c.max_skip);
        c.tau_init = col.value("tau_init", c.tau_init);
        c.tau_min = col.value("tau_min", c.tau_min);
        c.tau_max = col.value("tau_max", c.tau_max);
    }
    c.ants = doc.value("ants", c.ants);
    if (doc.contains("species")) {
        const auto species = ant_species_from_label(doc.at("species").get<std::string>());
        if (!species) throw ConfigError("unknown species label");
        c.species = *species;
    }
    if (doc.contains("jump")) {
        const auto jump = jump_mode_from_label(doc.at("jump").get<std::string>());
        if (!jump) throw ConfigError("unknown jump label (use aj or oj)");
        c.jump = *jump;
    }
    if (doc.contains("phi")) {
        const auto phi = PhiMode::from_label(doc.at("phi").get<std::string>());
        if (!phi) throw ConfigError("unknown phi label (use fn, off or a constant in (0,1])");
        c.phi = *phi;
    }
    if (doc.contains("lamarck_gate")) {
        const std::string gate = doc.at("lamarck_gate").get<std::string>();
        if (gate == "population") {
            c.lamarck_gate = LamarckGate::Population;
        } else if (gate == "always") {
            c.lamarck_gate = LamarckGate::Always;
        } else {
            throw ConfigError("unknown lamarck gate (use population or always)");
        }
    }
    if (doc.contains("reward")) {
        const std::string reward = doc.at("reward").get<std::string>();
        if (reward == "const") {
            c.scheme.kind = DepositKind::Constant;
        } else if (reward == "fitness") {
            c.scheme.kind = DepositKind::Fitness;
        } else if (reward == "l1") {
            c.scheme.kind = DepositKind::L1;
        } else if (reward == "l2") {
            c.scheme.kind = DepositKind::L2;
        } else {
            throw ConfigError("unknown reward scheme (use const, fitness, l1 or l2)");
        }
    }
    c.scheme.gamma = doc.value("gamma", c.scheme.gamma);
    c.scheme.alpha = doc.value("alpha", c.scheme.alpha);
    c.scheme.constant_c = doc.value("constant_c", c.scheme.constant_c);
    c.beta = doc.value("beta", c.beta);
    c.evaporate_every = doc.value("evaporate_every", c.evaporate_every);
    c.population = doc.value("population", c.population);
    c.checkpoint_every = doc.value("checkpoint_every", c.checkpoint_every);
    if (doc.contains("trainer")) {
        const auto& tr = doc.at("trainer");
        c.trainer.epochs = tr.value("epochs", c.trainer.epochs);
        c.trainer.learning_rate = tr.value("learning_rate", c.trainer.learning_rate);
        c.trainer.momentum = tr.value("momentum", c.trainer.momentum);
        c.trainer.clip_threshold = tr.value("clip", c.trainer.clip_threshold);
        c.trainer.boost_threshold = tr.value("boost", c.trainer.boost_threshold);
    }
    if (doc.contains("data")) c.data = DataSpec::from_json(doc.at("data"));
    return c;
}

std::string ExperimentConfig::label() const {
    std::ostringstream os;
    os << "ants" << ants << '_' << ant_species_label(species) << '_' << jump_mode_label(jump)
       << "_phi-" << phi.label() << '_' << deposit_kind_name(scheme.kind);
    if (scheme.kind == DepositKind::L1 || scheme.kind == DepositKind::L2)
        os << '-' << format_double(scheme.gamma);
    return os.str();
}

ColonyConfig ExperimentConfig::colony_config(int input_width) const {
    ColonyConfig c;
    c.input_width = input_width;
    c.hidden_layers = hidden_layers;
    c.hidden_width = hidden_width;
    c.output_width = 1;
    c.max_skip = max_skip;
    c.layer_jumps = jump == JumpMode::LayerJump;
    c.tau_init = tau_init;
    c.tau_min = tau_min;
    c.tau_max = tau_max;
    return c;
}

EvolutionConfig ExperimentConfig::evolution_config(std::uint64_t master_seed) const {
    EvolutionConfig e;
    e.max_iteration = iterations;
    e.population_capacity = population;
    e.checkpoint_every = checkpoint_every;
    e.evaporate_every = evaporate_every;
    e.evaporation_beta = beta;
    e.phi = phi;
    e.lamarck_gate = lamarck_gate;
    e.scheme = scheme;
    e.swarm.species = species;
    e.swarm.jump = jump;
    e.swarm.ants = ants;
    e.swarm.lamarckian = phi.enabled();
    e.trainer = trainer;
    e.master_seed = master_seed;
    return e;
}

TimeSeries load_experiment_series(const DataSpec& spec) {
    spec.validate();
    TimeSeries series = spec.kind == DataSpec::Kind::Csv
                            ? load_csv(spec.csv_path, spec.target)
                            : synth_series(spec.synth, spec.synth_length, spec.synth_width,
                                           spec.synth_noise, spec.synth_seed);
    min_max_normalize(series);
    return series;
}

double fitness_structure_coefficient(double mae_value, std::size_t weight_count) {
    if (weight_count < 1)
        throw ConfigError("fitness_structure_coefficient: weight count must be >= 1");
    if (mae_value < 0) throw ConfigError("fitness_structure_coefficient: MAE must be >= 0");
    return (1.0 - mae_value) / static_cast<double>(weight_count);
}

namespace {

struct Aggregate {
    double mean = kInf;
    double median = kInf;
    double best = kInf;
    double stddev = 0.0;
};

Aggregate aggregate(std::vector<double> values) {
    Aggregate a;
    if (values.empty()) return a;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    a.best = values.front();
    a.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (double v : values) sq += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(sq / static_cast<double>(n));
    return a;
}

std::string repeat_dir_name(int r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "repeat_%02d", r);
    return buf;
}

} // namespace

json ExperimentSummary::to_json(const ExperimentConfig& config) const {
    json reps = json::array();
    for (const RepeatStats& r : repeats) {
        json row;
        row["master_seed"] = r.master_seed;
        row["ok"] = r.ok;
        if (r.ok) {
            row["best_fitness"] = r.best_fitness;
            row["nodes"] = r.nodes;
            row["edges"] = r.edges;
            row["rec_edges"] = r.rec_edges;
        } else {
            row["error"] = r.error;
        }
        reps.push_back(std::move(row));
    }

    json doc;
    doc["format"] = "asne-summary";
    doc["version"] = 1;
    doc["label"] = label;
    doc["config"] = config.to_json();
    doc["repeats"] = std::move(reps);
    doc["ok_count"] = ok_count;
    if (ok_count > 0) {
        doc["stats"] = json{{"mean", mean_fitness},
                            {"median", median_fitness},
                            {"best", best_fitness},
                            {"stddev", stddev_fitness}};
        doc["size"] = json{{"mean_nodes", mean_nodes},
                           {"mean_edges", mean_edges},
                           {"mean_rec_edges", mean_rec_edges},
                           {"edge_reduction", edge_reduction},
                           {"rec_edge_reduction", rec_edge_reduction}};
    } else {
        doc["stats"] = nullptr;
        doc["size"] = nullptr;
    }
    return doc;
}

ExperimentSummary run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
    config.validate();
    fs::create_directories(out_dir);

    write_file_atomic((fs::path(out_dir) / "config.json").string(), config.to_json().dump(2));

    const TimeSeries series = load_experiment_series(config.data);
    const DataSplit split = split_series(series, config.data.split);
    const ColonyConfig colony_cfg =
        config.colony_config(static_cast<int>(series.width()) - 1);

    ExperimentSummary summary;
    summary.label = config.label();

    std::vector<std::vector<double>> best_curves;
    std::vector<double> fitnesses;
    std::vector<double> node_counts, edge_counts, rec_counts;

    for (int r = 0; r < config.repeats; ++r) {
        RepeatStats stats;
        stats.master_seed = Rng::mix(config.seed, static_cast<std::uint64_t>(r));
        const fs::path rdir = fs::path(out_dir) / repeat_dir_name(r);

        try {
            fs::create_directories(rdir);
            const EvolutionConfig evo = config.evolution_config(stats.master_seed);

            std::ofstream log_csv(rdir / "fitness_log.csv");
            if (!log_csv) throw IoError("cannot open fitness log in " + rdir.string());

            LoopState state = fresh_state(colony_cfg, evo);
            MasterLoopSinks sinks;
            sinks.fitness_csv = &log_csv;
            sinks.checkpoint_path = (rdir / "checkpoint.json").string();

            const WorkerPool::TrainFn trainer = make_trainer(split, config.trainer);
            RunArtifacts artifacts = [&] {
                if (config.workers == 1) {
                    SerialPool pool(trainer);
                    return master_loop(state, evo, split, pool, sinks);
                }
                ThreadPool pool(trainer, static_cast<std::size_t>(config.workers));
                return master_loop(state, evo, split, pool, sinks);
            }();

            if (!artifacts.best_genome)
                throw DataError("run produced no trainable genome");

            write_file_atomic((rdir / "best_genome.json").string(),
                              genome_to_json(*artifacts.best_genome).dump());

            stats.ok = true;
            stats.best_fitness = artifacts.best_fitness;
            stats.nodes = artifacts.best_genome->nodes.size();
            stats.edges = artifacts.best_genome->forward_edges.size();
            stats.rec_edges = artifacts.best_genome->recurrent_edges.size();

            std::vector<double> curve;
            curve.reserve(artifacts.log.size());
            for (const FitnessLogRow& row : artifacts.log) curve.push_back(row.best_so_far);
            best_curves.push_back(std::move(curve));

            fitnesses.push_back(stats.best_fitness);
            node_counts.push_back(static_cast<double>(stats.nodes));
            edge_counts.push_back(static_cast<double>(stats.edges));
            rec_counts.push_back(static_cast<double>(stats.rec_edges));
        } catch (const std::exception& e) {
            stats.ok = false;
            stats.error = e.what();
        }
        summary.repeats.push_back(std::move(stats));
    }

    summary.ok_count = fitnesses.size();
    const Aggregate fit = aggregate(fitnesses);
    summary.mean_fitness = fit.mean;
    summary.median_fitness = fit.median;
    summary.best_fitness = fit.best;
    summary.stddev_fitness = fit.stddev;
    summary.mean_nodes = aggregate(node_counts).mean;
    summary.mean_edges = aggregate(edge_counts).mean;
    summary.mean_rec_edges = aggregate(rec_counts).mean;
    if (summary.ok_count > 0) {
        const double possible_fwd =
            static_cast<double>(Colony::expected_forward_edge_count(colony_cfg));
        const double possible_rec =
            static_cast<double>(Colony::expected_recurrent_edge_count(colony_cfg));
        summary.edge_reduction = 1.0 - summary.mean_edges / possible_fwd;
        summary.rec_edge_reduction = 1.0 - summary.mean_rec_edges / possible_rec;
    }

    // gnuplot-ready best-so-far curves, one column per successful repeat
    if (!best_curves.empty()) {
        std::ostringstream dat;
        dat << "# generation";
        for (std::size_t c = 0; c < best_curves.size(); ++c) dat << " repeat" << c;
        dat << '\n';
        for (std::size_t g = 0; g < best_curves.front().size(); ++g) {
            dat << g;
            for (const auto& curve : best_curves)
                dat << ' ' << format_double(g < curve.size() ? curve[g] : kInf, "%.17g");
            dat << '\n';
        }
        write_file_atomic((fs::path(out_dir) / "fitness.dat").string(), dat.str());

        std::ostringstream gp;
        gp << "set title 'best-so-far validation MAE'\n"
           << "set xlabel 'generation'\n"
           << "set ylabel 'MAE'\n"
           << "set key outside\n"
           << "plot for [i=2:" << best_curves.size() + 1
           << "] 'fitness.dat' using 1:i with lines title 'repeat '.(i-2)\n";
        write_file_atomic((fs::path(out_dir) / "plot.gp").string(), gp.str());
    }

    write_file_atomic((fs::path(out_dir) / "summary.json").string(),
                      summary.to_json(config).dump(2));
    return summary;
}

double baseline_constant_mae(const ExperimentConfig& config) {
    config.validate();
    const TimeSeries series = load_experiment_series(config.data);
    const DataSplit split = split_series(series, config.data.split);
    double mean = 0.0;
    for (double t : split.train_targets) mean += t;
    mean /= static_cast<double>(split.train_targets.size());
    double total = 0.0;
    for (double t : split.valid_targets) total += std::abs(mean - t);
    return total / static_cast<double>(split.valid_targets.size());
}

double baseline_random_median(const ExperimentConfig& config, int n_genomes,
                              std::uint64_t seed) {
    config.validate();
    if (n_genomes < 1) throw ConfigError("baseline: need at least one genome");
    const TimeSeries series = load_experiment_series(config.data);
    const DataSplit split = split_series(series, config.data.split);
    const ColonyConfig colony_cfg =
        config.colony_config(static_cast<int>(series.width()) - 1);

    Rng colony_rng(Rng::mix(seed, 0));
    Colony colony = Colony::build(colony_cfg, colony_rng);
    if (config.species == AntSpecies::StandardBias) apply_forward_bias(colony);

    SwarmOptions opts;
    opts.species = config.species;
    opts.jump = config.jump;
    opts.ants = config.ants;
    opts.lamarckian = false; // random weights: the no-learning policy

    std::vector<double> maes;
    for (int i = 0; i < n_genomes; ++i) {
        auto genome = swarm_extract(colony, opts, i, Rng::mix(seed, 1 + i));
        if (!genome) {
            maes.push_back(kInf);
            continue;
        }
        const TrainResult result = train(std::move(*genome), split.train_inputs,
                                         split.train_targets, split.valid_inputs,
                                         split.valid_targets, config.trainer);
        maes.push_back(result.diverged ? kInf : result.best_validation_mae);
    }
    std::sort(maes.begin(), maes.end());
    const std::size_t n = maes.size();
    return n % 2 == 1 ? maes[n / 2] : 0.5 * (maes[n / 2 - 1] + maes[n / 2]);
}

RankRecord rank_record_from_summary(const json& summary) {
    if (summary.value("format", "") != "asne-summary")
        throw DataError("not an asne-summary document");
    RankRecord rec;
    rec.name = summary.value("label", "");
    const json& config = summary.at("config");
    rec.species = config.value("species", "");
    rec.jump = config.value("jump", "");
    rec.phi = config.value("phi", "");
    rec.reward = config.value("reward", "");
    rec.ants = config.value("ants", 0);
    if (summary.at("stats").is_null()) {
        rec.mean = rec.median = rec.best = kInf;
    } else {
        rec.mean = summary.at("stats").value("mean", kInf);
        rec.median = summary.at("stats").value("median", kInf);
        rec.best = summary.at("stats").value("best", kInf);
    }
    return rec;
}

namespace {

struct HeuristicRow {
    std::string name;
    std::function<bool(const RankRecord&)> uses;
    bool has_solo = false;
    std::function<bool(const RankRecord&)> solo;
};

bool baseline_movement(const RankRecord& r) {
    return r.species == "std" && r.jump == "oj";
}

std::vector<HeuristicRow> heuristic_rows(const std::vector<RankRecord>& records) {
    auto is_const_phi = [](const RankRecord& r) { return r.phi != "fn" && r.phi != "off"; };
    auto no_reg = [](const RankRecord& r) { return r.reward == "const" || r.reward == "fitness"; };

    std::vector<HeuristicRow> rows;
    rows.push_back({"PhiFn", [](const RankRecord& r) { return r.phi == "fn"; }, true,
                    [&no_reg](const RankRecord& r) {
                        return r.phi == "fn" && no_reg(r) && baseline_movement(r);
                    }});
    rows.push_back({"ConstPhi", is_const_phi, true,
                    [is_const_phi, no_reg](const RankRecord& r) {
                        return is_const_phi(r) && no_reg(r) && baseline_movement(r);
                    }});
    rows.push_back({"NoPhi", [](const RankRecord& r) { return r.phi == "off"; }, true,
                    [no_reg](const RankRecord& r) {
                        return r.phi == "off" && no_reg(r) && baseline_movement(r);
                    }});
    rows.push_back({"L1", [](const RankRecord& r) { return r.reward == "l1"; }, true,
                    [](const RankRecord& r) {
                        return r.reward == "l1" && r.phi == "off" && baseline_movement(r);
                    }});
    rows.push_back({"L2", [](const RankRecord& r) { return r.reward == "l2"; }, true,
                    [](const RankRecord& r) {
                        return r.reward == "l2" && r.phi == "off" && baseline_movement(r);
                    }});

    const char* species[] = {"std", "stdbias", "exp", "expfwd", "expbwd", "expfwdbwd"};
    const char* names[] = {"StdAnts", "StdBiasAnts", "ExpAnts", "ExpFwdAnts", "ExpBwdAnts",
                           "ExpFwdBwdAnts"};
    for (int i = 0; i < 6; ++i) {
        const std::string label = species[i];
        rows.push_back({names[i],
                        [label](const RankRecord& r) { return r.species == label; }, false, {}});
    }
    rows.push_back({"NoJump", [](const RankRecord& r) { return r.jump == "oj"; }, false, {}});
    rows.push_back({"LayerJump", [](const RankRecord& r) { return r.jump == "aj"; }, false, {}});

    std::vector<int> ant_values;
    for (const RankRecord& r : records) ant_values.push_back(r.ants);
    std::sort(ant_values.begin(), ant_values.end());
    ant_values.erase(std::unique(ant_values.begin(), ant_values.end()), ant_values.end());
    for (int a : ant_values) {
        rows.push_back({"Ants" + std::to_string(a),
                        [a](const RankRecord& r) { return r.ants == a; }, false, {}});
    }
    return rows;
}

} // namespace

std::string rank_heuristics_csv(std::vector<RankRecord> records) {
    if (records.empty()) throw DataError("rank: no summaries given");

    const std::size_t ks[] = {10, 25, 100, 250, 500};
    const char* metrics[] = {"mean", "median", "best"};
    auto metric_value = [](const RankRecord& r, int m) {
        return m == 0 ? r.mean : m == 1 ? r.median : r.best;
    };

    const std::vector<HeuristicRow> rows = heuristic_rows(records);

    std::ostringstream csv;
    csv << "heuristic";
    for (std::size_t k : ks) {
        for (const char* m : metrics) csv << ",top" << k << '_' << m;
    }
    csv << '\n';

    for (const HeuristicRow& row : rows) {
        csv << row.name;
        for (std::size_t k : ks) {
            for (int m = 0; m < 3; ++m) {
                std::vector<RankRecord> sorted = records;
                std::stable_sort(sorted.begin(), sorted.end(),
                                 [&](const RankRecord& a, const RankRecord& b) {
                                     const double va = metric_value(a, m);
                                     const double vb = metric_value(b, m);
                                     if (va != vb) return va < vb;
                                     return a.name < b.name;
                                 });
                const std::size_t top = std::min(k, sorted.size());
                std::size_t count = 0;
                std::size_t solo = 0;
                for (std::size_t i = 0; i < top; ++i) {
                    if (row.uses(sorted[i])) ++count;
                    if (row.has_solo && row.solo(sorted[i])) ++solo;
                }
                csv << ',' << count;
                if (row.has_solo) csv << '(' << solo << ')';
            }
        }
        csv << '\n';
    }
    return csv.str();
}

int grid_expand(const ExperimentConfig& base, const std::string& out_dir) {
    fs::create_directories(out_dir);

    const int ant_counts[] = {20, 40, 80, 160};
    const AntSpecies species[] = {AntSpecies::Standard,        AntSpecies::StandardBias,
                                  AntSpecies::Explorer,        AntSpecies::ExplorerForward,
                                  AntSpecies::ExplorerBackward,
                                  AntSpecies::ExplorerForwardBackward};
    const JumpMode jumps[] = {JumpMode::LayerJump, JumpMode::NoJump};
    const char* phis[] = {"fn", "0.3", "0.6", "0.9", "off"};
    const double gammas[] = {0.25, 0.65, 0.90};

    int written = 0;
    for (int ants : ant_counts) {
        for (AntSpecies s : species) {
            for (JumpMode j : jumps) {
                for (const char* phi : phis) {
                    // reward axis: const, fitness, and each regularizer at
                    // each gamma of the grid
                    std::vector<std::pair<DepositKind, double>> rewards = {
                        {DepositKind::Constant, 0.0}, {DepositKind::Fitness, 0.0}};
                    for (double g : gammas) rewards.emplace_back(DepositKind::L1, g);
                    for (double g : gammas) rewards.emplace_back(DepositKind::L2, g);

                    for (const auto& [kind, gamma] : rewards) {
                        ExperimentConfig c = base;
                        c.ants = ants;
                        c.species = s;
                        c.jump = j;
                        c.phi = *PhiMode::from_label(phi);
                        c.scheme.kind = kind;
                        c.scheme.gamma = gamma;
                        const std::string name = c.label() + ".json";
                        write_file_atomic((fs::path(out_dir) / name).string(),
                                          c.to_json().dump(2));
                        ++written;
                    }
                }
            }
        }
    }
    return written;
}

namespace {

std::string describe_colony_doc(const json& doc) {
    const Colony colony = colony_from_json(doc);
    double tau_min = kInf, tau_max = -kInf, tau_sum = 0.0;
    auto fold = [&](double tau) {
        tau_min = std::min(tau_min, tau);
        tau_max = std::max(tau_max, tau);
        tau_sum += tau;
    };
    for (const ForwardEdge& e : colony.forward_edges()) fold(e.pheromone);
    for (const RecurrentEdge& e : colony.recurrent_edges()) fold(e.pheromone);
    const double edges =
        static_cast<double>(colony.forward_edges().size() + colony.recurrent_edges().size());

    std::ostringstream os;
    const ColonyConfig& c = colony.config();
    os << "colony: " << colony.node_count() << " nodes (" << c.input_width << " in, "
       << c.hidden_layers << 'x' << c.hidden_width << " hidden, " << c.output_width
       << " out), " << colony.forward_edges().size() << " forward edges, "
       << colony.recurrent_edges().size() << " recurrent edges (skips 1.." << c.max_skip
       << ", jumps " << (c.layer_jumps ? "on" : "off") << ")\n";
    os << "pheromone: min " << format_double(tau_min) << ", mean "
       << format_double(tau_sum / edges) << ", max " << format_double(tau_max) << ", bounds ["
       << format_double(c.tau_min) << ", " << format_double(c.tau_max) << "]\n";
    return os.str();
}

std::string describe_genome_doc(const json& doc) {
    const RnnGenome genome = genome_from_json(doc);
    std::ostringstream os;
    os << "genome: generation " << genome.generation << ", seed " << genome.seed << '\n';
    os << "fitness: "
       << (genome.has_fitness() ? format_double(genome.fitness, "%.6g") : "unset") << '\n';
    os << "structure: " << genome.nodes.size() << " nodes, " << genome.forward_edges.size()
       << " forward edges, " << genome.recurrent_edges.size() << " recurrent edges, "
       << genome.weight_count() << " weights\n";
    os << "cells:";
    const auto hist = genome.cell_histogram();
    for (std::size_t k = 0; k < kCellKindCount; ++k) {
        if (hist[k] > 0)
            os << ' ' << cell_kind_name(static_cast<CellKind>(k)) << '=' << hist[k];
    }
    os << '\n';
    return os.str();
}

std::string describe_checkpoint_doc(const json& doc) {
    std::ostringstream os;
    os << "checkpoint: " << doc.value("processed", 0) << " results processed, best so far "
       << (doc.at("best_so_far").is_null()
               ? std::string("none")
               : format_double(doc.at("best_so_far").get<double>(), "%.6g"))
       << '\n';
    os << describe_colony_doc(doc.at("colony"));
    os << "population: " << doc.at("population").at("members").size() << '/'
       << doc.at("population").at("capacity").get<std::size_t>() << " members\n";
    return os.str();
}

std::string describe_summary_doc(const json& doc) {
    std::ostringstream os;
    os << "experiment: " << doc.value("label", "") << '\n';
    os << "repeats ok: " << doc.value("ok_count", 0) << '/' << doc.at("repeats").size() << '\n';
    if (!doc.at("stats").is_null()) {
        const auto& stats = doc.at("stats");
        os << "fitness: mean " << format_double(stats.value("mean", 0.0), "%.6g") << ", median "
           << format_double(stats.value("median", 0.0), "%.6g") << ", best "
           << format_double(stats.value("best", 0.0), "%.6g") << ", stddev "
           << format_double(stats.value("stddev", 0.0), "%.6g") << '\n';
    }
    return os.str();
}

} // namespace

std::string inspect_file(const std::string& path) {
    const json doc = read_json_file(path);
    const std::string format = doc.value("format", "");
    if (format == "asne-colony") return describe_colony_doc(doc);
    if (format == "asne-genome") return describe_genome_doc(doc);
    if (format == "asne-checkpoint") return describe_checkpoint_doc(doc);
    if (format == "asne-summary") return describe_summary_doc(doc);
    throw DataError("unrecognized document format '" + format + "' in " + path);
}

} // namespace asne
