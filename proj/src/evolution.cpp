#include "asne/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <limits>
#include <mutex>
#include <thread>

#include "asne/error.hpp"
#include "asne/serialize.hpp"

namespace asne {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

Population::Population(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 1) throw ConfigError("population: capacity must be >= 1");
}

double Population::best_fitness() const {
    return members_.empty() ? kInf : members_.front().fitness;
}

double Population::worst_fitness() const {
    return members_.empty() ? kInf : members_.back().fitness;
}

bool Population::try_insert(RnnGenome genome) {
    if (!std::isfinite(genome.fitness))
        throw InternalError("population: refusing non-finite fitness");
    if (full() && !(genome.fitness < worst_fitness())) return false;

    const auto it = std::lower_bound(
        members_.begin(), members_.end(), genome.fitness,
        [](const RnnGenome& g, double f) { return g.fitness < f; });
    members_.insert(it, std::move(genome));
    if (members_.size() > capacity_) members_.pop_back();
    return true;
}

void Population::validate() const {
    if (members_.size() > capacity_) throw InternalError("population: over capacity");
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (!std::isfinite(members_[i].fitness))
            throw InternalError("population: non-finite fitness");
        if (i > 0 && members_[i - 1].fitness > members_[i].fitness)
            throw InternalError("population: not sorted by fitness");
    }
}

double compute_phi(double fit_new, double fit_pop_best, double fit_pop_worst) {
    if (!(fit_pop_best <= fit_pop_worst))
        throw InternalError("compute_phi: best fitness exceeds worst");
    const double spread = fit_pop_worst - fit_pop_best;
    if (spread <= 0.0) return 1.0;
    const double x = (fit_new - fit_pop_best) / spread;
    return std::min(std::max(1.0 - x, 0.0), 1.0);
}

LamarckReport lamarck_update(Colony& colony, const RnnGenome& genome, double phi) {
    if (!(phi >= 0.0 && phi <= 1.0)) throw InternalError("lamarck_update: phi out of [0,1]");
    LamarckReport report;
    for (const GenomeForwardEdge& e : genome.forward_edges) {
        const std::size_t idx = *colony.find_forward(e.src, e.dst);
        const double old = colony.forward_edges()[idx].lamarck_weight;
        colony.set_forward_weight(idx, phi * e.weight + (1.0 - phi) * old);
        ++report.forward_edges;
    }
    for (const GenomeRecurrentEdge& e : genome.recurrent_edges) {
        const std::size_t idx = *colony.find_recurrent(e.src, e.dst, e.time_skip);
        const double old = colony.recurrent_edges()[idx].lamarck_weight;
        colony.set_recurrent_weight(idx, phi * e.weight + (1.0 - phi) * old);
        ++report.recurrent_edges;
    }
    return report;
}

RewardReport reward_paths(Colony& colony, const RnnGenome& genome,
                          const PheromoneScheme& scheme) {
    RewardReport report;
    const std::vector<double> weights = genome.pack_weights();
    const double fitness = genome.fitness;

    for (const GenomeForwardEdge& e : genome.forward_edges) {
        const std::size_t idx = *colony.find_forward(e.src, e.dst);
        colony.set_forward_pheromone(
            idx, deposit(scheme, colony.forward_edges()[idx].pheromone, fitness, weights));
        ++report.forward_edges;
    }
    for (const GenomeRecurrentEdge& e : genome.recurrent_edges) {
        const std::size_t idx = *colony.find_recurrent(e.src, e.dst, e.time_skip);
        colony.set_recurrent_pheromone(
            idx, deposit(scheme, colony.recurrent_edges()[idx].pheromone, fitness, weights));
        ++report.recurrent_edges;
    }
    for (const GenomeNode& n : genome.nodes) {
        if (!colony.is_hidden(n.id)) continue;
        const std::size_t idx = colony.node_index(n.id);
        const double old =
            colony.nodes()[idx].cell_pheromones[static_cast<std::size_t>(n.kind)];
        colony.set_cell_pheromone(idx, n.kind, deposit(scheme, old, fitness, weights));
        ++report.nodes;
    }
    return report;
}

void PhiMode::validate() const {
    if (kind == PhiModeKind::Constant && !(constant > 0.0 && constant <= 1.0))
        throw ConfigError("phi: constant must be in (0,1]");
}

std::string PhiMode::label() const {
    switch (kind) {
        case PhiModeKind::Function: return "fn";
        case PhiModeKind::Disabled: return "off";
        case PhiModeKind::Constant: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", constant);
            return buf;
        }
    }
    return "?";
}

std::optional<PhiMode> PhiMode::from_label(const std::string& label) {
    if (label == "fn") return PhiMode{PhiModeKind::Function, 0.0};
    if (label == "off") return PhiMode{PhiModeKind::Disabled, 0.0};
    try {
        std::size_t used = 0;
        const double v = std::stod(label, &used);
        if (used != label.size() || !(v > 0.0 && v <= 1.0)) return std::nullopt;
        return PhiMode{PhiModeKind::Constant, v};
    } catch (...) {
        return std::nullopt;
    }
}

void EvolutionConfig::validate() const {
    if (max_iteration < 1) throw ConfigError("evolution: max_iteration must be >= 1");
    if (population_capacity < 1) throw ConfigError("evolution: population capacity >= 1");
    if (checkpoint_every < 0) throw ConfigError("evolution: checkpoint_every must be >= 0");
    if (evaporate_every < 1) throw ConfigError("evolution: evaporate_every must be >= 1");
    if (!(evaporation_beta > 0.0 && evaporation_beta < 1.0))
        throw ConfigError("evolution: evaporation rate must be in (0,1)");
    if (swarm.ants < 1) throw ConfigError("evolution: ant count must be >= 1");
    phi.validate();
    scheme.validate();
    trainer.validate();
}

std::string fitness_log_header() {
    return "generation,fitness,best_so_far,nodes,edges,rec_edges,simple,delta,gru,lstm,mgu,"
           "ugrnn";
}

std::string fitness_log_format(const FitnessLogRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%zu,%zu,%zu,%zu,%zu,%zu,%zu,%zu,%zu",
                  static_cast<long long>(row.generation), row.fitness, row.best_so_far,
                  row.nodes, row.edges, row.rec_edges, row.cells[0], row.cells[1], row.cells[2],
                  row.cells[3], row.cells[4], row.cells[5]);
    return buf;
}

SerialPool::SerialPool(TrainFn train) : train_(std::move(train)) {}

void SerialPool::submit(RnnGenome genome) {
    if (slot_.has_value()) throw InternalError("serial pool: already holding a genome");
    slot_ = std::move(genome);
}

TrainOutcome SerialPool::collect() {
    if (!slot_.has_value()) throw InternalError("serial pool: nothing to collect");
    RnnGenome genome = std::move(*slot_);
    slot_.reset();
    return train_(std::move(genome));
}

struct ThreadPool::Impl {
    TrainFn train;
    std::size_t workers;
    std::mutex mutex;
    std::condition_variable task_ready;
    std::condition_variable result_ready;
    std::deque<RnnGenome> tasks;
    std::deque<TrainOutcome> results;
    std::size_t in_flight = 0;
    bool stopping = false;
    std::vector<std::thread> threads;

    void worker() {
        while (true) {
            RnnGenome genome;
            {
                std::unique_lock lock(mutex);
                task_ready.wait(lock, [&] { return stopping || !tasks.empty(); });
                if (stopping && tasks.empty()) return;
                genome = std::move(tasks.front());
                tasks.pop_front();
            }
            TrainOutcome outcome;
            try {
                outcome = train(std::move(genome));
            } catch (...) {
                outcome.failed = true;
                outcome.genome.fitness = kInf;
            }
            {
                std::lock_guard lock(mutex);
                results.push_back(std::move(outcome));
            }
            result_ready.notify_one();
        }
    }
};

ThreadPool::ThreadPool(TrainFn train, std::size_t workers) : impl_(std::make_unique<Impl>()) {
    if (workers < 1) throw ConfigError("thread pool: worker count must be >= 1");
    impl_->train = std::move(train);
    impl_->workers = workers;
    for (std::size_t i = 0; i < workers; ++i)
        impl_->threads.emplace_back([this] { impl_->worker(); });
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard lock(impl_->mutex);
        impl_->stopping = true;
    }
    impl_->task_ready.notify_all();
    for (std::thread& t : impl_->threads) t.join();
}

std::size_t ThreadPool::worker_count() const { return impl_->workers; }

std::size_t ThreadPool::in_flight() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->in_flight;
}

void ThreadPool::submit(RnnGenome genome) {
    {
        std::lock_guard lock(impl_->mutex);
        impl_->tasks.push_back(std::move(genome));
        ++impl_->in_flight;
    }
    impl_->task_ready.notify_one();
}

TrainOutcome ThreadPool::collect() {
    std::unique_lock lock(impl_->mutex);
    impl_->result_ready.wait(lock, [&] { return !impl_->results.empty(); });
    TrainOutcome outcome = std::move(impl_->results.front());
    impl_->results.pop_front();
    --impl_->in_flight;
    return outcome;
}

ShuffledPool::ShuffledPool(std::unique_ptr<WorkerPool> inner, std::size_t window,
                           std::uint64_t seed)
    : inner_(std::move(inner)), window_(std::max<std::size_t>(window, 1)), rng_(seed) {}

TrainOutcome ShuffledPool::collect() {
    while (inner_->in_flight() > 0 && buffer_.size() < window_)
        buffer_.push_back(inner_->collect());
    if (buffer_.empty()) throw InternalError("shuffled pool: nothing to collect");
    const std::size_t pick = rng_.index(buffer_.size());
    TrainOutcome outcome = std::move(buffer_[pick]);
    buffer_.erase(buffer_.begin() + static_cast<std::ptrdiff_t>(pick));
    return outcome;
}

LoopState::LoopState(Colony colony_, std::size_t population_capacity)
    : colony(std::move(colony_)), population(population_capacity), best_so_far(kInf) {}

LoopState fresh_state(const ColonyConfig& colony_config, const EvolutionConfig& config) {
    config.validate();
    Rng colony_rng(Rng::mix(config.master_seed, 0));
    LoopState state(Colony::build(colony_config, colony_rng), config.population_capacity);
    if (config.swarm.species == AntSpecies::StandardBias) apply_forward_bias(state.colony);
    return state;
}

void write_checkpoint(const std::string& path, const LoopState& state,
                      std::uint64_t master_seed) {
    nlohmann::json doc;
    doc["format"] = "asne-checkpoint";
    doc["version"] = 1;
    doc["master_seed"] = master_seed;
    doc["processed"] = state.processed;
    if (std::isfinite(state.best_so_far)) {
        doc["best_so_far"] = state.best_so_far;
    } else {
        doc["best_so_far"] = nullptr;
    }
    doc["colony"] = colony_to_json(state.colony);
    nlohmann::json members = nlohmann::json::array();
    for (const RnnGenome& g : state.population.members()) members.push_back(genome_to_json(g));
    doc["population"] =
        nlohmann::json{{"capacity", state.population.capacity()}, {"members", members}};
    write_file_atomic(path, doc.dump());
}

LoopState load_checkpoint(const std::string& path, const EvolutionConfig& config) {
    config.validate();
    const nlohmann::json doc = read_json_file(path);
    if (doc.value("format", "") != "asne-checkpoint" || doc.value("version", 0) != 1)
        throw DataError("not an asne-checkpoint v1 document: " + path);
    if (doc.at("master_seed").get<std::uint64_t>() != config.master_seed)
        throw DataError("checkpoint seed does not match the configured seed");

    LoopState state(colony_from_json(doc.at("colony")),
                    doc.at("population").at("capacity").get<std::size_t>());
    state.processed = doc.at("processed").get<int>();
    state.best_so_far = doc.at("best_so_far").is_null()
                            ? kInf
                            : doc.at("best_so_far").get<double>();
    for (const auto& g : doc.at("population").at("members"))
        state.population.try_insert(genome_from_json(g));
    state.population.validate();
    return state;
}

WorkerPool::TrainFn make_trainer(const DataSplit& data, const TrainerConfig& config) {
    return [&data, config](RnnGenome genome) {
        TrainOutcome outcome;
        try {
            TrainResult result = train(std::move(genome), data.train_inputs, data.train_targets,
                                       data.valid_inputs, data.valid_targets, config);
            outcome.failed = result.diverged;
            outcome.epochs_completed = static_cast<int>(result.epoch_validation_mae.size());
            outcome.genome = std::move(result.genome);
        } catch (...) {
            outcome.failed = true;
            outcome.genome.fitness = kInf;
        }
        return outcome;
    };
}

namespace {

FitnessLogRow make_row(const RnnGenome& genome, double fitness, double best_so_far) {
    FitnessLogRow row;
    row.generation = genome.generation;
    row.fitness = fitness;
    row.best_so_far = best_so_far;
    row.nodes = genome.nodes.size();
    row.edges = genome.forward_edges.size();
    row.rec_edges = genome.recurrent_edges.size();
    row.cells = genome.cell_histogram();
    return row;
}

void evaporation_sweep(Colony& colony, double beta) {
    const double baseline = colony.config().tau_init;
    for (std::size_t i = 0; i < colony.forward_edges().size(); ++i) {
        colony.set_forward_pheromone(
            i, evaporate(colony.forward_edges()[i].pheromone, baseline, beta));
    }
    for (std::size_t i = 0; i < colony.recurrent_edges().size(); ++i) {
        colony.set_recurrent_pheromone(
            i, evaporate(colony.recurrent_edges()[i].pheromone, baseline, beta));
    }
    for (std::size_t n = 0; n < colony.node_count(); ++n) {
        if (!colony.is_hidden(colony.nodes()[n].id)) continue;
        for (std::size_t k = 0; k < kCellKindCount; ++k) {
            const double old = colony.nodes()[n].cell_pheromones[k];
            colony.set_cell_pheromone(n, static_cast<CellKind>(k),
                                      evaporate(old, baseline, beta));
        }
    }
}

} // namespace

RunArtifacts master_loop(LoopState& state, const EvolutionConfig& config, const DataSplit& data,
                         WorkerPool& pool, const MasterLoopSinks& sinks) {
    config.validate();
    RunArtifacts artifacts;

    if (sinks.fitness_csv && state.processed == 0)
        (*sinks.fitness_csv) << fitness_log_header() << '\n';

    int generated = state.processed; // lost in-flight work is regenerated on resume

    auto emit = [&](const FitnessLogRow& row) {
        artifacts.log.push_back(row);
        if (sinks.fitness_csv) (*sinks.fitness_csv) << fitness_log_format(row) << '\n';
    };

    auto after_result = [&](bool pheromones_touched) {
        ++state.processed;
        if (state.processed % config.evaporate_every == 0) {
            evaporation_sweep(state.colony, config.evaporation_beta);
            pheromones_touched = true;
        }
        if (pheromones_touched && config.swarm.species == AntSpecies::StandardBias)
            apply_forward_bias(state.colony);
        if (config.checkpoint_every > 0 && !sinks.checkpoint_path.empty() &&
            state.processed % config.checkpoint_every == 0) {
            write_checkpoint(sinks.checkpoint_path, state, config.master_seed);
        }
        if (sinks.after_result) sinks.after_result(state);
    };

    while (state.processed < config.max_iteration) {
        // Keep every worker busy; each genome is generated from the colony
        // state current at its generation time.
        while (generated < config.max_iteration && pool.in_flight() < pool.worker_count()) {
            const std::int64_t generation = generated;
            ++generated;
            auto genome = swarm_extract(state.colony, config.swarm, generation,
                                        Rng::mix(config.master_seed, 1 + generation));
            if (!genome) {
                ++artifacts.rejected_swarms;
                RnnGenome placeholder;
                placeholder.generation = generation;
                emit(make_row(placeholder, kInf, state.best_so_far));
                after_result(false);
                continue;
            }
            pool.submit(std::move(*genome));
        }
        if (state.processed >= config.max_iteration) break;
        if (pool.in_flight() == 0) break;

        TrainOutcome outcome = pool.collect();
        const double fitness =
            outcome.failed ? kInf : outcome.genome.fitness;
        bool pheromones_touched = false;

        if (std::isfinite(fitness)) {
            if (fitness < state.best_so_far) state.best_so_far = fitness;
            const bool admitted = state.population.try_insert(outcome.genome);
            if (admitted) {
                reward_paths(state.colony, outcome.genome, config.scheme);
                pheromones_touched = true;
            }
            if (config.phi.enabled() &&
                (admitted || config.lamarck_gate == LamarckGate::Always)) {
                const double phi =
                    config.phi.kind == PhiModeKind::Constant
                        ? config.phi.constant
                        : compute_phi(fitness, state.population.best_fitness(),
                                      state.population.worst_fitness());
                lamarck_update(state.colony, outcome.genome, phi);
            }
        } else {
            ++artifacts.failed_genomes;
        }

        emit(make_row(outcome.genome, fitness, state.best_so_far));
        after_result(pheromones_touched);
    }

    if (!state.population.members().empty()) {
        artifacts.best_genome = state.population.members().front();
        artifacts.best_fitness = state.population.best_fitness();
    } else {
        artifacts.best_fitness = kInf;
    }
    return artifacts;
}

} // namespace asne
