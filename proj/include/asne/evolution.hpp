#ifndef ASNE_EVOLUTION_HPP
#define ASNE_EVOLUTION_HPP

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "asne/colony.hpp"
#include "asne/dataio.hpp"
#include "asne/genome.hpp"
#include "asne/network.hpp"
#include "asne/pheromone.hpp"
#include "asne/traversal.hpp"

namespace asne {

// Fixed-capacity best-so-far set, sorted ascending by fitness (MAE).
class Population {
public:
    explicit Population(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    bool full() const { return members_.size() >= capacity_; }
    const std::vector<RnnGenome>& members() const { return members_; }
    double best_fitness() const;
    double worst_fitness() const;

    // Admits the genome when there is room or it beats the current worst;
    // evicts the worst member when over capacity. Fitness must be finite.
    bool try_insert(RnnGenome genome);

    void validate() const; // sortedness, capacity, finiteness

private:
    std::size_t capacity_;
    std::vector<RnnGenome> members_;
};

// Inheritance blending coefficient of the weight-update equation; the
// degenerate best == worst population reads as phi = 1.
double compute_phi(double fit_new, double fit_pop_best, double fit_pop_worst);

struct LamarckReport {
    std::size_t forward_edges = 0;
    std::size_t recurrent_edges = 0;
};

// Colony weights on the genome's edges become
// phi * trained_weight + (1 - phi) * colony_weight.
LamarckReport lamarck_update(Colony& colony, const RnnGenome& genome, double phi);

struct RewardReport {
    std::size_t forward_edges = 0;
    std::size_t recurrent_edges = 0;
    std::size_t nodes = 0;
};

// Deposits onto every genome edge and every hidden node's chosen cell kind,
// clamped through the colony bounds.
RewardReport reward_paths(Colony& colony, const RnnGenome& genome,
                          const PheromoneScheme& scheme);

enum class PhiModeKind { Function, Constant, Disabled };

struct PhiMode {
    PhiModeKind kind = PhiModeKind::Function;
    double constant = 0.9;

    bool enabled() const { return kind != PhiModeKind::Disabled; }
    void validate() const;
    std::string label() const; // "fn", "0.3", ..., "off"
    static std::optional<PhiMode> from_label(const std::string& label);
};

enum class LamarckGate { Population, Always };

struct EvolutionConfig {
    int max_iteration = 2000;
    std::size_t population_capacity = 20;
    int checkpoint_every = 100; // results between checkpoint writes; 0 disables
    int evaporate_every = 1;    // results between evaporation sweeps
    double evaporation_beta = 0.1;
    PhiMode phi;
    LamarckGate lamarck_gate = LamarckGate::Population;
    PheromoneScheme scheme;
    SwarmOptions swarm;
    TrainerConfig trainer;
    std::uint64_t master_seed = 0;

    void validate() const;
};

struct FitnessLogRow {
    std::int64_t generation = 0;
    double fitness = 0.0; // +inf for failed/rejected genomes
    double best_so_far = 0.0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t rec_edges = 0;
    std::array<std::size_t, kCellKindCount> cells{};
};

std::string fitness_log_header();
std::string fitness_log_format(const FitnessLogRow& row);

struct TrainOutcome {
    RnnGenome genome;
    bool failed = false;
    int epochs_completed = 0;
};

// Master/worker transport. Genomes travel by value; implementations decide
// where and when training runs. collect() blocks until one result is ready.
class WorkerPool {
public:
    using TrainFn = std::function<TrainOutcome(RnnGenome)>;

    virtual ~WorkerPool() = default;
    virtual std::size_t worker_count() const = 0;
    virtual std::size_t in_flight() const = 0;
    virtual void submit(RnnGenome genome) = 0;
    virtual TrainOutcome collect() = 0;
};

// Reference in-process pool: submit stores one genome, collect trains it on
// the calling thread. The deterministic baseline every parallel pool is
// checked against.
class SerialPool : public WorkerPool {
public:
    explicit SerialPool(TrainFn train);
    std::size_t worker_count() const override { return 1; }
    std::size_t in_flight() const override { return slot_.has_value() ? 1 : 0; }
    void submit(RnnGenome genome) override;
    TrainOutcome collect() override;

private:
    TrainFn train_;
    std::optional<RnnGenome> slot_;
};

// N worker threads fed from a queue; results return in completion order.
class ThreadPool : public WorkerPool {
public:
    ThreadPool(TrainFn train, std::size_t workers);
    ~ThreadPool() override;
    std::size_t worker_count() const override;
    std::size_t in_flight() const override;
    void submit(RnnGenome genome) override;
    TrainOutcome collect() override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Decorator that buffers results and releases them in a seeded random
// order; used to drive the asynchrony-safety checks adversarially.
class ShuffledPool : public WorkerPool {
public:
    ShuffledPool(std::unique_ptr<WorkerPool> inner, std::size_t window, std::uint64_t seed);
    std::size_t worker_count() const override { return inner_->worker_count(); }
    std::size_t in_flight() const override { return inner_->in_flight() + buffer_.size(); }
    void submit(RnnGenome genome) override { inner_->submit(std::move(genome)); }
    TrainOutcome collect() override;

private:
    std::unique_ptr<WorkerPool> inner_;
    std::size_t window_;
    Rng rng_;
    std::vector<TrainOutcome> buffer_;
};

// Everything the loop owns across iterations; load_checkpoint restores an
// identical continuation point for deterministic (serial) runs.
struct LoopState {
    Colony colony;
    Population population;
    int processed = 0;
    double best_so_far = 0.0; // +inf until the first finite fitness

    LoopState(Colony colony, std::size_t population_capacity);
};

LoopState fresh_state(const ColonyConfig& colony_config, const EvolutionConfig& config);
LoopState load_checkpoint(const std::string& path, const EvolutionConfig& config);
void write_checkpoint(const std::string& path, const LoopState& state,
                      std::uint64_t master_seed);

struct MasterLoopSinks {
    std::ostream* fitness_csv = nullptr;      // header written only when starting fresh
    std::string checkpoint_path;              // empty disables checkpointing
    std::function<void(const LoopState&)> after_result; // test instrumentation
};

struct RunArtifacts {
    std::optional<RnnGenome> best_genome;
    double best_fitness = 0.0;
    std::vector<FitnessLogRow> log;
    std::size_t failed_genomes = 0;
    std::size_t rejected_swarms = 0;
};

// Algorithm core: generate genomes from the colony, dispatch to the pool,
// and fold results back (population, rewards, inheritance, evaporation,
// bias) in arrival order.
RunArtifacts master_loop(LoopState& state, const EvolutionConfig& config, const DataSplit& data,
                         WorkerPool& pool, const MasterLoopSinks& sinks);

// Convenience: the trainer closure used by all pools.
WorkerPool::TrainFn make_trainer(const DataSplit& data, const TrainerConfig& config);

} // namespace asne

#endif
