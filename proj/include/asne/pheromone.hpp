#ifndef ASNE_PHEROMONE_HPP
#define ASNE_PHEROMONE_HPP

#include <span>
#include <string>
#include <vector>

#include "asne/colony.hpp"

namespace asne {

enum class DepositKind { Constant, Fitness, L1, L2 };

const char* deposit_kind_name(DepositKind kind);

// Which functional scheme governs pheromone deposits, with its parameters.
// The weight-count normalizer n is taken from the evaluated genome's weight
// vector at call time, keeping the regularizer scale-free across sparsities.
struct PheromoneScheme {
    DepositKind kind = DepositKind::Fitness;
    double constant_c = 1.0; // Constant scheme only
    double gamma = 0.0;      // L1/L2 regularization strength
    double alpha = 0.05;     // decay parameter

    void validate() const; // throws ConfigError
};

// Pheromone deposit for one edge or node-kind slot. `fitness` is the
// genome's MAE, `weights` its full trained weight vector. The result is
// returned unclamped; callers clamp through the colony bounds.
double deposit(const PheromoneScheme& scheme, double tau_old, double fitness,
               std::span<const double> weights);

// Constant-penalty branch of the constant scheme (unclamped).
double penalize_constant(double tau_old, double c);

// Relaxation toward the original baseline level.
double evaporate(double tau_current, double tau_original, double beta);

struct ForwardBiasReport {
    std::size_t nodes_flagged = 0;
    std::size_t edges_rescaled = 0;
};

// Rescales forward-edge pheromones at nodes whose backward-recurrent
// pheromone mass (or edge count) dominates their forward mass, so that the
// two totals match. "Backward-recurrent" means recurrent out-edges that do
// not advance in layer order (dst.layer <= src.layer, self-loops included).
ForwardBiasReport apply_forward_bias(Colony& colony);

} // namespace asne

#endif
