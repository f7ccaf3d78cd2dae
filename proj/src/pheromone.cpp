#include "asne/pheromone.hpp"

#include <cmath>

#include "asne/error.hpp"

namespace asne {

const char* deposit_kind_name(DepositKind kind) {
    switch (kind) {
        case DepositKind::Constant: return "const";
        case DepositKind::Fitness: return "fitness";
        case DepositKind::L1: return "l1";
        case DepositKind::L2: return "l2";
    }
    return "?";
}

void PheromoneScheme::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("scheme: alpha must be in (0,1)");
    if (gamma < 0.0) throw ConfigError("scheme: gamma must be >= 0");
    if (kind == DepositKind::Constant && !(constant_c > 0.0))
        throw ConfigError("scheme: constant C must be > 0");
}

namespace {

// Epsilon floor inside the reciprocal; a perfect fitness of 0 with a zero
// regularizer must not divide by zero.
constexpr double kEtaFloor = 1e-9;

double reward_term(double fitness, double regularizer) {
    const double denom = std::max(fitness + regularizer, kEtaFloor);
    return 1.0 / denom;
}

} // namespace

double deposit(const PheromoneScheme& scheme, double tau_old, double fitness,
               std::span<const double> weights) {
    switch (scheme.kind) {
        case DepositKind::Constant:
            return tau_old + scheme.constant_c;
        case DepositKind::Fitness:
            return (1.0 - scheme.alpha) * tau_old + scheme.alpha * reward_term(fitness, 0.0);
        case DepositKind::L1: {
            double l1 = 0.0;
            for (double w : weights) l1 += std::abs(w);
            const double n = weights.empty() ? 1.0 : static_cast<double>(weights.size());
            return (1.0 - scheme.alpha) * tau_old +
                   scheme.alpha * reward_term(fitness, (scheme.gamma / n) * l1);
        }
        case DepositKind::L2: {
            double sq = 0.0;
            for (double w : weights) sq += w * w;
            const double n = weights.empty() ? 1.0 : static_cast<double>(weights.size());
            return (1.0 - scheme.alpha) * tau_old +
                   scheme.alpha * reward_term(fitness, (scheme.gamma / (2.0 * n)) * sq);
        }
    }
    return tau_old;
}

double penalize_constant(double tau_old, double c) {
    return tau_old - c;
}

double evaporate(double tau_current, double tau_original, double beta) {
    return (1.0 - beta) * tau_current + beta * tau_original;
}

ForwardBiasReport apply_forward_bias(Colony& colony) {
    ForwardBiasReport report;
    const auto& fwd_edges = colony.forward_edges();
    const auto& rec_edges = colony.recurrent_edges();

    for (std::size_t n = 0; n < colony.node_count(); ++n) {
        const NodeId id = colony.nodes()[n].id;
        const auto& fwd = colony.forward_out(n);
        if (fwd.empty()) continue; // output nodes have no forward successors

        double fwd_total = 0.0;
        for (std::size_t e : fwd) fwd_total += fwd_edges[e].pheromone;

        double bwd_total = 0.0;
        std::size_t bwd_count = 0;
        for (std::size_t e : colony.recurrent_out(n)) {
            if (rec_edges[e].dst.layer <= id.layer) {
                bwd_total += rec_edges[e].pheromone;
                ++bwd_count;
            }
        }

        const bool flagged = fwd_total < 0.75 * bwd_total || bwd_count > fwd.size();
        if (!flagged) continue;

        ++report.nodes_flagged;
        for (std::size_t e : fwd) {
            const double scaled = (fwd_edges[e].pheromone / fwd_total) * bwd_total;
            colony.set_forward_pheromone(e, scaled);
            ++report.edges_rescaled;
        }
    }
    return report;
}

} // namespace asne
