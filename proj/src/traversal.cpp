#include "asne/traversal.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "asne/cells.hpp"
#include "asne/error.hpp"

namespace asne {

namespace {
struct SpeciesLabel {
    AntSpecies species;
    const char* label;
};
constexpr SpeciesLabel kSpeciesLabels[] = {
    {AntSpecies::Standard, "std"},
    {AntSpecies::StandardBias, "stdbias"},
    {AntSpecies::Explorer, "exp"},
    {AntSpecies::ExplorerForward, "expfwd"},
    {AntSpecies::ExplorerBackward, "expbwd"},
    {AntSpecies::ExplorerForwardBackward, "expfwdbwd"},
};
} // namespace

const char* ant_species_label(AntSpecies s) {
    for (const auto& e : kSpeciesLabels) {
        if (e.species == s) return e.label;
    }
    return "?";
}

std::optional<AntSpecies> ant_species_from_label(const std::string& label) {
    for (const auto& e : kSpeciesLabels) {
        if (label == e.label) return e.species;
    }
    return std::nullopt;
}

const char* jump_mode_label(JumpMode j) {
    return j == JumpMode::LayerJump ? "aj" : "oj";
}

std::optional<JumpMode> jump_mode_from_label(const std::string& label) {
    if (label == "aj") return JumpMode::LayerJump;
    if (label == "oj") return JumpMode::NoJump;
    return std::nullopt;
}

std::size_t roulette_select(std::span<const double> levels, Rng& rng) {
    if (levels.empty()) throw InternalError("roulette_select: empty candidate list");
    double total = 0.0;
    for (double l : levels) total += l;
    double r = rng.uniform() * total;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        r -= levels[i];
        if (r < 0.0) return i;
    }
    return levels.size() - 1; // numeric slack lands on the last candidate
}

namespace {

std::size_t pick_candidate(const Colony& colony, const std::vector<CandidateEdge>& candidates,
                           std::vector<double>& levels, Rng& rng) {
    levels.clear();
    for (const CandidateEdge& c : candidates) {
        levels.push_back(c.recurrent ? colony.recurrent_edges()[c.index].pheromone
                                     : colony.forward_edges()[c.index].pheromone);
    }
    return roulette_select(levels, rng);
}

} // namespace

AntWalk run_standard_ant(const Colony& colony, JumpMode jump, Rng& rng) {
    AntWalk walk;
    NodeId node{0, static_cast<std::int32_t>(rng.index(colony.config().input_width))};
    walk.nodes.push_back(node);

    const std::size_t step_cap = 10 * colony.node_count();
    std::vector<CandidateEdge> candidates;
    std::vector<double> levels;

    std::size_t steps = 0;
    while (!colony.is_output(node)) {
        if (steps++ >= step_cap) {
            walk.truncated = true;
            break;
        }
        colony.edges_out_of(node, EdgeMode::ForwardAndRecurrent, jump, candidates);
        const CandidateEdge& chosen = candidates[pick_candidate(colony, candidates, levels, rng)];
        if (chosen.recurrent) {
            walk.recurrent_edges.push_back(chosen.index);
            node = colony.recurrent_edges()[chosen.index].dst;
        } else {
            walk.forward_edges.push_back(chosen.index);
            node = colony.forward_edges()[chosen.index].dst;
        }
        walk.nodes.push_back(node);
    }
    return walk;
}

AntWalk run_explorer_ant(const Colony& colony, JumpMode jump, Rng& rng) {
    AntWalk walk;
    NodeId node{0, static_cast<std::int32_t>(rng.index(colony.config().input_width))};
    walk.nodes.push_back(node);

    std::vector<CandidateEdge> candidates;
    std::vector<double> levels;
    while (!colony.is_output(node)) {
        colony.edges_out_of(node, EdgeMode::ForwardOnly, jump, candidates);
        const CandidateEdge& chosen = candidates[pick_candidate(colony, candidates, levels, rng)];
        walk.forward_edges.push_back(chosen.index);
        node = colony.forward_edges()[chosen.index].dst;
        walk.nodes.push_back(node);
    }
    return walk;
}

std::vector<std::size_t> run_social_ant(const Colony& colony,
                                        const std::vector<NodeId>& base_nodes,
                                        SocialDirection direction, Rng& rng) {
    std::vector<std::size_t> chosen;
    auto in_base = [&](NodeId id) {
        return std::binary_search(base_nodes.begin(), base_nodes.end(), id);
    };

    // Forward social ants start at a base input node, backward ones at a
    // base output node.
    std::vector<NodeId> starts;
    for (NodeId id : base_nodes) {
        const bool want = direction == SocialDirection::ForwardRecurrent ? colony.is_input(id)
                                                                         : colony.is_output(id);
        if (want) starts.push_back(id);
    }
    if (starts.empty()) return chosen;

    NodeId node = starts[rng.index(starts.size())];
    std::vector<std::size_t> candidates;
    std::vector<double> levels;
    while (true) {
        if (direction == SocialDirection::ForwardRecurrent && colony.is_output(node)) break;
        candidates.clear();
        levels.clear();
        for (std::size_t e : colony.recurrent_out(colony.node_index(node))) {
            const RecurrentEdge& edge = colony.recurrent_edges()[e];
            const bool forward_move = edge.dst.layer > node.layer;
            const bool backward_move = edge.dst.layer < node.layer;
            const bool legal = direction == SocialDirection::ForwardRecurrent ? forward_move
                                                                              : backward_move;
            if (legal && in_base(edge.dst)) {
                candidates.push_back(e);
                levels.push_back(edge.pheromone);
            }
        }
        if (candidates.empty()) break;
        const std::size_t e = candidates[roulette_select(levels, rng)];
        chosen.push_back(e);
        node = colony.recurrent_edges()[e].dst;
    }
    return chosen;
}

std::optional<RnnGenome> assemble_genome(const Colony& colony, const std::vector<AntWalk>& walks,
                                         const std::vector<std::size_t>& social_recurrent,
                                         bool lamarckian, Rng& rng) {
    std::set<NodeId> node_set;
    std::set<std::size_t> fwd_set;
    std::set<std::size_t> rec_set;
    for (const AntWalk& walk : walks) {
        node_set.insert(walk.nodes.begin(), walk.nodes.end());
        fwd_set.insert(walk.forward_edges.begin(), walk.forward_edges.end());
        rec_set.insert(walk.recurrent_edges.begin(), walk.recurrent_edges.end());
    }
    for (std::size_t e : social_recurrent) {
        rec_set.insert(e);
        node_set.insert(colony.recurrent_edges()[e].src);
        node_set.insert(colony.recurrent_edges()[e].dst);
    }

    std::vector<NodeId> ids(node_set.begin(), node_set.end());
    auto rank_of = [&](NodeId id) {
        return static_cast<std::size_t>(
            std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };

    // Drop everything that cannot influence an output node: reverse
    // reachability over the combined directed graph prunes the dangling
    // tails left by truncated standard walks.
    std::vector<std::vector<std::size_t>> rev(ids.size());
    for (std::size_t e : fwd_set) {
        const ForwardEdge& edge = colony.forward_edges()[e];
        rev[rank_of(edge.dst)].push_back(rank_of(edge.src));
    }
    for (std::size_t e : rec_set) {
        const RecurrentEdge& edge = colony.recurrent_edges()[e];
        rev[rank_of(edge.dst)].push_back(rank_of(edge.src));
    }
    std::vector<char> keeps(ids.size(), 0);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (colony.is_output(ids[i])) {
            keeps[i] = 1;
            queue.push_back(i);
        }
    }
    if (queue.empty()) return std::nullopt; // no ant reached an output node
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : rev[u]) {
            if (!keeps[v]) {
                keeps[v] = 1;
                queue.push_back(v);
            }
        }
    }

    RnnGenome genome;
    genome.output_layer = colony.config().hidden_layers + 1;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (keeps[i]) genome.nodes.push_back(GenomeNode{ids[i], CellKind::SimpleNeuron, {}});
    }

    auto kept = [&](NodeId id) { return keeps[rank_of(id)] != 0; };
    for (std::size_t e : fwd_set) {
        const ForwardEdge& edge = colony.forward_edges()[e];
        if (kept(edge.src) && kept(edge.dst))
            genome.forward_edges.push_back(GenomeForwardEdge{edge.src, edge.dst, 0.0});
    }
    for (std::size_t e : rec_set) {
        const RecurrentEdge& edge = colony.recurrent_edges()[e];
        if (kept(edge.src) && kept(edge.dst))
            genome.recurrent_edges.push_back(
                GenomeRecurrentEdge{edge.src, edge.dst, edge.time_skip, 0.0});
    }

    if (genome.input_node_count() == 0 || !genome.has_forward_path()) return std::nullopt;

    // Cell kinds for hidden nodes by pheromone roulette, then parameters,
    // then edge weights; the draw order is fixed so runs are reproducible.
    for (GenomeNode& n : genome.nodes) {
        if (colony.is_hidden(n.id)) {
            const auto& levels = colony.nodes()[colony.node_index(n.id)].cell_pheromones;
            n.kind = static_cast<CellKind>(roulette_select(levels, rng));
        }
        if (!genome.is_input(n.id)) {
            n.params.resize(cell_param_count(n.kind));
            cell_init_params(n.kind, n.params, rng);
        }
    }
    for (GenomeForwardEdge& e : genome.forward_edges) {
        e.weight = lamarckian
                       ? colony.forward_edges()[*colony.find_forward(e.src, e.dst)].lamarck_weight
                       : rng.uniform(-0.5, 0.5);
    }
    for (GenomeRecurrentEdge& e : genome.recurrent_edges) {
        e.weight = lamarckian ? colony.recurrent_edges()[*colony.find_recurrent(
                                                             e.src, e.dst, e.time_skip)]
                                    .lamarck_weight
                              : rng.uniform(-0.5, 0.5);
    }

    genome.validate();
    return genome;
}

SwarmContingents swarm_contingents(AntSpecies species, int ants) {
    SwarmContingents c;
    switch (species) {
        case AntSpecies::Standard:
        case AntSpecies::StandardBias:
            c.standard = ants;
            break;
        case AntSpecies::Explorer:
            c.explorers = ants;
            break;
        case AntSpecies::ExplorerForward:
            c.explorers = ants / 2;
            c.forward_social = ants / 2;
            break;
        case AntSpecies::ExplorerBackward:
            c.explorers = ants / 2;
            c.backward_social = ants / 2;
            break;
        case AntSpecies::ExplorerForwardBackward:
            c.explorers = ants / 2;
            c.forward_social = ants / 4;
            c.backward_social = ants / 4;
            break;
    }
    return c;
}

std::optional<RnnGenome> swarm_extract(const Colony& colony, const SwarmOptions& options,
                                       std::int64_t generation, std::uint64_t genome_seed) {
    Rng rng(genome_seed);
    const SwarmContingents split = swarm_contingents(options.species, options.ants);

    for (int attempt = 0; attempt <= options.retry_cap; ++attempt) {
        std::vector<AntWalk> walks;
        std::vector<std::size_t> social;

        for (int a = 0; a < split.standard; ++a)
            walks.push_back(run_standard_ant(colony, options.jump, rng));
        for (int a = 0; a < split.explorers; ++a)
            walks.push_back(run_explorer_ant(colony, options.jump, rng));

        if (split.forward_social > 0 || split.backward_social > 0) {
            std::set<NodeId> base_set;
            for (const AntWalk& w : walks) base_set.insert(w.nodes.begin(), w.nodes.end());
            const std::vector<NodeId> base(base_set.begin(), base_set.end());

            for (int a = 0; a < split.forward_social; ++a) {
                auto picked = run_social_ant(colony, base, SocialDirection::ForwardRecurrent, rng);
                social.insert(social.end(), picked.begin(), picked.end());
            }
            for (int a = 0; a < split.backward_social; ++a) {
                auto picked =
                    run_social_ant(colony, base, SocialDirection::BackwardRecurrent, rng);
                social.insert(social.end(), picked.begin(), picked.end());
            }
        }

        auto genome = assemble_genome(colony, walks, social, options.lamarckian, rng);
        if (genome) {
            genome->generation = generation;
            genome->seed = genome_seed;
            return genome;
        }
    }
    return std::nullopt;
}

} // namespace asne
