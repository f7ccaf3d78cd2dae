#ifndef ASNE_TRAVERSAL_HPP
#define ASNE_TRAVERSAL_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asne/colony.hpp"
#include "asne/genome.hpp"
#include "asne/rng.hpp"

namespace asne {

enum class AntSpecies {
    Standard,
    StandardBias,
    Explorer,
    ExplorerForward,
    ExplorerBackward,
    ExplorerForwardBackward,
};

// Short labels as used on the command line and in summaries.
const char* ant_species_label(AntSpecies s);
std::optional<AntSpecies> ant_species_from_label(const std::string& label);

const char* jump_mode_label(JumpMode j);
std::optional<JumpMode> jump_mode_from_label(const std::string& label);

enum class SocialDirection { ForwardRecurrent, BackwardRecurrent };

struct AntWalk {
    std::vector<NodeId> nodes;                   // visit order
    std::vector<std::size_t> forward_edges;      // colony forward edge indices
    std::vector<std::size_t> recurrent_edges;    // colony recurrent edge indices
    bool truncated = false;                      // standard walk hit the step cap
};

// Picks index i with probability levels[i] / sum(levels). Levels must be
// positive and non-empty; callers are responsible for dead-end handling.
std::size_t roulette_select(std::span<const double> levels, Rng& rng);

// Unbiased wanderer: any out-edge, forward or recurrent, until it reaches an
// output node or the step cap (10x node count).
AntWalk run_standard_ant(const Colony& colony, JumpMode jump, Rng& rng);

// Forward-only walker; the forward DAG guarantees it reaches an output node.
AntWalk run_explorer_ant(const Colony& colony, JumpMode jump, Rng& rng);

// Recurrent-edge chooser restricted to explorer-selected nodes. Forward
// ants move in strictly increasing layer order until they reach an output
// node; backward ants in strictly decreasing order until no legal move
// remains. Returns the chosen colony recurrent edge indices.
std::vector<std::size_t> run_social_ant(const Colony& colony,
                                        const std::vector<NodeId>& base_nodes,
                                        SocialDirection direction, Rng& rng);

struct SwarmOptions {
    AntSpecies species = AntSpecies::Explorer;
    JumpMode jump = JumpMode::LayerJump;
    int ants = 40;
    bool lamarckian = true; // copy colony weights into new genomes
    int retry_cap = 5;      // swarm re-runs allowed when assembly rejects
};

// Ant head-count split per species mode: two-species modes halve the ants
// between explorers and social ants, the forward-and-backward mode quarters
// the social contingent.
struct SwarmContingents {
    int standard = 0;
    int explorers = 0;
    int forward_social = 0;
    int backward_social = 0;
};

SwarmContingents swarm_contingents(AntSpecies species, int ants);

// Deduplicates walk selections into a trainable genome: cell kinds drawn
// from node pheromones, initial weights from the colony's Lamarckian
// bookkeeping (or fresh uniform draws), dangling recurrent-only tails
// pruned. Returns nullopt when the union has no forward input-output path.
std::optional<RnnGenome> assemble_genome(const Colony& colony,
                                         const std::vector<AntWalk>& walks,
                                         const std::vector<std::size_t>& social_recurrent,
                                         bool lamarckian, Rng& rng);

// One full swarm invocation per Algorithm "Ants_Swarm": runs the species'
// ant contingents, assembles, and retries up to retry_cap times on
// rejection. generation/seed are recorded as provenance.
std::optional<RnnGenome> swarm_extract(const Colony& colony, const SwarmOptions& options,
                                       std::int64_t generation, std::uint64_t genome_seed);

} // namespace asne

#endif
