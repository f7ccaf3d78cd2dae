#ifndef ASNE_GENOME_HPP
#define ASNE_GENOME_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "asne/colony.hpp"

namespace asne {

struct GenomeNode {
    NodeId id;
    CellKind kind = CellKind::SimpleNeuron;
    std::vector<double> params; // empty for input nodes (pass-through sources)
};

struct GenomeForwardEdge {
    NodeId src;
    NodeId dst;
    double weight = 0.0;
};

struct GenomeRecurrentEdge {
    NodeId src;
    NodeId dst;
    int time_skip = 1;
    double weight = 0.0;
};

// One extracted RNN candidate. Nodes and edges are kept in canonical order
// (sorted by id / (src, dst[, skip])), which makes serialization and the
// packed weight vector deterministic.
struct RnnGenome {
    std::vector<GenomeNode> nodes;
    std::vector<GenomeForwardEdge> forward_edges;
    std::vector<GenomeRecurrentEdge> recurrent_edges;
    std::int32_t output_layer = 1; // layer index of the colony's output layer

    std::int64_t generation = -1;
    std::uint64_t seed = 0;
    double fitness = std::numeric_limits<double>::quiet_NaN(); // unset until trained

    std::optional<std::size_t> node_rank(NodeId id) const;
    bool is_input(NodeId id) const { return id.layer == 0; }
    bool is_output(NodeId id) const { return id.layer == output_layer; }
    bool has_fitness() const { return fitness == fitness; }

    // Full trainable parameter vector: per-node cell parameters in node
    // order, then forward edge weights, then recurrent edge weights.
    std::size_t weight_count() const;
    std::vector<double> pack_weights() const;
    void unpack_weights(std::span<const double> w);

    std::size_t input_node_count() const;
    std::size_t output_node_count() const;
    std::array<std::size_t, kCellKindCount> cell_histogram() const;

    // True when some present input node reaches an output node over forward
    // edges only.
    bool has_forward_path() const;

    // Checks ordering, endpoint membership, parameter shapes, weight
    // finiteness and forward-path connectivity; throws InternalError.
    void validate() const;
};

} // namespace asne

#endif
