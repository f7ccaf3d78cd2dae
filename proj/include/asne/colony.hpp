#ifndef ASNE_COLONY_HPP
#define ASNE_COLONY_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asne/rng.hpp"

namespace asne {

// Identifies a processing element in the superstructure.
// layer 0 is the input layer, layer hidden_layers+1 the output layer.
struct NodeId {
    std::int32_t layer = 0;
    std::int32_t pos = 0;

    auto operator<=>(const NodeId&) const = default;
};

enum class CellKind : std::uint8_t {
    SimpleNeuron = 0,
    Delta = 1,
    GRU = 2,
    LSTM = 3,
    MGU = 4,
    UGRNN = 5,
};

inline constexpr std::size_t kCellKindCount = 6;

const char* cell_kind_name(CellKind kind);
std::optional<CellKind> cell_kind_from_name(const std::string& name);

struct ColonyConfig {
    int input_width = 1;
    int hidden_layers = 0;
    int hidden_width = 1;
    int output_width = 1;
    int max_skip = 1;
    bool layer_jumps = true;
    double tau_init = 1.0;
    double tau_min = 0.05;
    double tau_max = 20.0;

    void validate() const; // throws ConfigError
    int num_layers() const { return hidden_layers + 2; }
    int layer_width(int layer) const;
};

struct ColonyNode {
    NodeId id;
    // Pheromone per cell kind; meaningful for hidden nodes only (input and
    // output nodes are always simple neurons).
    std::array<double, kCellKindCount> cell_pheromones{};
};

struct ForwardEdge {
    NodeId src;
    NodeId dst; // dst.layer > src.layer, always
    double pheromone = 1.0;
    double lamarck_weight = 0.0;
};

struct RecurrentEdge {
    NodeId src;
    NodeId dst; // never an input node
    int time_skip = 1;
    double pheromone = 1.0;
    double lamarck_weight = 0.0;
};

inline double clamp_pheromone(double level, double tau_min, double tau_max) {
    if (level < tau_min) return tau_min;
    if (level > tau_max) return tau_max;
    return level;
}

enum class EdgeMode { ForwardOnly, ForwardAndRecurrent };
enum class JumpMode { LayerJump, NoJump };

// One entry of a traversal candidate list.
struct CandidateEdge {
    bool recurrent = false;
    std::size_t index = 0; // into forward_edges() or recurrent_edges()
};

// The fully materialized search graph. Structure is fixed at construction;
// only pheromone levels and Lamarckian weights mutate afterwards, and all
// pheromone writes are clamped to [tau_min, tau_max].
class Colony {
public:
    static Colony build(const ColonyConfig& config, Rng& rng);

    const ColonyConfig& config() const { return config_; }
    const std::vector<ColonyNode>& nodes() const { return nodes_; }
    const std::vector<ForwardEdge>& forward_edges() const { return forward_edges_; }
    const std::vector<RecurrentEdge>& recurrent_edges() const { return recurrent_edges_; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t node_index(NodeId id) const;
    bool is_input(NodeId id) const { return id.layer == 0; }
    bool is_output(NodeId id) const { return id.layer == config_.hidden_layers + 1; }
    bool is_hidden(NodeId id) const { return !is_input(id) && !is_output(id); }

    std::optional<std::size_t> find_forward(NodeId src, NodeId dst) const;
    std::optional<std::size_t> find_recurrent(NodeId src, NodeId dst, int skip) const;

    // Candidate out-edges of `node`, ordered by (dst.layer, dst.pos, skip)
    // with forward edges sorting before recurrent ones to the same node.
    // NoJump restricts forward candidates to the next layer.
    void edges_out_of(NodeId node, EdgeMode mode, JumpMode jump,
                      std::vector<CandidateEdge>& out) const;
    std::vector<CandidateEdge> edges_out_of(NodeId node, EdgeMode mode, JumpMode jump) const;

    // Out-edge index slices used by the forward-bias pass.
    const std::vector<std::size_t>& forward_out(std::size_t node_idx) const {
        return forward_out_[node_idx];
    }
    const std::vector<std::size_t>& recurrent_out(std::size_t node_idx) const {
        return recurrent_out_[node_idx];
    }

    // Mutators; the only state that may change after construction.
    void set_forward_pheromone(std::size_t i, double level);
    void set_recurrent_pheromone(std::size_t i, double level);
    void set_cell_pheromone(std::size_t node_idx, CellKind kind, double level);
    void set_forward_weight(std::size_t i, double w) { forward_edges_[i].lamarck_weight = w; }
    void set_recurrent_weight(std::size_t i, double w) { recurrent_edges_[i].lamarck_weight = w; }

    double clamp(double level) const {
        return clamp_pheromone(level, config_.tau_min, config_.tau_max);
    }

    // Closed-form structural counts; construction is checked against these.
    static std::size_t expected_node_count(const ColonyConfig& c);
    static std::size_t expected_forward_edge_count(const ColonyConfig& c);
    static std::size_t expected_recurrent_edge_count(const ColonyConfig& c);

private:
    Colony() = default;

    ColonyConfig config_;
    std::vector<ColonyNode> nodes_;           // canonical order: (layer, pos)
    std::vector<ForwardEdge> forward_edges_;  // canonical order: (src, dst)
    std::vector<RecurrentEdge> recurrent_edges_; // canonical order: (src, dst, skip)
    std::vector<std::vector<std::size_t>> forward_out_;
    std::vector<std::vector<std::size_t>> recurrent_out_;
    std::vector<std::size_t> layer_offset_;
};

} // namespace asne

#endif
