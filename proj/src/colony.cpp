#include "asne/colony.hpp"

#include <algorithm>
#include <stdexcept>

#include "asne/error.hpp"

namespace asne {

namespace {
constexpr const char* kCellNames[kCellKindCount] = {
    "simple", "delta", "gru", "lstm", "mgu", "ugrnn",
};
}

const char* cell_kind_name(CellKind kind) {
    return kCellNames[static_cast<std::size_t>(kind)];
}

std::optional<CellKind> cell_kind_from_name(const std::string& name) {
    for (std::size_t i = 0; i < kCellKindCount; ++i) {
        if (name == kCellNames[i]) return static_cast<CellKind>(i);
    }
    return std::nullopt;
}

void ColonyConfig::validate() const {
    if (input_width < 1) throw ConfigError("colony: input_width must be >= 1");
    if (output_width < 1) throw ConfigError("colony: output_width must be >= 1");
    if (hidden_layers < 0) throw ConfigError("colony: hidden_layers must be >= 0");
    if (hidden_layers > 0 && hidden_width < 1)
        throw ConfigError("colony: hidden_width must be >= 1");
    if (max_skip < 1) throw ConfigError("colony: max_skip must be >= 1");
    if (!(tau_min > 0.0)) throw ConfigError("colony: tau_min must be > 0");
    if (!(tau_min < tau_init && tau_init < tau_max))
        throw ConfigError("colony: require tau_min < tau_init < tau_max");
}

int ColonyConfig::layer_width(int layer) const {
    if (layer == 0) return input_width;
    if (layer == hidden_layers + 1) return output_width;
    return hidden_width;
}

std::size_t Colony::expected_node_count(const ColonyConfig& c) {
    return static_cast<std::size_t>(c.input_width) +
           static_cast<std::size_t>(c.hidden_layers) * c.hidden_width +
           static_cast<std::size_t>(c.output_width);
}

std::size_t Colony::expected_forward_edge_count(const ColonyConfig& c) {
    std::size_t total = 0;
    const int layers = c.num_layers();
    for (int i = 0; i < layers; ++i) {
        for (int j = i + 1; j < layers; ++j) {
            if (!c.layer_jumps && j != i + 1) continue;
            total += static_cast<std::size_t>(c.layer_width(i)) * c.layer_width(j);
        }
    }
    return total;
}

std::size_t Colony::expected_recurrent_edge_count(const ColonyConfig& c) {
    const std::size_t n = expected_node_count(c);
    const std::size_t non_input = n - static_cast<std::size_t>(c.input_width);
    return static_cast<std::size_t>(c.max_skip) * n * non_input;
}

Colony Colony::build(const ColonyConfig& config, Rng& rng) {
    config.validate();

    Colony colony;
    colony.config_ = config;

    const int layers = config.num_layers();
    colony.layer_offset_.assign(static_cast<std::size_t>(layers) + 1, 0);
    for (int l = 0; l < layers; ++l) {
        colony.layer_offset_[static_cast<std::size_t>(l) + 1] =
            colony.layer_offset_[static_cast<std::size_t>(l)] +
            static_cast<std::size_t>(config.layer_width(l));
    }

    for (int l = 0; l < layers; ++l) {
        for (int p = 0; p < config.layer_width(l); ++p) {
            ColonyNode node;
            node.id = NodeId{l, p};
            node.cell_pheromones.fill(config.tau_init);
            colony.nodes_.push_back(node);
        }
    }

    // Forward edges (canonical order: src id, then dst id). Weights are the
    // colony's Lamarckian bookkeeping, initialized U(-0.5, 0.5).
    for (const ColonyNode& src : colony.nodes_) {
        for (const ColonyNode& dst : colony.nodes_) {
            if (dst.id.layer <= src.id.layer) continue;
            if (!config.layer_jumps && dst.id.layer != src.id.layer + 1) continue;
            colony.forward_edges_.push_back(
                ForwardEdge{src.id, dst.id, config.tau_init, rng.uniform(-0.5, 0.5)});
        }
    }

    // Recurrent edges: every ordered (src, dst) pair with non-input dst
    // (self-loops included), one edge per allowed time skip.
    for (const ColonyNode& src : colony.nodes_) {
        for (const ColonyNode& dst : colony.nodes_) {
            if (dst.id.layer == 0) continue;
            for (int skip = 1; skip <= config.max_skip; ++skip) {
                colony.recurrent_edges_.push_back(RecurrentEdge{
                    src.id, dst.id, skip, config.tau_init, rng.uniform(-0.5, 0.5)});
            }
        }
    }

    if (colony.nodes_.size() != expected_node_count(config) ||
        colony.forward_edges_.size() != expected_forward_edge_count(config) ||
        colony.recurrent_edges_.size() != expected_recurrent_edge_count(config)) {
        throw InternalError("colony: constructed counts disagree with closed forms");
    }

    colony.forward_out_.assign(colony.nodes_.size(), {});
    colony.recurrent_out_.assign(colony.nodes_.size(), {});
    for (std::size_t i = 0; i < colony.forward_edges_.size(); ++i) {
        colony.forward_out_[colony.node_index(colony.forward_edges_[i].src)].push_back(i);
    }
    for (std::size_t i = 0; i < colony.recurrent_edges_.size(); ++i) {
        colony.recurrent_out_[colony.node_index(colony.recurrent_edges_[i].src)].push_back(i);
    }

    return colony;
}

std::size_t Colony::node_index(NodeId id) const {
    if (id.layer < 0 || id.layer >= config_.num_layers() || id.pos < 0 ||
        id.pos >= config_.layer_width(id.layer)) {
        throw InternalError("colony: node id out of range");
    }
    return layer_offset_[static_cast<std::size_t>(id.layer)] + static_cast<std::size_t>(id.pos);
}

std::optional<std::size_t> Colony::find_forward(NodeId src, NodeId dst) const {
    const auto it = std::lower_bound(
        forward_edges_.begin(), forward_edges_.end(), std::make_pair(src, dst),
        [](const ForwardEdge& e, const std::pair<NodeId, NodeId>& key) {
            if (e.src != key.first) return e.src < key.first;
            return e.dst < key.second;
        });
    if (it == forward_edges_.end() || it->src != src || it->dst != dst) return std::nullopt;
    return static_cast<std::size_t>(it - forward_edges_.begin());
}

std::optional<std::size_t> Colony::find_recurrent(NodeId src, NodeId dst, int skip) const {
    if (dst.layer == 0 || skip < 1 || skip > config_.max_skip) return std::nullopt;
    // The recurrent domain is dense, so the index is arithmetic: non-input
    // nodes are exactly the canonical ranks >= input_width.
    const std::size_t non_input = nodes_.size() - static_cast<std::size_t>(config_.input_width);
    const std::size_t src_rank = node_index(src);
    const std::size_t dst_rank = node_index(dst) - static_cast<std::size_t>(config_.input_width);
    const std::size_t idx =
        (src_rank * non_input + dst_rank) * static_cast<std::size_t>(config_.max_skip) +
        static_cast<std::size_t>(skip - 1);
    return idx;
}

void Colony::edges_out_of(NodeId node, EdgeMode mode, JumpMode jump,
                          std::vector<CandidateEdge>& out) const {
    out.clear();
    const std::size_t idx = node_index(node);

    // Per-construction ordering of the out lists is already (dst.layer,
    // dst.pos[, skip]); merge forward-before-recurrent per destination.
    const auto& fwd = forward_out_[idx];
    const auto& rec = recurrent_out_[idx];

    auto fwd_ok = [&](std::size_t e) {
        return jump == JumpMode::LayerJump || forward_edges_[e].dst.layer == node.layer + 1;
    };

    if (mode == EdgeMode::ForwardOnly) {
        for (std::size_t e : fwd) {
            if (fwd_ok(e)) out.push_back(CandidateEdge{false, e});
        }
        return;
    }

    std::size_t fi = 0;
    std::size_t ri = 0;
    while (fi < fwd.size() || ri < rec.size()) {
        const bool take_fwd = [&] {
            if (fi >= fwd.size()) return false;
            if (ri >= rec.size()) return true;
            const NodeId fd = forward_edges_[fwd[fi]].dst;
            const NodeId rd = recurrent_edges_[rec[ri]].dst;
            return fd <= rd;
        }();
        if (take_fwd) {
            if (fwd_ok(fwd[fi])) out.push_back(CandidateEdge{false, fwd[fi]});
            ++fi;
        } else {
            out.push_back(CandidateEdge{true, rec[ri]});
            ++ri;
        }
    }
}

std::vector<CandidateEdge> Colony::edges_out_of(NodeId node, EdgeMode mode, JumpMode jump) const {
    std::vector<CandidateEdge> out;
    edges_out_of(node, mode, jump, out);
    return out;
}

void Colony::set_forward_pheromone(std::size_t i, double level) {
    forward_edges_[i].pheromone = clamp(level);
}

void Colony::set_recurrent_pheromone(std::size_t i, double level) {
    recurrent_edges_[i].pheromone = clamp(level);
}

void Colony::set_cell_pheromone(std::size_t node_idx, CellKind kind, double level) {
    nodes_[node_idx].cell_pheromones[static_cast<std::size_t>(kind)] = clamp(level);
}

} // namespace asne
