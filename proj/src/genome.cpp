#include "asne/genome.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "asne/cells.hpp"
#include "asne/error.hpp"

namespace asne {

std::optional<std::size_t> RnnGenome::node_rank(NodeId id) const {
    const auto it = std::lower_bound(
        nodes.begin(), nodes.end(), id,
        [](const GenomeNode& n, const NodeId& key) { return n.id < key; });
    if (it == nodes.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
}

std::size_t RnnGenome::weight_count() const {
    std::size_t total = forward_edges.size() + recurrent_edges.size();
    for (const GenomeNode& n : nodes) total += n.params.size();
    return total;
}

std::vector<double> RnnGenome::pack_weights() const {
    std::vector<double> w;
    w.reserve(weight_count());
    for (const GenomeNode& n : nodes) w.insert(w.end(), n.params.begin(), n.params.end());
    for (const GenomeForwardEdge& e : forward_edges) w.push_back(e.weight);
    for (const GenomeRecurrentEdge& e : recurrent_edges) w.push_back(e.weight);
    return w;
}

void RnnGenome::unpack_weights(std::span<const double> w) {
    if (w.size() != weight_count())
        throw InternalError("genome: weight vector size mismatch");
    std::size_t i = 0;
    for (GenomeNode& n : nodes) {
        for (double& p : n.params) p = w[i++];
    }
    for (GenomeForwardEdge& e : forward_edges) e.weight = w[i++];
    for (GenomeRecurrentEdge& e : recurrent_edges) e.weight = w[i++];
}

std::size_t RnnGenome::input_node_count() const {
    std::size_t c = 0;
    for (const GenomeNode& n : nodes) c += is_input(n.id) ? 1 : 0;
    return c;
}

std::size_t RnnGenome::output_node_count() const {
    std::size_t c = 0;
    for (const GenomeNode& n : nodes) c += is_output(n.id) ? 1 : 0;
    return c;
}

std::array<std::size_t, kCellKindCount> RnnGenome::cell_histogram() const {
    std::array<std::size_t, kCellKindCount> hist{};
    for (const GenomeNode& n : nodes) {
        if (is_input(n.id)) continue;
        hist[static_cast<std::size_t>(n.kind)]++;
    }
    return hist;
}

bool RnnGenome::has_forward_path() const {
    if (nodes.empty()) return false;

    std::vector<std::vector<std::size_t>> out(nodes.size());
    for (const GenomeForwardEdge& e : forward_edges) {
        const auto s = node_rank(e.src);
        const auto d = node_rank(e.dst);
        if (s && d) out[*s].push_back(*d);
    }

    std::vector<char> reached(nodes.size(), 0);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (is_input(nodes[i].id)) {
            reached[i] = 1;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        if (is_output(nodes[u].id)) return true;
        for (std::size_t v : out[u]) {
            if (!reached[v]) {
                reached[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return false;
}

void RnnGenome::validate() const {
    if (nodes.empty()) throw InternalError("genome: empty node set");
    if (!std::is_sorted(nodes.begin(), nodes.end(),
                        [](const GenomeNode& a, const GenomeNode& b) { return a.id < b.id; }))
        throw InternalError("genome: nodes not in canonical order");

    for (const GenomeNode& n : nodes) {
        const std::size_t expect = is_input(n.id) ? 0 : cell_param_count(n.kind);
        if (n.params.size() != expect)
            throw InternalError("genome: node parameter shape mismatch");
        if ((is_input(n.id) || is_output(n.id)) && n.kind != CellKind::SimpleNeuron)
            throw InternalError("genome: input/output nodes must be simple neurons");
        for (double p : n.params) {
            if (!std::isfinite(p)) throw InternalError("genome: non-finite node parameter");
        }
    }

    auto has_node = [&](NodeId id) { return node_rank(id).has_value(); };
    for (const GenomeForwardEdge& e : forward_edges) {
        if (!has_node(e.src) || !has_node(e.dst))
            throw InternalError("genome: forward edge endpoint missing");
        if (!(e.src.layer < e.dst.layer))
            throw InternalError("genome: forward edge not strictly forward");
        if (!std::isfinite(e.weight)) throw InternalError("genome: non-finite edge weight");
    }
    for (const GenomeRecurrentEdge& e : recurrent_edges) {
        if (!has_node(e.src) || !has_node(e.dst))
            throw InternalError("genome: recurrent edge endpoint missing");
        if (e.dst.layer == 0) throw InternalError("genome: recurrent edge into input node");
        if (e.time_skip < 1) throw InternalError("genome: non-positive time skip");
        if (!std::isfinite(e.weight)) throw InternalError("genome: non-finite edge weight");
    }

    if (input_node_count() == 0) throw InternalError("genome: no input node present");
    if (output_node_count() == 0) throw InternalError("genome: no output node present");
    if (!has_forward_path()) throw InternalError("genome: no forward input-output path");
}

} // namespace asne
