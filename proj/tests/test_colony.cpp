#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "asne/colony.hpp"
#include "asne/error.hpp"
#include "asne/rng.hpp"

using namespace asne;

namespace {

ColonyConfig paper_config() {
    ColonyConfig c;
    c.input_width = 12;
    c.hidden_layers = 3;
    c.hidden_width = 12;
    c.output_width = 1;
    c.max_skip = 3;
    c.layer_jumps = true;
    return c;
}

Colony build(const ColonyConfig& c, std::uint64_t seed = 1) {
    Rng rng(seed);
    return Colony::build(c, rng);
}

} // namespace

TEST_CASE("paper-shaped colony has 49 nodes") {
    const Colony colony = build(paper_config());
    CHECK(colony.node_count() == 49);
}

TEST_CASE("paper-shaped colony forward edge count follows the layer-pair sum") {
    const Colony colony = build(paper_config());
    // 144 per hidden/input layer pair (6 pairs) plus 12 per layer-to-output
    // pair (4 pairs)
    CHECK(colony.forward_edges().size() == 144 * 6 + 12 * 4);
    CHECK(colony.forward_edges().size() == 912);
    CHECK(Colony::expected_forward_edge_count(paper_config()) == 912);
}

TEST_CASE("smallest colony: one forward edge, max_skip x 2 recurrent edges") {
    ColonyConfig c;
    c.input_width = 1;
    c.hidden_layers = 0;
    c.output_width = 1;
    c.max_skip = 4;
    const Colony colony = build(c);
    CHECK(colony.forward_edges().size() == 1);
    CHECK(colony.recurrent_edges().size() == 4 * 2); // input->output, output->output
}

TEST_CASE("structural counts match closed forms on randomized configs") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        ColonyConfig c;
        c.input_width = 1 + static_cast<int>(rng.index(8));
        c.hidden_layers = static_cast<int>(rng.index(5));
        c.hidden_width = 1 + static_cast<int>(rng.index(8));
        c.output_width = 1 + static_cast<int>(rng.index(3));
        c.max_skip = 1 + static_cast<int>(rng.index(4));
        c.layer_jumps = rng.index(2) == 0;

        const Colony colony = build(c, rng.next_u64());
        CHECK(colony.node_count() == Colony::expected_node_count(c));
        CHECK(colony.forward_edges().size() == Colony::expected_forward_edge_count(c));
        CHECK(colony.recurrent_edges().size() == Colony::expected_recurrent_edge_count(c));

        // exhaustive cross-check of the forward closed form
        std::size_t enumerated = 0;
        for (const ColonyNode& a : colony.nodes()) {
            for (const ColonyNode& b : colony.nodes()) {
                const bool consecutive = b.id.layer == a.id.layer + 1;
                const bool forward = b.id.layer > a.id.layer;
                if ((c.layer_jumps && forward) || (!c.layer_jumps && consecutive)) ++enumerated;
            }
        }
        CHECK(enumerated == colony.forward_edges().size());

        // recurrent edges are unique per (src, dst, skip)
        std::set<std::tuple<std::int32_t, std::int32_t, std::int32_t, std::int32_t, int>> keys;
        for (const RecurrentEdge& e : colony.recurrent_edges()) {
            CHECK(e.dst.layer != 0);
            keys.insert({e.src.layer, e.src.pos, e.dst.layer, e.dst.pos, e.time_skip});
        }
        CHECK(keys.size() == colony.recurrent_edges().size());
    }
}

TEST_CASE("construction initializes pheromones and weights per contract") {
    const ColonyConfig c = paper_config();
    const Colony colony = build(c);
    for (const ForwardEdge& e : colony.forward_edges()) {
        CHECK(e.pheromone == c.tau_init);
        CHECK(e.lamarck_weight >= -0.5);
        CHECK(e.lamarck_weight < 0.5);
    }
    for (const RecurrentEdge& e : colony.recurrent_edges()) {
        CHECK(e.pheromone == c.tau_init);
        CHECK(e.lamarck_weight >= -0.5);
        CHECK(e.lamarck_weight < 0.5);
    }
    for (const ColonyNode& n : colony.nodes()) {
        for (double p : n.cell_pheromones) CHECK(p == c.tau_init);
    }
}

TEST_CASE("invalid configurations are rejected") {
    Rng rng(1);
    ColonyConfig c;
    c.input_width = 0;
    CHECK_THROWS_AS(Colony::build(c, rng), ConfigError);

    c = ColonyConfig{};
    c.tau_min = 2.0; // above tau_init
    CHECK_THROWS_AS(Colony::build(c, rng), ConfigError);

    c = ColonyConfig{};
    c.max_skip = 0;
    CHECK_THROWS_AS(Colony::build(c, rng), ConfigError);
}

TEST_CASE("edges_out_of: output node has no forward successors") {
    const Colony colony = build(paper_config());
    const NodeId output{4, 0};
    CHECK(colony.edges_out_of(output, EdgeMode::ForwardOnly, JumpMode::LayerJump).empty());
}

TEST_CASE("edges_out_of: NoJump from a hidden node reaches exactly the next layer") {
    const Colony colony = build(paper_config());
    const auto out = colony.edges_out_of({1, 3}, EdgeMode::ForwardOnly, JumpMode::NoJump);
    CHECK(out.size() == 12);
    for (const CandidateEdge& e : out) {
        CHECK_FALSE(e.recurrent);
        CHECK(colony.forward_edges()[e.index].dst.layer == 2);
    }
}

TEST_CASE("edges_out_of: last hidden layer shows the forward/recurrent imbalance") {
    const Colony colony = build(paper_config());
    const auto out = colony.edges_out_of({3, 5}, EdgeMode::ForwardAndRecurrent,
                                         JumpMode::LayerJump);
    std::size_t forward = 0;
    std::size_t recurrent = 0;
    for (const CandidateEdge& e : out) (e.recurrent ? recurrent : forward)++;
    CHECK(forward == 1);           // only the output node lies ahead
    CHECK(recurrent == 37 * 3);    // every non-input node, every skip
    CHECK(recurrent > 10 * forward);
}

TEST_CASE("edges_out_of ordering is deterministic and sorted") {
    const Colony colony = build(paper_config());
    const auto out = colony.edges_out_of({1, 0}, EdgeMode::ForwardAndRecurrent,
                                         JumpMode::LayerJump);
    const auto out2 = colony.edges_out_of({1, 0}, EdgeMode::ForwardAndRecurrent,
                                          JumpMode::LayerJump);
    REQUIRE(out.size() == out2.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].recurrent == out2[i].recurrent);
        CHECK(out[i].index == out2[i].index);
    }
    auto key = [&](const CandidateEdge& e) {
        const NodeId dst = e.recurrent ? colony.recurrent_edges()[e.index].dst
                                       : colony.forward_edges()[e.index].dst;
        const int skip = e.recurrent ? colony.recurrent_edges()[e.index].time_skip : 0;
        return std::tuple(dst.layer, dst.pos, skip);
    };
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(key(out[i - 1]) < key(out[i]));
}

TEST_CASE("edges_out_of: NoJump candidates are a subset of LayerJump candidates") {
    const Colony colony = build(paper_config());
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const ColonyNode& node = colony.nodes()[rng.index(colony.node_count())];
        for (EdgeMode mode : {EdgeMode::ForwardOnly, EdgeMode::ForwardAndRecurrent}) {
            const auto narrow = colony.edges_out_of(node.id, mode, JumpMode::NoJump);
            const auto wide = colony.edges_out_of(node.id, mode, JumpMode::LayerJump);
            std::set<std::pair<bool, std::size_t>> wide_set;
            for (const CandidateEdge& e : wide) wide_set.insert({e.recurrent, e.index});
            for (const CandidateEdge& e : narrow)
                CHECK(wide_set.count({e.recurrent, e.index}) == 1);
        }
    }
}

TEST_CASE("clamp_pheromone bounds") {
    CHECK(clamp_pheromone(0.0, 0.05, 20.0) == 0.05);
    CHECK(clamp_pheromone(1.0, 0.05, 20.0) == 1.0);
    CHECK(clamp_pheromone(1e9, 0.05, 20.0) == 20.0);
}

TEST_CASE("pheromone setters clamp into the configured bounds") {
    Colony colony = build(paper_config());
    colony.set_forward_pheromone(0, 1e9);
    CHECK(colony.forward_edges()[0].pheromone == colony.config().tau_max);
    colony.set_recurrent_pheromone(0, -3.0);
    CHECK(colony.recurrent_edges()[0].pheromone == colony.config().tau_min);
    const std::size_t hidden = colony.node_index({1, 0});
    colony.set_cell_pheromone(hidden, CellKind::LSTM, 0.0);
    CHECK(colony.nodes()[hidden].cell_pheromones[static_cast<std::size_t>(CellKind::LSTM)] ==
          colony.config().tau_min);
}

TEST_CASE("edge lookup is exact and unique") {
    ColonyConfig c;
    c.input_width = 2;
    c.hidden_layers = 1;
    c.hidden_width = 3;
    c.output_width = 1;
    c.max_skip = 2;
    const Colony colony = build(c);

    for (std::size_t i = 0; i < colony.forward_edges().size(); ++i) {
        const ForwardEdge& e = colony.forward_edges()[i];
        CHECK(colony.find_forward(e.src, e.dst) == i);
    }
    for (std::size_t i = 0; i < colony.recurrent_edges().size(); ++i) {
        const RecurrentEdge& e = colony.recurrent_edges()[i];
        CHECK(colony.find_recurrent(e.src, e.dst, e.time_skip) == i);
    }
    CHECK_FALSE(colony.find_forward({1, 0}, {1, 1}).has_value()); // same layer
    CHECK_FALSE(colony.find_recurrent({0, 0}, {0, 1}, 1).has_value()); // input dst
    CHECK_FALSE(colony.find_recurrent({0, 0}, {1, 0}, 3).has_value()); // skip too large
}

TEST_CASE("cell kind names are stable and reversible") {
    for (std::size_t k = 0; k < kCellKindCount; ++k) {
        const auto kind = static_cast<CellKind>(k);
        const auto back = cell_kind_from_name(cell_kind_name(kind));
        REQUIRE(back.has_value());
        CHECK(*back == kind);
    }
    CHECK(std::string(cell_kind_name(CellKind::SimpleNeuron)) == "simple");
    CHECK(std::string(cell_kind_name(CellKind::Delta)) == "delta");
    CHECK_FALSE(cell_kind_from_name("bogus").has_value());
}
