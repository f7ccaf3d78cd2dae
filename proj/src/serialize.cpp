#include "asne/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "asne/error.hpp"

namespace asne {

using nlohmann::json;

namespace {

json config_to_json(const ColonyConfig& c) {
    return json{{"input_width", c.input_width},   {"hidden_layers", c.hidden_layers},
                {"hidden_width", c.hidden_width}, {"output_width", c.output_width},
                {"max_skip", c.max_skip},         {"layer_jumps", c.layer_jumps},
                {"tau_init", c.tau_init},         {"tau_min", c.tau_min},
                {"tau_max", c.tau_max}};
}

ColonyConfig config_from_json(const json& doc) {
    ColonyConfig c;
    c.input_width = doc.at("input_width").get<int>();
    c.hidden_layers = doc.at("hidden_layers").get<int>();
    c.hidden_width = doc.at("hidden_width").get<int>();
    c.output_width = doc.at("output_width").get<int>();
    c.max_skip = doc.at("max_skip").get<int>();
    c.layer_jumps = doc.at("layer_jumps").get<bool>();
    c.tau_init = doc.at("tau_init").get<double>();
    c.tau_min = doc.at("tau_min").get<double>();
    c.tau_max = doc.at("tau_max").get<double>();
    return c;
}

void expect_format(const json& doc, const char* format, int version) {
    if (!doc.is_object() || doc.value("format", "") != format)
        throw DataError(std::string("expected a '") + format + "' document");
    if (doc.value("version", 0) != version)
        throw DataError(std::string("unsupported ") + format + " version");
}

} // namespace

json colony_to_json(const Colony& colony) {
    json doc;
    doc["format"] = "asne-colony";
    doc["version"] = 1;
    doc["config"] = config_to_json(colony.config());

    json cells = json::array();
    for (const ColonyNode& node : colony.nodes()) {
        if (!colony.is_hidden(node.id)) continue;
        json levels = json::array();
        for (double p : node.cell_pheromones) levels.push_back(p);
        cells.push_back(json::array({node.id.layer, node.id.pos, levels}));
    }
    doc["cell_pheromones"] = std::move(cells);

    json fwd = json::array();
    for (const ForwardEdge& e : colony.forward_edges()) {
        fwd.push_back(json::array(
            {e.src.layer, e.src.pos, e.dst.layer, e.dst.pos, e.pheromone, e.lamarck_weight}));
    }
    doc["forward_edges"] = std::move(fwd);

    json rec = json::array();
    for (const RecurrentEdge& e : colony.recurrent_edges()) {
        rec.push_back(json::array({e.src.layer, e.src.pos, e.dst.layer, e.dst.pos, e.time_skip,
                                   e.pheromone, e.lamarck_weight}));
    }
    doc["recurrent_edges"] = std::move(rec);
    return doc;
}

Colony colony_from_json(const json& doc) {
    expect_format(doc, "asne-colony", 1);
    const ColonyConfig config = config_from_json(doc.at("config"));

    // Rebuild the structure, then overwrite every mutable field; entries are
    // stored in canonical order, which the id checks below verify.
    Rng scratch(0);
    Colony colony = Colony::build(config, scratch);

    const auto& cells = doc.at("cell_pheromones");
    std::size_t ci = 0;
    for (std::size_t n = 0; n < colony.node_count(); ++n) {
        if (!colony.is_hidden(colony.nodes()[n].id)) continue;
        if (ci >= cells.size()) throw DataError("colony: missing cell pheromone rows");
        const auto& row = cells.at(ci++);
        const NodeId id{row.at(0).get<std::int32_t>(), row.at(1).get<std::int32_t>()};
        if (id != colony.nodes()[n].id) throw DataError("colony: cell pheromone order mismatch");
        const auto& levels = row.at(2);
        if (levels.size() != kCellKindCount) throw DataError("colony: bad cell pheromone row");
        for (std::size_t k = 0; k < kCellKindCount; ++k)
            colony.set_cell_pheromone(n, static_cast<CellKind>(k), levels.at(k).get<double>());
    }
    if (ci != cells.size()) throw DataError("colony: extra cell pheromone rows");

    const auto& fwd = doc.at("forward_edges");
    if (fwd.size() != colony.forward_edges().size())
        throw DataError("colony: forward edge count mismatch");
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        const auto& row = fwd.at(i);
        const NodeId src{row.at(0).get<std::int32_t>(), row.at(1).get<std::int32_t>()};
        const NodeId dst{row.at(2).get<std::int32_t>(), row.at(3).get<std::int32_t>()};
        const ForwardEdge& e = colony.forward_edges()[i];
        if (src != e.src || dst != e.dst) throw DataError("colony: forward edge order mismatch");
        colony.set_forward_pheromone(i, row.at(4).get<double>());
        colony.set_forward_weight(i, row.at(5).get<double>());
    }

    const auto& rec = doc.at("recurrent_edges");
    if (rec.size() != colony.recurrent_edges().size())
        throw DataError("colony: recurrent edge count mismatch");
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const auto& row = rec.at(i);
        const NodeId src{row.at(0).get<std::int32_t>(), row.at(1).get<std::int32_t>()};
        const NodeId dst{row.at(2).get<std::int32_t>(), row.at(3).get<std::int32_t>()};
        const RecurrentEdge& e = colony.recurrent_edges()[i];
        if (src != e.src || dst != e.dst || row.at(4).get<int>() != e.time_skip)
            throw DataError("colony: recurrent edge order mismatch");
        colony.set_recurrent_pheromone(i, row.at(5).get<double>());
        colony.set_recurrent_weight(i, row.at(6).get<double>());
    }
    return colony;
}

json genome_to_json(const RnnGenome& genome) {
    json doc;
    doc["format"] = "asne-genome";
    doc["version"] = 1;
    doc["generation"] = genome.generation;
    doc["seed"] = genome.seed;
    doc["output_layer"] = genome.output_layer;
    if (genome.has_fitness() && std::isfinite(genome.fitness)) {
        doc["fitness"] = genome.fitness;
    } else {
        doc["fitness"] = nullptr;
    }

    json nodes = json::array();
    for (const GenomeNode& n : genome.nodes) {
        nodes.push_back(json{{"layer", n.id.layer},
                             {"pos", n.id.pos},
                             {"kind", cell_kind_name(n.kind)},
                             {"params", n.params}});
    }
    doc["nodes"] = std::move(nodes);

    json fwd = json::array();
    for (const GenomeForwardEdge& e : genome.forward_edges)
        fwd.push_back(json::array({e.src.layer, e.src.pos, e.dst.layer, e.dst.pos, e.weight}));
    doc["forward_edges"] = std::move(fwd);

    json rec = json::array();
    for (const GenomeRecurrentEdge& e : genome.recurrent_edges)
        rec.push_back(json::array(
            {e.src.layer, e.src.pos, e.dst.layer, e.dst.pos, e.time_skip, e.weight}));
    doc["recurrent_edges"] = std::move(rec);
    return doc;
}

RnnGenome genome_from_json(const json& doc) {
    expect_format(doc, "asne-genome", 1);
    RnnGenome genome;
    genome.generation = doc.at("generation").get<std::int64_t>();
    genome.seed = doc.at("seed").get<std::uint64_t>();
    genome.output_layer = doc.at("output_layer").get<std::int32_t>();
    genome.fitness = doc.at("fitness").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                 : doc.at("fitness").get<double>();

    for (const auto& row : doc.at("nodes")) {
        GenomeNode n;
        n.id = NodeId{row.at("layer").get<std::int32_t>(), row.at("pos").get<std::int32_t>()};
        const auto kind = cell_kind_from_name(row.at("kind").get<std::string>());
        if (!kind) throw DataError("genome: unknown cell kind");
        n.kind = *kind;
        n.params = row.at("params").get<std::vector<double>>();
        genome.nodes.push_back(std::move(n));
    }
    for (const auto& row : doc.at("forward_edges")) {
        genome.forward_edges.push_back(GenomeForwardEdge{
            NodeId{row.at(0).get<std::int32_t>(), row.at(1).get<std::int32_t>()},
            NodeId{row.at(2).get<std::int32_t>(), row.at(3).get<std::int32_t>()},
            row.at(4).get<double>()});
    }
    for (const auto& row : doc.at("recurrent_edges")) {
        genome.recurrent_edges.push_back(GenomeRecurrentEdge{
            NodeId{row.at(0).get<std::int32_t>(), row.at(1).get<std::int32_t>()},
            NodeId{row.at(2).get<std::int32_t>(), row.at(3).get<std::int32_t>()},
            row.at(4).get<int>(), row.at(5).get<double>()});
    }
    genome.validate();
    return genome;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("short write: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot rename into place: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("invalid JSON in " + path + ": " + e.what());
    }
    return doc;
}

} // namespace asne
