#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "asne/error.hpp"
#include "asne/experiment.hpp"
#include "asne/serialize.hpp"

using namespace asne;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig c;
    c.seed = 42;
    c.repeats = 2;
    c.iterations = 6;
    c.hidden_layers = 1;
    c.hidden_width = 3;
    c.max_skip = 2;
    c.ants = 8;
    c.species = AntSpecies::Explorer;
    c.trainer.epochs = 2;
    c.population = 4;
    c.data.kind = DataSpec::Kind::Synth;
    c.data.synth_length = 96;
    c.data.synth_width = 3;
    c.data.synth_noise = 0.02;
    c.data.synth_seed = 3;
    return c;
}

struct DirGuard {
    fs::path path;
    ~DirGuard() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

} // namespace

TEST_CASE("experiment config JSON round-trips exactly") {
    ExperimentConfig c = tiny_config();
    c.species = AntSpecies::ExplorerForwardBackward;
    c.phi = *PhiMode::from_label("0.6");
    c.scheme.kind = DepositKind::L1;
    c.scheme.gamma = 0.65;
    c.data.kind = DataSpec::Kind::Csv;
    c.data.csv_path = "some.csv";
    c.data.target = "flame";

    const auto doc = c.to_json();
    const ExperimentConfig back = ExperimentConfig::from_json(doc);
    CHECK(back.to_json().dump() == doc.dump());
}

TEST_CASE("experiment config validation rejects bad fields") {
    ExperimentConfig c = tiny_config();
    c.repeats = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = tiny_config();
    c.data.kind = DataSpec::Kind::Csv; // no path
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = tiny_config();
    c.beta = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    CHECK_THROWS_AS(ExperimentConfig::from_json({{"species", "nope"}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"phi", "5"}}), ConfigError);
}

TEST_CASE("labels mirror the option grid") {
    ExperimentConfig c = tiny_config();
    c.ants = 40;
    c.species = AntSpecies::ExplorerForward;
    c.jump = JumpMode::LayerJump;
    c.phi = *PhiMode::from_label("fn");
    c.scheme.kind = DepositKind::L2;
    c.scheme.gamma = 0.9;
    CHECK(c.label() == "ants40_expfwd_aj_phi-fn_l2-0.9");

    c.scheme.kind = DepositKind::Fitness;
    c.jump = JumpMode::NoJump;
    c.phi = *PhiMode::from_label("off");
    CHECK(c.label() == "ants40_expfwd_oj_phi-off_fitness");
}

TEST_CASE("run_experiment emits all declared files and is deterministic") {
    const ExperimentConfig c = tiny_config();
    DirGuard a{"exp_test_run_a"};
    DirGuard b{"exp_test_run_b"};
    const ExperimentSummary sa = run_experiment(c, a.path.string());
    const ExperimentSummary sb = run_experiment(c, b.path.string());

    for (const char* f : {"config.json", "summary.json", "fitness.dat", "plot.gp"}) {
        CHECK(fs::exists(a.path / f));
    }
    for (int r = 0; r < c.repeats; ++r) {
        const fs::path rdir = a.path / ("repeat_0" + std::to_string(r));
        CHECK(fs::exists(rdir / "fitness_log.csv"));
        CHECK(fs::exists(rdir / "best_genome.json"));
    }
    CHECK(sa.ok_count == 2);
    CHECK(slurp(a.path / "summary.json") == slurp(b.path / "summary.json"));
    CHECK(sa.mean_fitness == sb.mean_fitness);
}

TEST_CASE("explorer-only experiments report zero recurrent edges") {
    ExperimentConfig c = tiny_config();
    c.species = AntSpecies::Explorer;
    DirGuard dir{"exp_test_explorer"};
    const ExperimentSummary summary = run_experiment(c, dir.path.string());
    REQUIRE(summary.ok_count == 2);
    CHECK(summary.mean_rec_edges == 0.0);
    for (const RepeatStats& r : summary.repeats) CHECK(r.rec_edges == 0);
    CHECK(summary.rec_edge_reduction == 1.0);
}

TEST_CASE("summary statistics agree with the raw per-repeat logs") {
    ExperimentConfig c = tiny_config();
    c.repeats = 3;
    DirGuard dir{"exp_test_recompute"};
    const ExperimentSummary summary = run_experiment(c, dir.path.string());
    REQUIRE(summary.ok_count == 3);

    std::vector<double> finals;
    for (int r = 0; r < c.repeats; ++r) {
        std::ifstream log(dir.path / ("repeat_0" + std::to_string(r)) / "fitness_log.csv");
        std::string line, last;
        std::getline(log, line); // header
        while (std::getline(log, line)) {
            if (!line.empty()) last = line;
        }
        // best_so_far is the third field
        std::istringstream row(last);
        std::string field;
        std::getline(row, field, ',');
        std::getline(row, field, ',');
        std::getline(row, field, ',');
        finals.push_back(std::stod(field));
    }
    std::vector<double> sorted = finals;
    std::sort(sorted.begin(), sorted.end());
    const double mean = (finals[0] + finals[1] + finals[2]) / 3.0;
    CHECK(summary.best_fitness == doctest::Approx(sorted[0]).epsilon(1e-15));
    CHECK(summary.median_fitness == doctest::Approx(sorted[1]).epsilon(1e-15));
    CHECK(summary.mean_fitness == doctest::Approx(mean).epsilon(1e-12));

    // reduction bookkeeping matches the colony closed forms
    const ColonyConfig colony_cfg = c.colony_config(2);
    const double possible =
        static_cast<double>(Colony::expected_forward_edge_count(colony_cfg));
    CHECK(summary.edge_reduction ==
          doctest::Approx(1.0 - summary.mean_edges / possible).epsilon(1e-12));
}

TEST_CASE("fitness structure coefficient") {
    CHECK(fitness_structure_coefficient(1.0, 57) == 0.0);
    CHECK(fitness_structure_coefficient(0.1, 90) == doctest::Approx(0.01).epsilon(1e-12));
    const double base = fitness_structure_coefficient(0.3, 80);
    CHECK(fitness_structure_coefficient(0.3, 40) == doctest::Approx(2 * base).epsilon(1e-12));
    CHECK_THROWS_AS(fitness_structure_coefficient(0.5, 0), ConfigError);
    CHECK_THROWS_AS(fitness_structure_coefficient(-0.1, 5), ConfigError);
}

namespace {

RankRecord make_record(const std::string& name, const char* species, const char* jump,
                       const char* phi, const char* reward, int ants, double mean,
                       double median, double best) {
    RankRecord r;
    r.name = name;
    r.species = species;
    r.jump = jump;
    r.phi = phi;
    r.reward = reward;
    r.ants = ants;
    r.mean = mean;
    r.median = median;
    r.best = best;
    return r;
}

std::map<std::string, std::vector<std::string>> parse_rank_csv(const std::string& csv) {
    std::map<std::string, std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string name, cell;
        std::getline(row, name, ',');
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        rows[name] = cells;
    }
    return rows;
}

} // namespace

TEST_CASE("a single experiment ranks first everywhere") {
    const auto rows = parse_rank_csv(rank_heuristics_csv(
        {make_record("only", "expfwd", "aj", "fn", "l2", 40, 0.2, 0.2, 0.1)}));
    // 15 columns: 5 K values x 3 metrics
    CHECK(rows.at("ExpFwdAnts") ==
          std::vector<std::string>(15, "1"));
    CHECK(rows.at("LayerJump") == std::vector<std::string>(15, "1"));
    CHECK(rows.at("PhiFn") == std::vector<std::string>(15, "1(0)"));
    CHECK(rows.at("L2") == std::vector<std::string>(15, "1(0)"));
    CHECK(rows.at("StdAnts") == std::vector<std::string>(15, "0"));
}

TEST_CASE("two experiments produce a hand-orderable table") {
    const auto rows = parse_rank_csv(rank_heuristics_csv({
        make_record("better", "exp", "aj", "off", "fitness", 20, 0.10, 0.10, 0.05),
        make_record("worse", "std", "oj", "fn", "l1", 40, 0.90, 0.90, 0.80),
    }));
    // top-10 includes both; counts reflect membership
    CHECK(rows.at("ExpAnts")[0] == "1");
    CHECK(rows.at("StdAnts")[0] == "1");
    // neither experiment is "solo": better uses exp/aj movement, worse uses l1
    CHECK(rows.at("NoPhi")[0] == "1(0)");
    CHECK(rows.at("PhiFn")[0] == "1(0)");
}

TEST_CASE("ranking counts match a brute-force oracle and ignore input order") {
    Rng rng(17);
    std::vector<RankRecord> records;
    const char* species[] = {"std", "stdbias", "exp", "expfwd", "expbwd", "expfwdbwd"};
    const char* jumps[] = {"aj", "oj"};
    const char* phis[] = {"fn", "0.3", "off"};
    const char* rewards[] = {"const", "fitness", "l1", "l2"};
    const int ants[] = {20, 40, 80, 160};
    for (int i = 0; i < 60; ++i) {
        records.push_back(make_record(
            "exp" + std::to_string(i), species[rng.index(6)], jumps[rng.index(2)],
            phis[rng.index(3)], rewards[rng.index(4)], ants[rng.index(4)],
            rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0)));
    }
    const std::string csv = rank_heuristics_csv(records);

    // independent oracle for one cell: L2 appearances in the top 25 by median
    std::vector<RankRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const RankRecord& a, const RankRecord& b) {
        if (a.median != b.median) return a.median < b.median;
        return a.name < b.name;
    });
    std::size_t expected = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(25, sorted.size()); ++i)
        if (sorted[i].reward == "l2") ++expected;
    const auto rows = parse_rank_csv(csv);
    // cell columns after the name: index 4 is top25_median
    const std::string cell = rows.at("L2")[4];
    CHECK(cell.substr(0, cell.find('(')) == std::to_string(expected));

    // permutation invariance
    std::vector<RankRecord> shuffled = records;
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
    CHECK(rank_heuristics_csv(shuffled) == csv);
}

TEST_CASE("grid expansion covers the full option product") {
    ExperimentConfig base = tiny_config();
    DirGuard dir{"exp_test_grid"};
    const int n = grid_expand(base, dir.path.string());
    CHECK(n == 4 * 6 * 2 * 5 * 8);

    std::size_t files = 0;
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir.path)) {
        ++files;
        names.insert(entry.path().filename().string());
    }
    CHECK(files == static_cast<std::size_t>(n)); // labels are unique filenames

    const std::string sample = "ants20_stdbias_oj_phi-0.3_l1-0.25.json";
    REQUIRE(names.count(sample) == 1);
    const ExperimentConfig parsed =
        ExperimentConfig::from_json(read_json_file((dir.path / sample).string()));
    CHECK(parsed.ants == 20);
    CHECK(parsed.species == AntSpecies::StandardBias);
    CHECK(parsed.jump == JumpMode::NoJump);
    CHECK(parsed.phi.kind == PhiModeKind::Constant);
    CHECK(parsed.scheme.kind == DepositKind::L1);
    CHECK(parsed.scheme.gamma == 0.25);
    CHECK(parsed.label() + ".json" == sample);
}

TEST_CASE("baselines are finite and ordered sensibly") {
    ExperimentConfig c = tiny_config();
    const double constant = baseline_constant_mae(c);
    CHECK(constant > 0.0);
    CHECK(constant < 1.0);
    const double median = baseline_random_median(c, 9, 99);
    CHECK(median > 0.0);
}

TEST_CASE("inspect dispatches on the document format") {
    ExperimentConfig c = tiny_config();
    c.repeats = 1;
    c.checkpoint_every = 3;
    DirGuard dir{"exp_test_inspect"};
    run_experiment(c, dir.path.string());

    const std::string genome_text =
        inspect_file((dir.path / "repeat_00" / "best_genome.json").string());
    CHECK(genome_text.find("genome:") != std::string::npos);
    CHECK(genome_text.find("structure:") != std::string::npos);

    const std::string ckpt_text =
        inspect_file((dir.path / "repeat_00" / "checkpoint.json").string());
    CHECK(ckpt_text.find("checkpoint:") != std::string::npos);
    CHECK(ckpt_text.find("colony:") != std::string::npos);

    const std::string summary_text = inspect_file((dir.path / "summary.json").string());
    CHECK(summary_text.find("experiment:") != std::string::npos);

    CHECK_THROWS_AS(inspect_file((dir.path / "plot.gp").string()), DataError);
    CHECK_THROWS_AS(inspect_file("missing.json"), IoError);
}

TEST_CASE("checkpoint files from runs round-trip through the colony codec") {
    ExperimentConfig c = tiny_config();
    c.repeats = 1;
    c.checkpoint_every = 2;
    c.phi = *PhiMode::from_label("fn");
    c.scheme.kind = DepositKind::L2;
    c.scheme.gamma = 0.9;
    DirGuard dir{"exp_test_ckpt"};
    run_experiment(c, dir.path.string());

    const auto doc = read_json_file((dir.path / "repeat_00" / "checkpoint.json").string());
    const Colony colony = colony_from_json(doc.at("colony"));
    CHECK(colony_to_json(colony).dump() == doc.at("colony").dump());
}
