#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <string>

#include "asne.h"

namespace fs = std::filesystem;

namespace {

struct DirGuard {
    fs::path path;
    ~DirGuard() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct Config {
    asne_config* ptr = nullptr;
    ~Config() { asne_config_free(ptr); }
};

void set_tiny_run(asne_config* c) {
    const char* kv[][2] = {
        {"repeats", "1"},      {"iterations", "4"},          {"ants", "8"},
        {"species", "exp"},    {"colony.hidden_layers", "1"}, {"colony.hidden_width", "3"},
        {"trainer.epochs", "2"}, {"population", "4"},         {"data.kind", "synth"},
        {"data.length", "96"}, {"data.width", "3"},
    };
    for (const auto& [k, v] : kv) REQUIRE(asne_config_set(c, k, v) == ASNE_OK);
}

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(asne_version()) == "1.0.0");
    CHECK(std::string(asne_status_name(ASNE_OK)) == "ok");
    CHECK(std::string(asne_status_name(ASNE_CONFIG_ERROR)) == "config-error");
    CHECK(std::string(asne_status_name(ASNE_PARTIAL_FAILURE)) == "partial-failure");
}

TEST_CASE("config create, set, serialize round-trip") {
    Config c;
    REQUIRE(asne_config_create(&c.ptr) == ASNE_OK);
    CHECK(asne_config_set(c.ptr, "ants", "80") == ASNE_OK);
    CHECK(asne_config_set(c.ptr, "species", "expfwdbwd") == ASNE_OK);
    CHECK(asne_config_set(c.ptr, "phi", "0.9") == ASNE_OK);
    CHECK(asne_config_set(c.ptr, "reward", "l1") == ASNE_OK);
    CHECK(asne_config_set(c.ptr, "gamma", "0.65") == ASNE_OK);

    char* json = nullptr;
    REQUIRE(asne_config_to_json(c.ptr, &json) == ASNE_OK);
    const std::string text = json;
    asne_string_free(json);
    CHECK(text.find("\"ants\": 80") != std::string::npos);
    CHECK(text.find("\"species\": \"expfwdbwd\"") != std::string::npos);
    CHECK(text.find("\"gamma\": 0.65") != std::string::npos);

    Config back;
    REQUIRE(asne_config_from_json(text.c_str(), &back.ptr) == ASNE_OK);
    char* json2 = nullptr;
    REQUIRE(asne_config_to_json(back.ptr, &json2) == ASNE_OK);
    CHECK(text == json2);
    asne_string_free(json2);
}

TEST_CASE("config errors carry messages") {
    Config c;
    REQUIRE(asne_config_create(&c.ptr) == ASNE_OK);
    CHECK(asne_config_set(c.ptr, "bogus_key", "1") == ASNE_CONFIG_ERROR);
    CHECK(std::string(asne_last_error()).find("bogus_key") != std::string::npos);
    CHECK(asne_config_set(c.ptr, "species", "martian") == ASNE_CONFIG_ERROR);
    CHECK(asne_config_set(c.ptr, "ants", "not-a-number") == ASNE_CONFIG_ERROR);

    CHECK(asne_config_set(c.ptr, "repeats", "0") == ASNE_OK); // stored, rejected on validate
    CHECK(asne_config_validate(c.ptr) == ASNE_CONFIG_ERROR);

    Config bad;
    CHECK(asne_config_from_json("{not json", &bad.ptr) == ASNE_CONFIG_ERROR);
    CHECK(asne_config_create(nullptr) == ASNE_CONFIG_ERROR);
}

TEST_CASE("synth csv generation through the C surface") {
    DirGuard dir{"capi_test_synth"};
    fs::create_directories(dir.path);
    const std::string path = (dir.path / "series.csv").string();
    CHECK(asne_synth_csv("sine_mix", 64, 3, 0.01, 7, path.c_str()) == ASNE_OK);
    CHECK(fs::exists(path));
    CHECK(asne_synth_csv("martian", 64, 3, 0.01, 7, path.c_str()) == ASNE_CONFIG_ERROR);
    CHECK(asne_synth_csv("sine_mix", 4, 3, 0.01, 7, path.c_str()) == ASNE_CONFIG_ERROR);
}

TEST_CASE("end-to-end run, inspect and rank through the C surface") {
    Config c;
    REQUIRE(asne_config_create(&c.ptr) == ASNE_OK);
    set_tiny_run(c.ptr);
    REQUIRE(asne_config_validate(c.ptr) == ASNE_OK);

    DirGuard dir{"capi_test_run"};
    char* summary = nullptr;
    REQUIRE(asne_run_experiment(c.ptr, dir.path.string().c_str(), &summary) == ASNE_OK);
    REQUIRE(summary != nullptr);
    const std::string summary_text = summary;
    asne_string_free(summary);
    CHECK(summary_text.find("\"ok_count\": 1") != std::string::npos);

    char* text = nullptr;
    const std::string genome_path = (dir.path / "repeat_00" / "best_genome.json").string();
    REQUIRE(asne_inspect(genome_path.c_str(), &text) == ASNE_OK);
    CHECK(std::string(text).find("genome:") != std::string::npos);
    asne_string_free(text);

    const std::string summary_path = (dir.path / "summary.json").string();
    const char* paths[] = {summary_path.c_str()};
    char* csv = nullptr;
    REQUIRE(asne_rank(paths, 1, nullptr, &csv) == ASNE_OK);
    CHECK(std::string(csv).find("heuristic,top10_mean") != std::string::npos);
    asne_string_free(csv);

    CHECK(asne_inspect("no_such_file.json", &text) == ASNE_IO_ERROR);
}

TEST_CASE("grid expansion through the C surface") {
    Config c;
    REQUIRE(asne_config_create(&c.ptr) == ASNE_OK);
    DirGuard dir{"capi_test_grid"};
    int n = 0;
    REQUIRE(asne_grid_expand(c.ptr, dir.path.string().c_str(), &n) == ASNE_OK);
    CHECK(n == 1920);
}

TEST_CASE("baselines through the C surface") {
    Config c;
    REQUIRE(asne_config_create(&c.ptr) == ASNE_OK);
    set_tiny_run(c.ptr);
    double constant = 0.0;
    REQUIRE(asne_baseline_constant(c.ptr, &constant) == ASNE_OK);
    CHECK(constant > 0.0);
    double median = 0.0;
    REQUIRE(asne_baseline_random(c.ptr, 5, 11, &median) == ASNE_OK);
    CHECK(median > 0.0);
}

TEST_CASE("fitness structure coefficient through the C surface") {
    double out = 0.0;
    REQUIRE(asne_fitness_structure_coefficient(0.1, 90, &out) == ASNE_OK);
    CHECK(out == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(asne_fitness_structure_coefficient(0.1, 0, &out) == ASNE_CONFIG_ERROR);
    CHECK(asne_fitness_structure_coefficient(0.1, 90, nullptr) == ASNE_CONFIG_ERROR);
}

TEST_CASE("csv data errors surface as data status") {
    Config c;
    REQUIRE(asne_config_create(&c.ptr) == ASNE_OK);
    REQUIRE(asne_config_set(c.ptr, "data.kind", "csv") == ASNE_OK);
    REQUIRE(asne_config_set(c.ptr, "data.path", "missing.csv") == ASNE_OK);
    REQUIRE(asne_config_set(c.ptr, "repeats", "1") == ASNE_OK);
    REQUIRE(asne_config_set(c.ptr, "iterations", "2") == ASNE_OK);
    DirGuard dir{"capi_test_data_error"};
    CHECK(asne_run_experiment(c.ptr, dir.path.string().c_str(), nullptr) == ASNE_DATA_ERROR);
}
