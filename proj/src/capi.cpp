#include "asne.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "asne/error.hpp"
#include "asne/experiment.hpp"
#include "asne/serialize.hpp"

using namespace asne;

struct asne_config {
    ExperimentConfig cpp;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
asne_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        g_last_error = e.what();
        return ASNE_CONFIG_ERROR;
    } catch (const DataError& e) {
        g_last_error = e.what();
        return ASNE_DATA_ERROR;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return ASNE_IO_ERROR;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ASNE_ERROR;
    } catch (...) {
        g_last_error = "unknown error";
        return ASNE_ERROR;
    }
}

bool bad_args(bool ok, const char* message) {
    if (!ok) g_last_error = message;
    return !ok;
}

} // namespace

extern "C" {

const char* asne_version(void) { return "1.0.0"; }

const char* asne_status_name(asne_status status) {
    switch (status) {
        case ASNE_OK: return "ok";
        case ASNE_ERROR: return "error";
        case ASNE_CONFIG_ERROR: return "config-error";
        case ASNE_DATA_ERROR: return "data-error";
        case ASNE_PARTIAL_FAILURE: return "partial-failure";
        case ASNE_IO_ERROR: return "io-error";
    }
    return "?";
}

const char* asne_last_error(void) { return g_last_error.c_str(); }

void asne_string_free(char* s) { std::free(s); }

asne_status asne_config_create(asne_config** out) {
    if (bad_args(out != nullptr, "null out pointer")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        *out = new asne_config{};
        return ASNE_OK;
    });
}

asne_status asne_config_from_json(const char* json_text, asne_config** out) {
    if (bad_args(json_text && out, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("invalid config JSON: ") + e.what());
        }
        auto config = std::make_unique<asne_config>();
        config->cpp = ExperimentConfig::from_json(doc);
        *out = config.release();
        return ASNE_OK;
    });
}

asne_status asne_config_from_file(const char* path, asne_config** out) {
    if (bad_args(path && out, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        auto config = std::make_unique<asne_config>();
        config->cpp = ExperimentConfig::from_json(read_json_file(path));
        *out = config.release();
        return ASNE_OK;
    });
}

asne_status asne_config_set(asne_config* config, const char* key, const char* value) {
    if (bad_args(config && key && value, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        // Route through the JSON form so the string parsing and validation
        // rules stay in one place.
        nlohmann::json doc = config->cpp.to_json();
        const std::string k = key;
        const std::string v = value;

        auto parse_number = [&](const char* what) {
            try {
                return nlohmann::json::parse(v);
            } catch (const nlohmann::json::exception&) {
                throw ConfigError(std::string("option ") + what + ": not a number: " + v);
            }
        };

        if (k == "species" || k == "jump" || k == "phi" || k == "reward" ||
            k == "lamarck_gate") {
            doc[k] = v;
        } else if (k == "seed" || k == "repeats" || k == "iterations" || k == "workers" ||
                   k == "ants" || k == "population" || k == "checkpoint_every" ||
                   k == "evaporate_every" || k == "gamma" || k == "alpha" ||
                   k == "constant_c" || k == "beta") {
            doc[k] = parse_number(key);
        } else if (k.rfind("colony.", 0) == 0) {
            doc["colony"][k.substr(7)] = parse_number(key);
        } else if (k.rfind("trainer.", 0) == 0) {
            doc["trainer"][k.substr(8)] = parse_number(key);
        } else if (k == "data.kind" || k == "data.path" || k == "data.target" ||
                   k == "data.synth") {
            doc["data"][k.substr(5)] = v;
        } else if (k.rfind("data.", 0) == 0) {
            doc["data"][k.substr(5)] = parse_number(key);
        } else {
            throw ConfigError("unknown config key: " + k);
        }
        config->cpp = ExperimentConfig::from_json(doc);
        return ASNE_OK;
    });
}

asne_status asne_config_to_json(const asne_config* config, char** json_out) {
    if (bad_args(config && json_out, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        *json_out = dup_string(config->cpp.to_json().dump(2));
        return *json_out ? ASNE_OK : ASNE_ERROR;
    });
}

asne_status asne_config_validate(const asne_config* config) {
    if (bad_args(config != nullptr, "null config")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        config->cpp.validate();
        return ASNE_OK;
    });
}

void asne_config_free(asne_config* config) { delete config; }

asne_status asne_run_experiment(const asne_config* config, const char* out_dir,
                                char** summary_json_out) {
    if (bad_args(config && out_dir, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        const ExperimentSummary summary = run_experiment(config->cpp, out_dir);
        if (summary_json_out)
            *summary_json_out = dup_string(summary.to_json(config->cpp).dump(2));
        if (summary.ok_count < summary.repeats.size()) {
            g_last_error = "some repeats failed; see summary.json";
            return ASNE_PARTIAL_FAILURE;
        }
        return ASNE_OK;
    });
}

asne_status asne_grid_expand(const asne_config* base, const char* out_dir, int* n_out) {
    if (bad_args(base && out_dir, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        const int n = grid_expand(base->cpp, out_dir);
        if (n_out) *n_out = n;
        return ASNE_OK;
    });
}

asne_status asne_synth_csv(const char* kind, long length, long width, double noise,
                           uint64_t seed, const char* path) {
    if (bad_args(kind && path, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        const auto synth = synth_kind_from_name(kind);
        if (!synth) throw ConfigError(std::string("unknown synth kind: ") + kind);
        if (length < 16 || width < 2) throw ConfigError("synth: length >= 16, width >= 2");
        const TimeSeries series =
            synth_series(*synth, static_cast<std::size_t>(length),
                         static_cast<std::size_t>(width), noise, seed);
        write_csv(series, path);
        return ASNE_OK;
    });
}

asne_status asne_rank(const char* const* summary_paths, size_t count, const char* out_dir,
                      char** csv_out) {
    if (bad_args(summary_paths && count > 0, "no summary files given"))
        return ASNE_CONFIG_ERROR;
    return guarded([&] {
        std::vector<RankRecord> records;
        for (size_t i = 0; i < count; ++i)
            records.push_back(rank_record_from_summary(read_json_file(summary_paths[i])));
        const std::string csv = rank_heuristics_csv(std::move(records));
        if (out_dir) {
            std::filesystem::create_directories(out_dir);
            write_file_atomic((std::filesystem::path(out_dir) / "ranking.csv").string(), csv);
        }
        if (csv_out) *csv_out = dup_string(csv);
        return ASNE_OK;
    });
}

asne_status asne_inspect(const char* path, char** text_out) {
    if (bad_args(path && text_out, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        *text_out = dup_string(inspect_file(path));
        return *text_out ? ASNE_OK : ASNE_ERROR;
    });
}

asne_status asne_baseline_constant(const asne_config* config, double* mae_out) {
    if (bad_args(config && mae_out, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        *mae_out = baseline_constant_mae(config->cpp);
        return ASNE_OK;
    });
}

asne_status asne_baseline_random(const asne_config* config, int n_genomes, uint64_t seed,
                                 double* median_mae_out) {
    if (bad_args(config && median_mae_out, "null argument")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        *median_mae_out = baseline_random_median(config->cpp, n_genomes, seed);
        return ASNE_OK;
    });
}

asne_status asne_fitness_structure_coefficient(double mae, size_t weight_count,
                                               double* coefficient_out) {
    if (bad_args(coefficient_out != nullptr, "null out pointer")) return ASNE_CONFIG_ERROR;
    return guarded([&] {
        *coefficient_out = fitness_structure_coefficient(mae, weight_count);
        return ASNE_OK;
    });
}

} // extern "C"
