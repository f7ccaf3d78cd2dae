#include "asne/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "asne/error.hpp"
#include "asne/rng.hpp"

namespace asne {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

TimeSeries load_csv(const std::string& path, const std::string& target_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV file: " + path);

    TimeSeries series;
    for (const std::string& name : split_line(line)) series.columns.push_back(trim(name));
    if (series.columns.empty()) throw DataError("CSV header has no columns: " + path);

    bool target_found = false;
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        if (series.columns[c] == target_column) {
            series.target_col = c;
            target_found = true;
            break;
        }
    }
    if (!target_found) {
        std::string available;
        for (const std::string& c : series.columns) {
            if (!available.empty()) available += ", ";
            available += c;
        }
        throw DataError("target column '" + target_column + "' not found; available: " +
                        available);
    }

    series.data.cols = series.columns.size();
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != series.columns.size()) {
            throw DataError("row " + std::to_string(row_number) + ": expected " +
                            std::to_string(series.columns.size()) + " cells, got " +
                            std::to_string(fields.size()));
        }
        for (const std::string& raw : fields) {
            const std::string cell = trim(raw);
            double value = 0.0;
            const auto* begin = cell.data();
            const auto* end = cell.data() + cell.size();
            const auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc{} || res.ptr != end) {
                throw DataError("row " + std::to_string(row_number) + ": non-numeric cell '" +
                                cell + "'");
            }
            series.data.values.push_back(value);
        }
        series.data.rows++;
    }
    if (series.data.rows < 2) throw DataError("CSV needs at least 2 data rows: " + path);
    return series;
}

void write_csv(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write CSV file: " + path);
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        if (c) out << ',';
        out << series.columns[c];
    }
    out << '\n';
    char buf[40];
    for (std::size_t r = 0; r < series.data.rows; ++r) {
        for (std::size_t c = 0; c < series.data.cols; ++c) {
            if (c) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", series.data.at(r, c));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("short write to CSV file: " + path);
}

NormalizationParams min_max_normalize(TimeSeries& series) {
    NormalizationParams params;
    params.mins.assign(series.width(), 0.0);
    params.maxs.assign(series.width(), 0.0);
    for (std::size_t c = 0; c < series.width(); ++c) {
        double lo = series.data.at(0, c);
        double hi = lo;
        for (std::size_t r = 1; r < series.length(); ++r) {
            lo = std::min(lo, series.data.at(r, c));
            hi = std::max(hi, series.data.at(r, c));
        }
        params.mins[c] = lo;
        params.maxs[c] = hi;
        if (hi > lo) {
            for (std::size_t r = 0; r < series.length(); ++r) {
                series.data.at(r, c) = (series.data.at(r, c) - lo) / (hi - lo);
            }
        } else {
            for (std::size_t r = 0; r < series.length(); ++r) series.data.at(r, c) = 0.0;
            params.constant_columns.push_back(series.columns[c]);
        }
    }
    return params;
}

void denormalize_column(std::span<double> values, const NormalizationParams& params,
                        std::size_t col) {
    const double lo = params.mins[col];
    const double hi = params.maxs[col];
    if (hi <= lo) return;
    for (double& v : values) v = lo + v * (hi - lo);
}

double mae(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size() || predictions.empty())
        throw DataError("mae: series length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        total += std::abs(predictions[i] - targets[i]);
    return total / static_cast<double>(predictions.size());
}

std::optional<SynthKind> synth_kind_from_name(const std::string& name) {
    if (name == "sine_mix") return SynthKind::SineMix;
    if (name == "mackey_glass_like") return SynthKind::MackeyGlassLike;
    return std::nullopt;
}

const char* synth_kind_name(SynthKind kind) {
    return kind == SynthKind::SineMix ? "sine_mix" : "mackey_glass_like";
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Driver periods all divide 96, so the noise-free sine mix repeats exactly
// every 96 steps.
constexpr int kSinePeriods[8] = {16, 24, 32, 48, 12, 8, 96, 6};

double sine_driver(std::size_t channel, double t) {
    const int period = kSinePeriods[channel % 8];
    const double phase = kTwoPi * static_cast<double>(channel % 8) / 8.0;
    return 0.5 + 0.4 * std::sin(kTwoPi * t / period + phase);
}

TimeSeries synth_sine_mix(std::size_t T, std::size_t K, double sigma, std::uint64_t seed) {
    TimeSeries series;
    for (std::size_t j = 0; j + 1 < K; ++j) series.columns.push_back("x" + std::to_string(j));
    series.columns.push_back("y");
    series.target_col = K - 1;
    series.data = Matrix::zeros(T, K);

    const std::size_t drivers = K - 1;
    auto driver = [&](std::size_t m, double t) { return sine_driver(m % drivers, t); };

    Rng rng(seed);
    for (std::size_t t = 0; t < T; ++t) {
        const double td = static_cast<double>(t);
        for (std::size_t j = 0; j < drivers; ++j) {
            series.data.at(t, j) = sine_driver(j, td) + (sigma > 0 ? sigma * rng.normal() : 0.0);
        }
        // Lagged nonlinear mix; sinusoids are defined for negative time, so
        // every row uses the same rule and periodicity is exact.
        const double c1a = driver(0, td - 1) - 0.5;
        const double c2a = driver(1, td - 2) - 0.5;
        const double c3a = driver(2, td - 1) - 0.5;
        const double c1b = driver(0, td - 2) - 0.5;
        const double c2b = driver(1, td - 1) - 0.5;
        const double y =
            0.5 + 0.35 * std::tanh(1.6 * c1a + 1.6 * c2a + 1.2 * c3a + 2.5 * c1b * c2b);
        series.data.at(t, K - 1) = y + (sigma > 0 ? sigma * rng.normal() : 0.0);
    }
    return series;
}

TimeSeries synth_mackey(std::size_t T, std::size_t K, double sigma, std::uint64_t seed) {
    // Discretized Mackey-Glass core: x[t+1] = x[t] + b*x[t-tau]/(1+x[t-tau]^10) - g*x[t].
    constexpr int kTau = 17;
    constexpr double kB = 0.2;
    constexpr double kG = 0.1;

    const std::size_t drivers = K - 1;
    const std::size_t max_delay = 2 + 3 * (drivers - 1);
    const std::size_t warmup = 128;
    const std::size_t total = T + max_delay + warmup + kTau + 1;

    Rng rng(seed);
    std::vector<double> core(total, 0.0);
    for (std::size_t t = 0; t <= kTau; ++t) core[t] = 1.2 + 0.1 * (rng.uniform() - 0.5);
    for (std::size_t t = kTau; t + 1 < total; ++t) {
        const double delayed = core[t - kTau];
        core[t + 1] = core[t] + kB * delayed / (1.0 + std::pow(delayed, 10)) - kG * core[t];
    }

    TimeSeries series;
    for (std::size_t j = 0; j < drivers; ++j) series.columns.push_back("x" + std::to_string(j));
    series.columns.push_back("y");
    series.target_col = K - 1;
    series.data = Matrix::zeros(T, K);

    const std::size_t base = max_delay + warmup + kTau;
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < drivers; ++j) {
            const std::size_t delay = 2 + 3 * j;
            series.data.at(t, j) =
                core[base + t - delay] / 1.6 + (sigma > 0 ? sigma * rng.normal() : 0.0);
        }
        series.data.at(t, K - 1) =
            core[base + t] / 1.6 + (sigma > 0 ? sigma * rng.normal() : 0.0);
    }
    return series;
}

} // namespace

TimeSeries synth_series(SynthKind kind, std::size_t T, std::size_t K, double noise_sigma,
                        std::uint64_t seed) {
    if (T < 16) throw ConfigError("synth: T must be >= 16");
    if (K < 2) throw ConfigError("synth: K must be >= 2");
    if (noise_sigma < 0) throw ConfigError("synth: noise must be >= 0");
    return kind == SynthKind::SineMix ? synth_sine_mix(T, K, noise_sigma, seed)
                                      : synth_mackey(T, K, noise_sigma, seed);
}

DataSplit split_series(const TimeSeries& series, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("split: train fraction must be in (0,1)");
    const std::size_t train_rows =
        static_cast<std::size_t>(static_cast<double>(series.length()) * train_fraction);
    if (train_rows < 1 || train_rows >= series.length())
        throw DataError("split: series too short for requested fraction");

    const std::size_t in_cols = series.width() - 1;
    DataSplit split;
    split.train_inputs = Matrix::zeros(train_rows, in_cols);
    split.valid_inputs = Matrix::zeros(series.length() - train_rows, in_cols);
    split.train_targets.resize(train_rows);
    split.valid_targets.resize(series.length() - train_rows);

    for (std::size_t r = 0; r < series.length(); ++r) {
        const bool train = r < train_rows;
        Matrix& inputs = train ? split.train_inputs : split.valid_inputs;
        std::vector<double>& targets = train ? split.train_targets : split.valid_targets;
        const std::size_t rr = train ? r : r - train_rows;
        std::size_t ic = 0;
        for (std::size_t c = 0; c < series.width(); ++c) {
            if (c == series.target_col) {
                targets[rr] = series.data.at(r, c);
            } else {
                inputs.at(rr, ic++) = series.data.at(r, c);
            }
        }
    }
    return split;
}

} // namespace asne
