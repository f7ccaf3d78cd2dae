#ifndef ASNE_DATAIO_HPP
#define ASNE_DATAIO_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace asne {

// Dense row-major matrix of doubles; the minimal container the trainer needs.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    static Matrix zeros(std::size_t rows, std::size_t cols) {
        return Matrix{rows, cols, std::vector<double>(rows * cols, 0.0)};
    }
};

// A multivariate series with one designated target column.
struct TimeSeries {
    std::vector<std::string> columns;
    Matrix data; // rows = timesteps
    std::size_t target_col = 0;

    std::size_t length() const { return data.rows; }
    std::size_t width() const { return data.cols; }
};

// Per-column affine transform parameters from min-max normalization.
struct NormalizationParams {
    std::vector<double> mins;
    std::vector<double> maxs;
    std::vector<std::string> constant_columns; // warned about, mapped to 0
};

TimeSeries load_csv(const std::string& path, const std::string& target_column);
void write_csv(const TimeSeries& series, const std::string& path);

// Maps each non-constant column onto [0, 1] in place; constant columns map
// to 0 and are reported back for warning.
NormalizationParams min_max_normalize(TimeSeries& series);
void denormalize_column(std::span<double> values, const NormalizationParams& params,
                        std::size_t col);

double mae(std::span<const double> predictions, std::span<const double> targets);

enum class SynthKind { SineMix, MackeyGlassLike };
std::optional<SynthKind> synth_kind_from_name(const std::string& name);
const char* synth_kind_name(SynthKind kind);

// Seeded desk-scale generator: K-1 driver channels plus a target that is a
// fixed lagged nonlinear function of the drivers. Generator equations are
// pinned in docs/synthetic.md. sigma = 0 yields an exactly periodic
// sine_mix (global period 96).
TimeSeries synth_series(SynthKind kind, std::size_t T, std::size_t K, double noise_sigma,
                        std::uint64_t seed);

// Contiguous-in-time split: inputs exclude the target column; node position
// p of the input layer reads the p-th non-target column.
struct DataSplit {
    Matrix train_inputs;
    std::vector<double> train_targets;
    Matrix valid_inputs;
    std::vector<double> valid_targets;
};

DataSplit split_series(const TimeSeries& series, double train_fraction);

} // namespace asne

#endif
