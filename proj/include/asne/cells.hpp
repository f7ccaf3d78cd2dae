#ifndef ASNE_CELLS_HPP
#define ASNE_CELLS_HPP

#include <array>
#include <cstddef>
#include <span>

#include "asne/colony.hpp"
#include "asne/rng.hpp"

namespace asne {

// One evaluated timestep of a node. `h` is the node output, `c` the LSTM
// internal memory (zero for every other kind). `cache` holds the gate
// activations and inputs needed for the exact backward pass; slot meaning is
// private to cells.cpp. The scalar equations for each kind are written out
// in docs/cells.md and pinned by the origin-value table in the test suite.
struct CellStep {
    double h = 0.0;
    double c = 0.0;
    std::array<double, 8> cache{};
};

// Gradients flowing out of one cell_backward call.
struct CellGrads {
    double d_input = 0.0;  // w.r.t. the aggregated input sum
    double d_h_prev = 0.0; // w.r.t. the node's previous output
    double d_c_prev = 0.0; // w.r.t. the previous LSTM memory
};

// Per-node trainable parameter count (gate input/recurrent weights and
// biases). Incoming-edge weights live in the genome, not here.
std::size_t cell_param_count(CellKind kind);

// U(-0.5, 0.5) initialization; the LSTM forget-gate bias gets +1.0 added.
void cell_init_params(CellKind kind, std::span<double> params, Rng& rng);

// Evaluates one timestep. `input_sum` aggregates all incoming edge
// contributions (forward and recurrent, already weighted); `h_prev`/`c_prev`
// are the node's own state from the previous timestep (zero at t = 0).
CellStep cell_forward(CellKind kind, std::span<const double> params, double input_sum,
                      double h_prev, double c_prev);

// Exact reverse-mode gradients for one timestep. `dh`/`dc` are the upstream
// gradients w.r.t. this step's outputs; parameter gradients accumulate into
// `d_params` (which must have cell_param_count entries).
CellGrads cell_backward(CellKind kind, std::span<const double> params, const CellStep& step,
                        double dh, double dc, std::span<double> d_params);

} // namespace asne

#endif
