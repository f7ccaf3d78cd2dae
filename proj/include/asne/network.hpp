#ifndef ASNE_NETWORK_HPP
#define ASNE_NETWORK_HPP

#include <span>
#include <vector>

#include "asne/dataio.hpp"
#include "asne/genome.hpp"

namespace asne {

// Execution plan for one genome; canonical node order is already
// topological over the strictly layer-increasing forward edges.
struct UnrolledPlan {
    struct RecIn {
        std::size_t edge = 0; // genome recurrent edge index
        std::size_t src = 0;  // node rank
        int skip = 1;
    };
    struct FwdIn {
        std::size_t edge = 0;
        std::size_t src = 0;
    };

    std::vector<std::vector<FwdIn>> incoming_forward;   // per node rank
    std::vector<std::vector<RecIn>> incoming_recurrent; // per node rank
    std::vector<int> input_column;                      // pos for input nodes, -1 otherwise
    std::size_t output_rank = 0;
    std::vector<std::size_t> param_offset; // per node, into the packed weight vector
    std::size_t node_param_total = 0;
};

UnrolledPlan plan(const RnnGenome& genome);

// Runs the genome over a full sequence; recurrent references to t < 0 read
// zero state. Requires exactly one output node.
std::vector<double> forward_pass(const UnrolledPlan& plan, const RnnGenome& genome,
                                 const Matrix& inputs);

// Exact gradients of mean absolute error over the sequence with respect to
// the packed weight vector (node params, forward weights, recurrent
// weights, in that order). The MAE subgradient at zero residual is 0.
std::vector<double> bptt_gradients(const UnrolledPlan& plan, const RnnGenome& genome,
                                   const Matrix& inputs, std::span<const double> targets);

// Norm clipping above `clip` and norm boosting below `boost`; direction is
// always preserved and the zero vector passes through unchanged.
void rescale_or_boost(std::span<double> gradient, double clip_threshold,
                      double boost_threshold);

struct TrainerConfig {
    double learning_rate = 0.001;
    double momentum = 0.9; // Nesterov
    double clip_threshold = 1.0;
    double boost_threshold = 0.05;
    int epochs = 10;

    void validate() const;
};

struct TrainResult {
    RnnGenome genome; // parameters from the best-validation epoch
    double best_validation_mae = 0.0;
    std::vector<double> epoch_validation_mae;
    bool diverged = false;
};

// Full-sequence SGD with Nesterov momentum, one gradient step per epoch;
// the returned parameters are those of the epoch with the lowest
// validation MAE.
TrainResult train(RnnGenome genome, const Matrix& train_inputs,
                  std::span<const double> train_targets, const Matrix& valid_inputs,
                  std::span<const double> valid_targets, const TrainerConfig& config);

} // namespace asne

#endif
