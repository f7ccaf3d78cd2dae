#include "asne/network.hpp"

#include <cmath>
#include <limits>

#include "asne/cells.hpp"
#include "asne/error.hpp"

namespace asne {

void TrainerConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("trainer: learning rate must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("trainer: momentum in [0,1)");
    if (!(clip_threshold > 0.0)) throw ConfigError("trainer: clip threshold must be > 0");
    if (boost_threshold < 0.0) throw ConfigError("trainer: boost threshold must be >= 0");
    if (!(boost_threshold < clip_threshold))
        throw ConfigError("trainer: boost threshold must be below clip threshold");
    if (epochs < 1) throw ConfigError("trainer: epochs must be >= 1");
}

UnrolledPlan plan(const RnnGenome& genome) {
    genome.validate();
    if (genome.output_node_count() != 1)
        throw InternalError("plan: exactly one output node required");

    UnrolledPlan p;
    const std::size_t n = genome.nodes.size();
    p.incoming_forward.resize(n);
    p.incoming_recurrent.resize(n);
    p.input_column.assign(n, -1);
    p.param_offset.assign(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        const GenomeNode& node = genome.nodes[i];
        p.param_offset[i] = p.node_param_total;
        p.node_param_total += node.params.size();
        if (genome.is_input(node.id)) p.input_column[i] = node.id.pos;
        if (genome.is_output(node.id)) p.output_rank = i;
    }

    for (std::size_t e = 0; e < genome.forward_edges.size(); ++e) {
        const auto& edge = genome.forward_edges[e];
        const std::size_t src = *genome.node_rank(edge.src);
        const std::size_t dst = *genome.node_rank(edge.dst);
        if (src >= dst) throw InternalError("plan: canonical order is not topological");
        p.incoming_forward[dst].push_back(UnrolledPlan::FwdIn{e, src});
    }
    for (std::size_t e = 0; e < genome.recurrent_edges.size(); ++e) {
        const auto& edge = genome.recurrent_edges[e];
        p.incoming_recurrent[*genome.node_rank(edge.dst)].push_back(
            UnrolledPlan::RecIn{e, *genome.node_rank(edge.src), edge.time_skip});
    }
    return p;
}

namespace {

struct RunState {
    std::size_t n = 0;
    std::size_t T = 0;
    std::vector<double> h;      // n x T
    std::vector<CellStep> step; // n x T (hidden/output nodes only meaningful)

    double& at(std::size_t node, std::size_t t) { return h[node * T + t]; }
    double get(std::size_t node, std::size_t t) const { return h[node * T + t]; }
};

// Evaluates the whole sequence; returns false when a non-finite value shows up.
bool evaluate(const UnrolledPlan& plan, const RnnGenome& genome, const Matrix& inputs,
              RunState& state) {
    const std::size_t n = genome.nodes.size();
    const std::size_t T = inputs.rows;
    state.n = n;
    state.T = T;
    state.h.assign(n * T, 0.0);
    state.step.assign(n * T, CellStep{});

    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            const GenomeNode& node = genome.nodes[i];
            if (plan.input_column[i] >= 0) {
                const auto col = static_cast<std::size_t>(plan.input_column[i]);
                state.at(i, t) = col < inputs.cols ? inputs.at(t, col) : 0.0;
                continue;
            }
            double input_sum = 0.0;
            for (const auto& in : plan.incoming_forward[i]) {
                input_sum += genome.forward_edges[in.edge].weight * state.get(in.src, t);
            }
            for (const auto& in : plan.incoming_recurrent[i]) {
                if (t >= static_cast<std::size_t>(in.skip)) {
                    input_sum += genome.recurrent_edges[in.edge].weight *
                                 state.get(in.src, t - static_cast<std::size_t>(in.skip));
                }
            }
            const double h_prev = t > 0 ? state.get(i, t - 1) : 0.0;
            const double c_prev = t > 0 ? state.step[i * T + t - 1].c : 0.0;
            const CellStep s = cell_forward(node.kind, node.params, input_sum, h_prev, c_prev);
            if (!std::isfinite(s.h)) return false;
            state.step[i * T + t] = s;
            state.at(i, t) = s.h;
        }
    }
    return true;
}

} // namespace

std::vector<double> forward_pass(const UnrolledPlan& plan, const RnnGenome& genome,
                                 const Matrix& inputs) {
    RunState state;
    if (!evaluate(plan, genome, inputs, state))
        throw InternalError("forward_pass: non-finite activation");
    std::vector<double> predictions(inputs.rows);
    for (std::size_t t = 0; t < inputs.rows; ++t)
        predictions[t] = state.get(plan.output_rank, t);
    return predictions;
}

std::vector<double> bptt_gradients(const UnrolledPlan& plan, const RnnGenome& genome,
                                   const Matrix& inputs, std::span<const double> targets) {
    if (targets.size() != inputs.rows)
        throw DataError("bptt: target length does not match input length");

    RunState state;
    if (!evaluate(plan, genome, inputs, state))
        throw InternalError("bptt: non-finite activation");

    const std::size_t n = genome.nodes.size();
    const std::size_t T = inputs.rows;
    const std::size_t fwd_base = plan.node_param_total;
    const std::size_t rec_base = fwd_base + genome.forward_edges.size();

    std::vector<double> gradient(genome.weight_count(), 0.0);
    std::vector<double> dh(n * T, 0.0);
    std::vector<double> dc(n * T, 0.0);

    const double inv_t = 1.0 / static_cast<double>(T);
    for (std::size_t t = 0; t < T; ++t) {
        const double residual = state.get(plan.output_rank, t) - targets[t];
        if (residual > 0.0) {
            dh[plan.output_rank * T + t] = inv_t;
        } else if (residual < 0.0) {
            dh[plan.output_rank * T + t] = -inv_t;
        }
    }

    for (std::size_t ti = T; ti-- > 0;) {
        for (std::size_t i = n; i-- > 0;) {
            const GenomeNode& node = genome.nodes[i];
            if (plan.input_column[i] >= 0) continue;
            const double up_h = dh[i * T + ti];
            const double up_c = dc[i * T + ti];
            if (up_h == 0.0 && up_c == 0.0) continue;

            std::span<double> dp{gradient.data() + plan.param_offset[i], node.params.size()};
            const CellGrads g =
                cell_backward(node.kind, node.params, state.step[i * T + ti], up_h, up_c, dp);

            if (ti > 0) {
                dh[i * T + ti - 1] += g.d_h_prev;
                dc[i * T + ti - 1] += g.d_c_prev;
            }
            for (const auto& in : plan.incoming_forward[i]) {
                gradient[fwd_base + in.edge] += g.d_input * state.get(in.src, ti);
                dh[in.src * T + ti] += g.d_input * genome.forward_edges[in.edge].weight;
            }
            for (const auto& in : plan.incoming_recurrent[i]) {
                const auto skip = static_cast<std::size_t>(in.skip);
                if (ti < skip) continue;
                gradient[rec_base + in.edge] += g.d_input * state.get(in.src, ti - skip);
                dh[in.src * T + ti - skip] +=
                    g.d_input * genome.recurrent_edges[in.edge].weight;
            }
        }
    }
    return gradient;
}

void rescale_or_boost(std::span<double> gradient, double clip_threshold,
                      double boost_threshold) {
    double sq = 0.0;
    for (double g : gradient) sq += g * g;
    const double norm = std::sqrt(sq);
    if (norm == 0.0) return;
    double scale = 1.0;
    if (norm > clip_threshold) {
        scale = clip_threshold / norm;
    } else if (norm < boost_threshold) {
        scale = boost_threshold / norm;
    }
    if (scale != 1.0) {
        for (double& g : gradient) g *= scale;
    }
}

TrainResult train(RnnGenome genome, const Matrix& train_inputs,
                  std::span<const double> train_targets, const Matrix& valid_inputs,
                  std::span<const double> valid_targets, const TrainerConfig& config) {
    config.validate();
    if (train_targets.empty() || valid_targets.empty())
        throw DataError("train: empty series");

    const UnrolledPlan p = plan(genome);

    TrainResult result;
    std::vector<double> theta = genome.pack_weights();
    std::vector<double> best_theta = theta;
    std::vector<double> velocity(theta.size(), 0.0);
    double best_mae = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<double> g;
        try {
            g = bptt_gradients(p, genome, train_inputs, train_targets);
        } catch (const InternalError&) {
            result.diverged = true;
            break;
        }
        bool finite = true;
        for (double v : g) finite = finite && std::isfinite(v);
        if (!finite) {
            result.diverged = true;
            break;
        }

        rescale_or_boost(g, config.clip_threshold, config.boost_threshold);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            velocity[i] = config.momentum * velocity[i] + g[i];
            theta[i] -= config.learning_rate * (g[i] + config.momentum * velocity[i]);
        }
        genome.unpack_weights(theta);

        double epoch_mae = 0.0;
        try {
            const auto predictions = forward_pass(p, genome, valid_inputs);
            epoch_mae = mae(predictions, valid_targets);
        } catch (const InternalError&) {
            result.diverged = true;
            break;
        }
        if (!std::isfinite(epoch_mae)) {
            result.diverged = true;
            break;
        }
        result.epoch_validation_mae.push_back(epoch_mae);
        if (epoch_mae < best_mae) {
            best_mae = epoch_mae;
            best_theta = theta;
        }
    }

    if (result.diverged || result.epoch_validation_mae.empty()) {
        result.diverged = true;
        result.best_validation_mae = std::numeric_limits<double>::infinity();
        genome.fitness = std::numeric_limits<double>::infinity();
        result.genome = std::move(genome);
        return result;
    }

    genome.unpack_weights(best_theta);
    genome.fitness = best_mae;
    result.best_validation_mae = best_mae;
    result.genome = std::move(genome);
    return result;
}

} // namespace asne
