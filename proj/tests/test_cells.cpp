#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "asne/cells.hpp"
#include "asne/rng.hpp"

using namespace asne;

namespace {

const CellKind kAllKinds[] = {CellKind::SimpleNeuron, CellKind::Delta, CellKind::GRU,
                              CellKind::LSTM,         CellKind::MGU,   CellKind::UGRNN};

std::vector<double> probe_params(CellKind kind) {
    std::vector<double> p(cell_param_count(kind));
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = 0.1 * static_cast<double>(i + 1) * (i % 2 == 1 ? -1.0 : 1.0);
    return p;
}

} // namespace

TEST_CASE("parameter counts are fixed per kind") {
    CHECK(cell_param_count(CellKind::SimpleNeuron) == 1);
    CHECK(cell_param_count(CellKind::Delta) == 7);
    CHECK(cell_param_count(CellKind::GRU) == 9);
    CHECK(cell_param_count(CellKind::LSTM) == 12);
    CHECK(cell_param_count(CellKind::MGU) == 6);
    CHECK(cell_param_count(CellKind::UGRNN) == 6);
}

TEST_CASE("every kind outputs zero at the origin") {
    for (CellKind kind : kAllKinds) {
        const std::vector<double> zero(cell_param_count(kind), 0.0);
        const CellStep s = cell_forward(kind, zero, 0.0, 0.0, 0.0);
        CHECK(s.h == 0.0);
        CHECK(s.c == 0.0);
    }
}

// Frozen probe table, computed by an independent transcription of each
// cell's published equations (zero parameters, x = 1, h_prev = 0.5,
// c_prev = 0.25; and the fixed alternating parameter vector with x = 0.7,
// h_prev = -0.3, c_prev = 0.2).
TEST_CASE("probe table pins the scalar formulations") {
    struct Probe {
        CellKind kind;
        double zero_params_h;
        double alt_params_h;
        double alt_params_c;
    };
    const Probe probes[] = {
        {CellKind::SimpleNeuron, 0.7615941559557649, 0.6640367702678489, 0.0},
        {CellKind::Delta, 0.24491866240370913, -0.33195285543416186, 0.0},
        {CellKind::GRU, 0.25, 0.4248139718295566, 0.0},
        {CellKind::LSTM, 0.0621765008857981, -0.41184569662320786, -0.5394063294001347},
        {CellKind::MGU, 0.25, -0.5720925340381633, 0.0},
        {CellKind::UGRNN, 0.25, -0.4867797554869775, 0.0},
    };
    for (const Probe& p : probes) {
        const std::vector<double> zero(cell_param_count(p.kind), 0.0);
        const CellStep a = cell_forward(p.kind, zero, 1.0, 0.5, 0.25);
        CHECK(a.h == doctest::Approx(p.zero_params_h).epsilon(1e-12));

        const std::vector<double> alt = probe_params(p.kind);
        const CellStep b = cell_forward(p.kind, alt, 0.7, -0.3, 0.2);
        CHECK(b.h == doctest::Approx(p.alt_params_h).epsilon(1e-12));
        CHECK(b.c == doctest::Approx(p.alt_params_c).epsilon(1e-12));
    }
}

TEST_CASE("LSTM forget gate with +1.0 bias opens to sigma(1)") {
    std::vector<double> p(12, 0.0);
    p[5] = 1.0; // forget-gate bias slot
    const CellStep s = cell_forward(CellKind::LSTM, p, 0.0, 0.0, 1.0);
    // c = sigma(1) * c_prev; everything else is zero at the origin
    CHECK(s.c == doctest::Approx(0.7310585786300049).epsilon(1e-12));
    CHECK(s.h == doctest::Approx(0.5 * std::tanh(0.7310585786300049)).epsilon(1e-12));
}

TEST_CASE("initialization is U(-0.5,0.5) with the LSTM forget bias shifted") {
    Rng rng(5);
    for (CellKind kind : kAllKinds) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> p(cell_param_count(kind));
            cell_init_params(kind, p, rng);
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (kind == CellKind::LSTM && i == 5) {
                    CHECK(p[i] >= 0.5);
                    CHECK(p[i] < 1.5);
                } else {
                    CHECK(p[i] >= -0.5);
                    CHECK(p[i] < 0.5);
                }
            }
        }
    }
}

TEST_CASE("cell_forward is a pure function") {
    Rng rng(7);
    for (CellKind kind : kAllKinds) {
        std::vector<double> p(cell_param_count(kind));
        cell_init_params(kind, p, rng);
        const double x = rng.uniform(-2, 2);
        const double hp = rng.uniform(-1, 1);
        const double cp = rng.uniform(-1, 1);
        const CellStep a = cell_forward(kind, p, x, hp, cp);
        const CellStep b = cell_forward(kind, p, x, hp, cp);
        CHECK(a.h == b.h);
        CHECK(a.c == b.c);
        CHECK(a.cache == b.cache);
    }
}

TEST_CASE("outputs stay bounded under bounded history") {
    Rng rng(11);
    for (CellKind kind : kAllKinds) {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> p(cell_param_count(kind));
            for (double& v : p) v = rng.uniform(-2, 2);
            double h = 0.0;
            double c = 0.0;
            for (int t = 0; t < 20; ++t) {
                const CellStep s = cell_forward(kind, p, rng.uniform(-3, 3), h, c);
                h = s.h;
                c = s.c;
                CHECK(std::abs(h) <= 1.0);
            }
        }
    }
}

TEST_CASE("zero upstream gradient produces zero gradients") {
    Rng rng(13);
    for (CellKind kind : kAllKinds) {
        std::vector<double> p(cell_param_count(kind));
        cell_init_params(kind, p, rng);
        const CellStep s = cell_forward(kind, p, 0.8, -0.2, 0.1);
        std::vector<double> dp(p.size(), 0.0);
        const CellGrads g = cell_backward(kind, p, s, 0.0, 0.0, dp);
        CHECK(g.d_input == 0.0);
        CHECK(g.d_h_prev == 0.0);
        CHECK(g.d_c_prev == 0.0);
        for (double v : dp) CHECK(v == 0.0);
    }
}

TEST_CASE("SimpleNeuron gradient at the origin is exactly 1") {
    const std::vector<double> p{0.0};
    const CellStep s = cell_forward(CellKind::SimpleNeuron, p, 0.0, 0.0, 0.0);
    std::vector<double> dp(1, 0.0);
    const CellGrads g = cell_backward(CellKind::SimpleNeuron, p, s, 1.0, 0.0, dp);
    CHECK(g.d_input == 1.0); // 1 - tanh(0)^2
}

namespace {

// Central finite differences on h(params, x, h_prev, c_prev); LSTM also
// checks dc/d* through a combined objective h + 0.5 * c.
void gradcheck(CellKind kind, Rng& rng) {
    std::vector<double> p(cell_param_count(kind));
    for (double& v : p) v = rng.uniform(-1.5, 1.5);
    const double x = rng.uniform(-2, 2);
    const double hp = rng.uniform(-1, 1);
    const double cp = rng.uniform(-1, 1);
    const double dh = 1.0;
    const double dc = kind == CellKind::LSTM ? 0.5 : 0.0;
    const double eps = 1e-6;

    auto objective = [&](const std::vector<double>& params, double xx, double hh, double cc) {
        const CellStep s = cell_forward(kind, params, xx, hh, cc);
        return dh * s.h + dc * s.c;
    };

    std::vector<double> dp(p.size(), 0.0);
    const CellStep s = cell_forward(kind, p, x, hp, cp);
    const CellGrads g = cell_backward(kind, p, s, dh, dc, dp);

    auto close = [](double analytic, double numeric) {
        const double tol = 1e-4 * std::max({1.0, std::abs(analytic), std::abs(numeric)});
        return std::abs(analytic - numeric) <= tol;
    };

    for (std::size_t i = 0; i < p.size(); ++i) {
        std::vector<double> lo = p, hi = p;
        lo[i] -= eps;
        hi[i] += eps;
        const double fd = (objective(hi, x, hp, cp) - objective(lo, x, hp, cp)) / (2 * eps);
        CHECK_MESSAGE(close(dp[i], fd), "param ", i, " of ", cell_kind_name(kind), ": ",
                      dp[i], " vs ", fd);
    }
    const double fdx = (objective(p, x + eps, hp, cp) - objective(p, x - eps, hp, cp)) / (2 * eps);
    CHECK_MESSAGE(close(g.d_input, fdx), "d_input of ", cell_kind_name(kind));
    const double fdh = (objective(p, x, hp + eps, cp) - objective(p, x, hp - eps, cp)) / (2 * eps);
    CHECK_MESSAGE(close(g.d_h_prev, fdh), "d_h_prev of ", cell_kind_name(kind));
    const double fdc = (objective(p, x, hp, cp + eps) - objective(p, x, hp, cp - eps)) / (2 * eps);
    CHECK_MESSAGE(close(g.d_c_prev, fdc), "d_c_prev of ", cell_kind_name(kind));
}

} // namespace

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(101);
    for (CellKind kind : kAllKinds) {
        for (int trial = 0; trial < 50; ++trial) gradcheck(kind, rng);
    }
}
