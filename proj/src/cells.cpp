#include "asne/cells.hpp"

#include <cmath>

#include "asne/error.hpp"

namespace asne {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Parameter layouts (see docs/cells.md):
//   SimpleNeuron: [b]
//   Delta:        [a, b1, b2, v, w, bz, br]
//   GRU:          [wz, uz, bz, wr, ur, br, wh, uh, bh]
//   LSTM:         [wi, ui, bi, wf, uf, bf, wo, uo, bo, wg, ug, bg]
//   MGU:          [wf, uf, bf, wh, uh, bh]
//   UGRNN:        [wg, ug, bg, wc, uc, bc]
constexpr std::size_t kParamCounts[kCellKindCount] = {1, 7, 9, 12, 6, 6};

constexpr std::size_t kLstmForgetBias = 5;

} // namespace

std::size_t cell_param_count(CellKind kind) {
    return kParamCounts[static_cast<std::size_t>(kind)];
}

void cell_init_params(CellKind kind, std::span<double> params, Rng& rng) {
    if (params.size() != cell_param_count(kind))
        throw InternalError("cells: parameter span size mismatch");
    for (double& p : params) p = rng.uniform(-0.5, 0.5);
    if (kind == CellKind::LSTM) params[kLstmForgetBias] += 1.0;
}

CellStep cell_forward(CellKind kind, std::span<const double> p, double x, double hp, double cp) {
    CellStep s;
    switch (kind) {
        case CellKind::SimpleNeuron: {
            s.h = std::tanh(x + p[0]);
            break;
        }
        case CellKind::Delta: {
            // d1 = a*(v*hp)*(w*x); d2 = b1*(v*hp) + b2*(w*x)
            // zc = tanh(d1 + d2 + bz); r = sigma(w*x + br)
            // h = tanh((1 - r)*zc + r*hp)
            const double xt = p[4] * x;
            const double ht = p[3] * hp;
            const double zc = std::tanh(p[0] * ht * xt + p[1] * ht + p[2] * xt + p[5]);
            const double r = sigmoid(xt + p[6]);
            s.h = std::tanh((1.0 - r) * zc + r * hp);
            s.cache = {xt, ht, zc, r, x, hp, 0, 0};
            break;
        }
        case CellKind::GRU: {
            const double z = sigmoid(p[0] * x + p[1] * hp + p[2]);
            const double r = sigmoid(p[3] * x + p[4] * hp + p[5]);
            const double rs = r * hp;
            const double hc = std::tanh(p[6] * x + p[7] * rs + p[8]);
            s.h = (1.0 - z) * hp + z * hc;
            s.cache = {z, r, hc, rs, x, hp, 0, 0};
            break;
        }
        case CellKind::LSTM: {
            const double i = sigmoid(p[0] * x + p[1] * hp + p[2]);
            const double f = sigmoid(p[3] * x + p[4] * hp + p[5]);
            const double o = sigmoid(p[6] * x + p[7] * hp + p[8]);
            const double g = std::tanh(p[9] * x + p[10] * hp + p[11]);
            s.c = f * cp + i * g;
            const double th = std::tanh(s.c);
            s.h = o * th;
            s.cache = {i, f, o, g, th, x, hp, cp};
            break;
        }
        case CellKind::MGU: {
            const double f = sigmoid(p[0] * x + p[1] * hp + p[2]);
            const double fs = f * hp;
            const double hc = std::tanh(p[3] * x + p[4] * fs + p[5]);
            s.h = (1.0 - f) * hp + f * hc;
            s.cache = {f, hc, fs, x, hp, 0, 0, 0};
            break;
        }
        case CellKind::UGRNN: {
            const double g = sigmoid(p[0] * x + p[1] * hp + p[2]);
            const double c = std::tanh(p[3] * x + p[4] * hp + p[5]);
            s.h = g * hp + (1.0 - g) * c;
            s.cache = {g, c, x, hp, 0, 0, 0, 0};
            break;
        }
    }
    return s;
}

CellGrads cell_backward(CellKind kind, std::span<const double> p, const CellStep& s, double dh,
                        double dc, std::span<double> dp) {
    CellGrads out;
    switch (kind) {
        case CellKind::SimpleNeuron: {
            const double du = dh * (1.0 - s.h * s.h);
            out.d_input = du;
            dp[0] += du;
            break;
        }
        case CellKind::Delta: {
            const double xt = s.cache[0], ht = s.cache[1], zc = s.cache[2], r = s.cache[3];
            const double x = s.cache[4], hp = s.cache[5];
            const double dpre = dh * (1.0 - s.h * s.h);
            const double dr = dpre * (hp - zc);
            const double dzc = dpre * (1.0 - r);
            double dhp = dpre * r;
            const double dzin = dzc * (1.0 - zc * zc);
            dp[5] += dzin; // bz
            double dht = dzin * (p[0] * xt + p[1]);
            double dxt = dzin * (p[0] * ht + p[2]);
            dp[0] += dzin * ht * xt; // a
            dp[1] += dzin * ht;      // b1
            dp[2] += dzin * xt;      // b2
            const double dzr = dr * r * (1.0 - r);
            dxt += dzr;
            dp[6] += dzr; // br
            dp[3] += dht * hp; // v
            dhp += dht * p[3];
            dp[4] += dxt * x; // w
            out.d_input = dxt * p[4];
            out.d_h_prev = dhp;
            break;
        }
        case CellKind::GRU: {
            const double z = s.cache[0], r = s.cache[1], hc = s.cache[2], rs = s.cache[3];
            const double x = s.cache[4], hp = s.cache[5];
            const double dz = dh * (hc - hp);
            const double dhc = dh * z;
            double dhp = dh * (1.0 - z);
            const double dq = dhc * (1.0 - hc * hc);
            dp[6] += dq * x;  // wh
            dp[7] += dq * rs; // uh
            dp[8] += dq;      // bh
            const double drs = dq * p[7];
            const double dr = drs * hp;
            dhp += drs * r;
            const double dzz = dz * z * (1.0 - z);
            const double dzr = dr * r * (1.0 - r);
            dp[0] += dzz * x;
            dp[1] += dzz * hp;
            dp[2] += dzz;
            dp[3] += dzr * x;
            dp[4] += dzr * hp;
            dp[5] += dzr;
            out.d_input = dq * p[6] + dzz * p[0] + dzr * p[3];
            out.d_h_prev = dhp + dzz * p[1] + dzr * p[4];
            break;
        }
        case CellKind::LSTM: {
            const double i = s.cache[0], f = s.cache[1], o = s.cache[2], g = s.cache[3];
            const double th = s.cache[4], x = s.cache[5], hp = s.cache[6], cp = s.cache[7];
            const double do_ = dh * th;
            const double dcell = dc + dh * o * (1.0 - th * th);
            const double df = dcell * cp;
            const double di = dcell * g;
            const double dg = dcell * i;
            const double dzi = di * i * (1.0 - i);
            const double dzf = df * f * (1.0 - f);
            const double dzo = do_ * o * (1.0 - o);
            const double dzg = dg * (1.0 - g * g);
            dp[0] += dzi * x;
            dp[1] += dzi * hp;
            dp[2] += dzi;
            dp[3] += dzf * x;
            dp[4] += dzf * hp;
            dp[5] += dzf;
            dp[6] += dzo * x;
            dp[7] += dzo * hp;
            dp[8] += dzo;
            dp[9] += dzg * x;
            dp[10] += dzg * hp;
            dp[11] += dzg;
            out.d_input = dzi * p[0] + dzf * p[3] + dzo * p[6] + dzg * p[9];
            out.d_h_prev = dzi * p[1] + dzf * p[4] + dzo * p[7] + dzg * p[10];
            out.d_c_prev = dcell * f;
            break;
        }
        case CellKind::MGU: {
            const double f = s.cache[0], hc = s.cache[1], fs = s.cache[2];
            const double x = s.cache[3], hp = s.cache[4];
            double df = dh * (hc - hp);
            const double dhc = dh * f;
            double dhp = dh * (1.0 - f);
            const double dq = dhc * (1.0 - hc * hc);
            dp[3] += dq * x;  // wh
            dp[4] += dq * fs; // uh
            dp[5] += dq;      // bh
            const double dfs = dq * p[4];
            df += dfs * hp;
            dhp += dfs * f;
            const double dzf = df * f * (1.0 - f);
            dp[0] += dzf * x;
            dp[1] += dzf * hp;
            dp[2] += dzf;
            out.d_input = dq * p[3] + dzf * p[0];
            out.d_h_prev = dhp + dzf * p[1];
            break;
        }
        case CellKind::UGRNN: {
            const double g = s.cache[0], c = s.cache[1], x = s.cache[2], hp = s.cache[3];
            const double dg = dh * (hp - c);
            const double dcand = dh * (1.0 - g);
            const double dzg = dg * g * (1.0 - g);
            const double dzc = dcand * (1.0 - c * c);
            dp[0] += dzg * x;
            dp[1] += dzg * hp;
            dp[2] += dzg;
            dp[3] += dzc * x;
            dp[4] += dzc * hp;
            dp[5] += dzc;
            out.d_input = dzg * p[0] + dzc * p[3];
            out.d_h_prev = dh * g + dzg * p[1] + dzc * p[4];
            break;
        }
    }
    return out;
}

} // namespace asne
