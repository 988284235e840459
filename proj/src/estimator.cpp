// irspm - IRS reflection design from user power measurements
// Copyright (C) 2026 irspm contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "estimator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace irspm {

namespace {

// x1 = Re(v), x2 = Im(v) of the extended column vector v; entry 0 is the
// fixed leading 1. Built from the same exact lattice entries as everything
// else so that one-bit reflections stay exactly real.
void split_features(const ReflectionSet& v, VecD& x1, VecD& x2) {
    const int n = v.elements();
    x1.resize(n + 1);
    x2.resize(n + 1);
    x1[0] = 1.0;
    x2[0] = 0.0;
    for (int i = 1; i <= n; ++i) {
        const cxd e = v.v_entry(i);
        x1[i] = e.real();
        x2[i] = e.imag();
    }
}

struct Neurons {
    double a;
    double b;
};

Neurons eval_neurons(const VecD& gamma, const VecD& x1, const VecD& x2) {
    const int np1 = static_cast<int>(x1.size());
    const auto w1 = gamma.head(np1);
    const auto w2 = gamma.tail(np1);
    return {x1.dot(w1) + x2.dot(w2), x1.dot(w2) - x2.dot(w1)};
}

}  // namespace

VecD reflection_features(const ReflectionSet& v) {
    VecD x1, x2;
    split_features(v, x1, x2);
    VecD x(x1.size() + x2.size());
    x << x1, x2;
    return x;
}

void neuron_jacobians(const ReflectionSet& v, VecD& da_dgamma, VecD& db_dgamma) {
    VecD x1, x2;
    split_features(v, x1, x2);
    da_dgamma.resize(2 * x1.size());
    db_dgamma.resize(2 * x1.size());
    da_dgamma << x1, x2;
    db_dgamma << -x2, x1;
}

double forward(const VecD& gamma, const ReflectionSet& v) {
    if (gamma.size() != 2 * (v.elements() + 1))
        throw std::invalid_argument("forward: gamma size != 2N+2");
    VecD x1, x2;
    split_features(v, x1, x2);
    const Neurons nn = eval_neurons(gamma, x1, x2);
    return nn.a * nn.a + nn.b * nn.b;
}

VecD grad(const VecD& gamma, const ReflectionSet& v, double p_bar_target) {
    if (gamma.size() != 2 * (v.elements() + 1))
        throw std::invalid_argument("grad: gamma size != 2N+2");
    VecD x1, x2;
    split_features(v, x1, x2);
    const Neurons nn = eval_neurons(gamma, x1, x2);
    const double residual = nn.a * nn.a + nn.b * nn.b - p_bar_target;
    // dL/da = 2r * 2a, dL/db = 2r * 2b; da/dgamma = [x1; x2], db/dgamma = [-x2; x1]
    const double ca = 4.0 * residual * nn.a;
    const double cb = 4.0 * residual * nn.b;
    const int np1 = static_cast<int>(x1.size());
    VecD g(2 * np1);
    g.head(np1) = ca * x1 - cb * x2;
    g.tail(np1) = ca * x2 + cb * x1;
    return g;
}

VecC assemble(const VecD& gamma) {
    if (gamma.size() % 2 != 0) throw std::invalid_argument("assemble: gamma size must be even");
    const int np1 = static_cast<int>(gamma.size()) / 2;
    VecC w(np1);
    for (int i = 0; i < np1; ++i) w[i] = cxd{gamma[i], gamma[np1 + i]};
    return w;
}

VecD disassemble(const VecC& w) {
    VecD gamma(2 * w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        gamma[i] = w[i].real();
        gamma[w.size() + i] = w[i].imag();
    }
    return gamma;
}

int TrainConfig::resolve_m0(int m) const {
    if (m0 > 0) return m0;
    return static_cast<int>(std::ceil(0.8 * m));
}

ChannelEstimate train(const MeasurementTable& table, int k, const TrainConfig& cfg) {
    const int m = table.sets();
    if (k < 0 || k >= table.users) throw std::invalid_argument("train: user index out of range");
    if (m < 2) throw std::invalid_argument("train: need at least 2 measurements");
    const int m0 = cfg.resolve_m0(m);
    if (m0 < 1 || m0 >= m)
        throw std::invalid_argument("train: training-set size must satisfy 1 <= M0 < M");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be > 0");
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (cfg.subtract_noise_w < 0.0)
        throw std::invalid_argument("train: subtract_noise_w must be >= 0");

    const int n = table.reflections.front().elements();
    const int dim = 2 * (n + 1);

    // Targets, optionally noise-floor corrected, then scaled to mean ~1.
    // forward() is degree-2 homogeneous in gamma, so the scaling is undone
    // exactly on the returned channel.
    std::vector<double> target(static_cast<std::size_t>(m));
    for (int col = 0; col < m; ++col) target[static_cast<std::size_t>(col)] = table.value(k, col) - cfg.subtract_noise_w;
    double scale = 1.0;
    if (cfg.normalize) {
        const double mean =
            std::accumulate(target.begin(), target.end(), 0.0) / static_cast<double>(m);
        if (mean > 0.0) scale = 1.0 / mean;
    }
    for (double& t : target) t *= scale;

    // Precompute per-measurement features.
    std::vector<VecD> x1(static_cast<std::size_t>(m)), x2(static_cast<std::size_t>(m));
    for (int col = 0; col < m; ++col)
        split_features(table.reflections[static_cast<std::size_t>(col)], x1[static_cast<std::size_t>(col)],
                       x2[static_cast<std::size_t>(col)]);

    Rng rng(cfg.seed);
    VecD gamma(dim);
    {
        std::normal_distribution<double> init(0.0, cfg.init_scale);
        for (int i = 0; i < dim; ++i) gamma[i] = init(rng);
    }

    auto residual_at = [&](const VecD& g, int col) {
        const Neurons nn = eval_neurons(g, x1[static_cast<std::size_t>(col)], x2[static_cast<std::size_t>(col)]);
        return nn.a * nn.a + nn.b * nn.b - target[static_cast<std::size_t>(col)];
    };
    auto train_mse = [&](const VecD& g) {
        double acc = 0.0;
        for (int col = 0; col < m0; ++col) {
            const double r = residual_at(g, col);
            acc += r * r;
        }
        return acc / m0;
    };
    auto val_sse = [&](const VecD& g) {
        double acc = 0.0;
        for (int col = m0; col < m; ++col) {
            const double r = residual_at(g, col);
            acc += r * r;
        }
        return acc;
    };

    const double initial_loss = train_mse(gamma);
    const double divergence_cap = 1e6 * std::max(initial_loss, 1e-300);

    std::ofstream curve;
    if (cfg.curve_csv_path) {
        curve.open(*cfg.curve_csv_path);
        if (!curve) throw std::runtime_error("cannot open for writing: " + *cfg.curve_csv_path);
        curve << "epoch,train_mse,val_sse\n";
    }

    std::vector<int> order(static_cast<std::size_t>(m0));
    std::iota(order.begin(), order.end(), 0);

    VecD best_gamma = gamma;
    double best_val = val_sse(gamma);
    int best_epoch = 0;

    const int np1 = n + 1;
    VecD step(dim);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (int col : order) {
            const VecD& f1 = x1[static_cast<std::size_t>(col)];
            const VecD& f2 = x2[static_cast<std::size_t>(col)];
            const Neurons nn = eval_neurons(gamma, f1, f2);
            const double r = nn.a * nn.a + nn.b * nn.b - target[static_cast<std::size_t>(col)];
            const double ca = 4.0 * r * nn.a;
            const double cb = 4.0 * r * nn.b;
            step.head(np1) = ca * f1 - cb * f2;
            step.tail(np1) = ca * f2 + cb * f1;
            gamma -= cfg.learning_rate * step;
        }

        const double epoch_train = train_mse(gamma);
        const double epoch_val = val_sse(gamma);
        if (curve.is_open()) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", epoch,
                          epoch_train / (scale * scale), epoch_val / (scale * scale));
            curve << buf;
        }
        if (!std::isfinite(epoch_train) || epoch_train > divergence_cap)
            throw divergence_error("train: loss diverged; reduce the learning rate");
        if (epoch_val < best_val) {
            best_val = epoch_val;
            best_gamma = gamma;
            best_epoch = epoch;
        }
    }

    ChannelEstimate est;
    est.w_hat = assemble(best_gamma) / std::sqrt(scale);
    est.fit = best_val / (scale * scale) / static_cast<double>(m - m0);
    est.best_epoch = best_epoch;
    return est;
}

}  // namespace irspm
