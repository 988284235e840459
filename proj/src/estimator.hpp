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

#ifndef IRSPM_ESTIMATOR_HPP
#define IRSPM_ESTIMATOR_HPP

#include <optional>
#include <string>

#include "measurement.hpp"

namespace irspm {

using VecD = Eigen::VectorXd;

// The estimator is a two-neuron real network computing
//   p_hat(v) = a^2 + b^2,  [a, b] = x^T W,
// where x = [Re(v); Im(v)] and W carries the block structure
// [[w1, w2], [w2, -w1]]. The 2N+2 free weights gamma = [w1; w2] encode the
// complex channel w = w1 + j*w2, and p_hat(v) = |v^H w|^2 exactly.

/// Real input features of the extended reflection vector:
/// [1, cos(theta_1..N), 0, -sin(theta_1..N)].
VecD reflection_features(const ReflectionSet& v);

/// Jacobians of the two neurons w.r.t. gamma: da/dgamma = [x1; x2],
/// db/dgamma = [-x2; x1].
void neuron_jacobians(const ReflectionSet& v, VecD& da_dgamma, VecD& db_dgamma);

/// Predicted power a^2 + b^2 (watts in whatever scale gamma is expressed in).
double forward(const VecD& gamma, const ReflectionSet& v);

/// Gradient of the squared residual (p_hat(v) - p_bar_target)^2 w.r.t. gamma.
VecD grad(const VecD& gamma, const ReflectionSet& v, double p_bar_target);

/// Packs gamma = [w1; w2] into the complex vector w1 + j*w2 and back.
VecC assemble(const VecD& gamma);
VecD disassemble(const VecC& w);

struct TrainConfig {
    int m0 = 0;                 // training-set size; 0 selects ceil(0.8 * M)
    double learning_rate = 1e-3;
    int epochs = 500;           // Z
    double init_scale = 0.1;    // weight-init std, in normalized units
    bool normalize = true;      // scale targets to mean 1 before training
    double subtract_noise_w = 0.0;  // optional noise-floor subtraction from targets
    std::uint64_t seed = 0;
    std::optional<std::string> curve_csv_path;  // per-epoch train MSE / val SSE dump

    int resolve_m0(int m) const;
};

struct ChannelEstimate {
    VecC w_hat;        // estimated effective channel, N+1 entries
    double fit = 0.0;  // validation MSE at the selected epoch, physical units
    int best_epoch = 0;

    MatC covariance() const { return w_hat * w_hat.adjoint(); }
};

/// Per-sample SGD over shuffled passes of the first M0 measurements of user
/// k, with validation-SSE weight selection over passes on the remaining
/// M - M0. Throws divergence_error when the loss blows up.
ChannelEstimate train(const MeasurementTable& table, int k, const TrainConfig& cfg);

}  // namespace irspm

#endif
