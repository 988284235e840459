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

#ifndef IRSPM_OPTIMIZER_HPP
#define IRSPM_OPTIMIZER_HPP

#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"

namespace irspm {

/// v^H G v for the extended reflection vector (real for Hermitian G).
double quad_objective(const MatC& g, const ReflectionSet& v);

/// min_k v^H G_k v.
double min_quad_objective(const std::vector<MatC>& gs, const ReflectionSet& v);

struct ReflectionSolution {
    ReflectionSet v;
    double objective = 0.0;          // min_k v^H G_k v, watts
    std::vector<double> per_user;    // v^H G_k v per user
    std::string method;
    int iterations = 0;              // accepted refinement updates / enumerated pieces
    int relax_iterations = 0;
    std::optional<double> relaxed_upper_bound;
    std::string status = "ok";       // "ok" | "degenerate" | "relax-max-iterations"
    std::vector<double> objective_trace;  // objective after each accepted refinement update
};

/// Exact discrete maximizer of |h_0 + sum_i e^{j theta_i} h_i|^2 over the
/// phase lattice. Sweeps the rotation angle: per element the best lattice
/// phase changes only at N*2^alpha breakpoints, so evaluating one assignment
/// per arc covers every candidate the optimum can be.
ReflectionSolution geometry_single_user(const VecC& h_hat, std::uint32_t alpha);

struct RelaxParams {
    int max_iterations = 2000;
    double step_scale = 0.5;         // eta_t = step_scale * n / sqrt(t)
    double stationarity_tol = 1e-6;  // relative best-value improvement over a window
    int stationarity_window = 100;
    bool polish = true;              // smoothed projected-ascent finishing passes
    std::optional<std::string> trace_csv_path;
};

struct RelaxResult {
    MatC v_matrix;     // Hermitian, diag within 1e-6 of 1, eigenvalues >= -1e-8
    double xi = 0.0;   // achieved min_k Tr(G_k V)
    bool converged = false;
    bool degenerate = false;
    int iterations = 0;
};

/// Approximate max_V min_k Tr(G_k V) over the elliptope {V >= 0, diag = 1}
/// (rank and discreteness dropped): projected supergradient ascent along the
/// active worst user with eta_t ~ 1/sqrt(t), Dykstra-corrected alternating
/// projections onto the PSD cone and the unit diagonal, best feasible
/// iterate kept. At the solver's stationarity tolerance the returned value
/// upper-bounds every feasible discrete objective.
RelaxResult relaxed_solve(const std::vector<MatC>& g_hats, const RelaxParams& params = {});

/// Draws R candidates z ~ CN(0, V), de-rotates each by the phase of its
/// leading entry, snaps entries 2..N+1 to the nearest lattice phase, and
/// returns the candidate maximizing min_k v^H G_k v. The quantized principal
/// eigenvector of V is always included as a candidate.
ReflectionSet randomize_and_quantize(const MatC& v_matrix, const std::vector<MatC>& g_hats,
                                     std::uint32_t alpha, int draws, Rng& rng);

/// Cyclic coordinate ascent over per-element lattice phases, full sweeps
/// until none changes. Ties keep the incumbent, so termination is exact on
/// the finite lattice and the objective trace is strictly increasing.
ReflectionSolution successive_refinement(const ReflectionSet& v0, const std::vector<MatC>& g_hats,
                                         std::uint32_t alpha);

enum class Strategy {
    geometry,         // K = 1 only; exact
    sdr_refine,       // relaxed solve -> randomization -> refinement
    rms_init_refine,  // caller-provided initial reflection -> refinement
};

Strategy strategy_from_string(const std::string& name);  // "" selects rms-init+refine
std::string strategy_to_string(Strategy s);

struct OptimizeOptions {
    std::optional<ReflectionSet> initial;  // required for rms_init_refine
    int randomization_draws = 200;
    std::uint64_t seed = 0;
    RelaxParams relax{};
};

ReflectionSolution optimize(const std::vector<MatC>& g_hats, std::uint32_t alpha,
                            Strategy strategy = Strategy::rms_init_refine,
                            const OptimizeOptions& opts = {});

}  // namespace irspm

#endif
