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

#include "optimizer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

namespace irspm {

namespace {

VecC extended_column(const ReflectionSet& v) {
    VecC col(v.elements() + 1);
    for (int i = 0; i <= v.elements(); ++i) col[i] = v.v_entry(i);
    return col;
}

ReflectionSet identity_reflection(int n, std::uint32_t alpha) {
    ReflectionSet v;
    v.alpha = alpha;
    v.phase_idx.assign(static_cast<std::size_t>(n), 1u << alpha);  // phase 2*pi, entry 1
    return v;
}

int elements_of(const std::vector<MatC>& gs) {
    if (gs.empty()) throw std::invalid_argument("optimizer: need at least one covariance");
    const Eigen::Index n1 = gs.front().rows();
    for (const MatC& g : gs) {
        if (g.rows() != n1 || g.cols() != n1)
            throw std::invalid_argument("optimizer: covariance dimensions disagree");
    }
    if (n1 < 2) throw std::invalid_argument("optimizer: covariances must be (N+1) x (N+1), N >= 1");
    return static_cast<int>(n1) - 1;
}

}  // namespace

double quad_objective(const MatC& g, const ReflectionSet& v) {
    const VecC col = extended_column(v);
    if (g.rows() != col.size())
        throw std::invalid_argument("quad_objective: dimension mismatch");
    return col.dot(g * col).real();
}

double min_quad_objective(const std::vector<MatC>& gs, const ReflectionSet& v) {
    double best = std::numeric_limits<double>::infinity();
    for (const MatC& g : gs) best = std::min(best, quad_objective(g, v));
    return best;
}

// ---------------------------------------------------------------------------
// Geometry method (K = 1)
// ---------------------------------------------------------------------------

ReflectionSolution geometry_single_user(const VecC& h_hat, std::uint32_t alpha) {
    const int n = static_cast<int>(h_hat.size()) - 1;
    if (n < 1) throw std::invalid_argument("geometry_single_user: need N >= 1");
    const std::uint32_t levels = 1u << alpha;
    const double omega = phase_step(alpha);

    std::vector<double> args(static_cast<std::size_t>(n));
    std::vector<double> breakpoints;
    breakpoints.reserve(static_cast<std::size_t>(n) * levels);
    for (int i = 0; i < n; ++i) {
        const cxd hi = h_hat[i + 1];
        args[static_cast<std::size_t>(i)] = std::arg(hi);
        if (std::abs(hi) == 0.0) continue;
        for (std::uint32_t j = 0; j < levels; ++j) {
            double b = args[static_cast<std::size_t>(i)] + (j + 0.5) * omega;
            b -= std::floor(b / kTwoPi) * kTwoPi;
            breakpoints.push_back(b);
        }
    }

    auto assignment_for = [&](double ref_angle) {
        ReflectionSet v;
        v.alpha = alpha;
        v.phase_idx.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            v.phase_idx[static_cast<std::size_t>(i)] =
                std::abs(h_hat[i + 1]) == 0.0
                    ? levels
                    : nearest_phase_index(ref_angle - args[static_cast<std::size_t>(i)], alpha);
        }
        return v;
    };
    auto objective_of = [&](const ReflectionSet& v) {
        cxd g = h_hat[0];
        for (int i = 1; i <= n; ++i) g += v.vh_entry(i) * h_hat[i];
        return std::norm(g);
    };

    ReflectionSolution sol;
    sol.method = "geometry";
    if (breakpoints.empty()) {
        sol.v = identity_reflection(n, alpha);
        sol.objective = objective_of(sol.v);
        sol.per_user = {sol.objective};
        sol.iterations = 1;
        if (h_hat.isZero(0.0)) sol.status = "degenerate";
        return sol;
    }

    std::sort(breakpoints.begin(), breakpoints.end());
    double best_obj = -1.0;
    ReflectionSet best_v;
    const std::size_t pieces = breakpoints.size();
    for (std::size_t p = 0; p < pieces; ++p) {
        // midpoint of the arc from breakpoint p to the next one (circular)
        const double lo = breakpoints[p];
        const double hi = p + 1 < pieces ? breakpoints[p + 1] : breakpoints[0] + kTwoPi;
        const double mid = 0.5 * (lo + hi);
        const ReflectionSet v = assignment_for(mid);
        const double obj = objective_of(v);
        if (obj > best_obj) {
            best_obj = obj;
            best_v = v;
        }
    }

    sol.v = std::move(best_v);
    sol.objective = best_obj;
    sol.per_user = {best_obj};
    sol.iterations = static_cast<int>(pieces);
    return sol;
}

// ---------------------------------------------------------------------------
// Relaxed max-min solve on the elliptope
// ---------------------------------------------------------------------------

namespace {

MatC hermitian_part(const MatC& m) { return 0.5 * (m + m.adjoint()); }

double trace_inner(const MatC& g, const MatC& v) {
    // Tr(G V) = sum_ab G_ab V_ba
    return g.transpose().cwiseProduct(v).sum().real();
}

MatC project_psd(const MatC& m) {
    Eigen::SelfAdjointEigenSolver<MatC> es(hermitian_part(m));
    Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().adjoint();
}

MatC project_unit_diag(const MatC& m) {
    MatC out = m;
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, i) = cxd{1.0, 0.0};
    return out;
}

/// Dykstra-corrected alternating projections onto {PSD} and {diag = 1}.
/// The result has exact unit diagonal and eigenvalues >= -1e-9.
MatC project_elliptope(const MatC& m, int max_inner = 200) {
    MatC x = hermitian_part(m);
    MatC p = MatC::Zero(m.rows(), m.cols());
    MatC q = MatC::Zero(m.rows(), m.cols());
    for (int it = 0; it < max_inner; ++it) {
        const MatC y = project_psd(x + p);
        p = x + p - y;
        x = project_unit_diag(y + q);
        q = y + q - x;
        if ((y - x).norm() <= 1e-9) break;
    }
    return x;
}

/// Per-entry phases of the principal eigenvector, as a unit-modulus vector.
VecC principal_phases(const MatC& g) {
    Eigen::SelfAdjointEigenSolver<MatC> es(hermitian_part(g));
    Eigen::Index top;
    es.eigenvalues().maxCoeff(&top);
    VecC z = es.eigenvectors().col(top);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double a = std::abs(z[i]);
        z[i] = a > 0.0 ? z[i] / a : cxd{1.0, 0.0};
    }
    return z;
}

}  // namespace

RelaxResult relaxed_solve(const std::vector<MatC>& g_hats, const RelaxParams& params) {
    const int n = elements_of(g_hats) + 1;
    const std::size_t users = g_hats.size();

    double gmax = 0.0;
    for (const MatC& g : g_hats) gmax = std::max(gmax, g.norm());

    RelaxResult res;
    if (gmax == 0.0) {
        res.v_matrix = MatC::Identity(n, n);
        res.xi = 0.0;
        res.degenerate = true;
        res.converged = true;
        return res;
    }

    std::vector<MatC> gn(users);
    for (std::size_t k = 0; k < users; ++k) gn[k] = hermitian_part(g_hats[k]) / gmax;

    auto min_trace = [&](const MatC& v, std::size_t* argmin = nullptr) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t kb = 0;
        for (std::size_t k = 0; k < users; ++k) {
            const double t = trace_inner(gn[k], v);
            if (t < best) {
                best = t;
                kb = k;
            }
        }
        if (argmin) *argmin = kb;
        return best;
    };

    // Warm starts: identity, each user's phase-aligned rank-one point, and
    // their uniform mixture.
    std::vector<MatC> starts;
    starts.push_back(MatC::Identity(n, n));
    MatC mixture = MatC::Zero(n, n);
    for (std::size_t k = 0; k < users; ++k) {
        const VecC z = principal_phases(gn[k]);
        const MatC zz = z * z.adjoint();
        mixture += zz / static_cast<double>(users);
        starts.push_back(zz);
    }
    if (users > 1) starts.push_back(mixture);

    MatC v = starts.front();
    double v_obj = min_trace(v);
    for (const MatC& s : starts) {
        const double o = min_trace(s);
        if (o > v_obj) {
            v = s;
            v_obj = o;
        }
    }

    MatC best_v = v;
    double best_obj = v_obj;

    std::ofstream trace;
    if (params.trace_csv_path) {
        trace.open(*params.trace_csv_path);
        if (!trace) throw std::runtime_error("cannot open for writing: " + *params.trace_csv_path);
        trace << "iter,objective,best_objective\n";
    }

    double window_ref = best_obj;
    bool converged = false;
    int iters = 0;
    for (int t = 1; t <= params.max_iterations; ++t) {
        ++iters;
        std::size_t worst;
        min_trace(v, &worst);
        const double gnorm = gn[worst].norm();
        const double eta = params.step_scale * n / std::sqrt(static_cast<double>(t));
        v = project_elliptope(v + (eta / gnorm) * gn[worst]);
        const double obj = min_trace(v);
        if (obj > best_obj) {
            best_obj = obj;
            best_v = v;
        }
        if (trace.is_open()) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", t, obj, best_obj);
            trace << buf;
        }
        if (t % params.stationarity_window == 0) {
            const double improvement = best_obj - window_ref;
            if (improvement <= params.stationarity_tol * std::max(std::abs(best_obj), 1e-300)) {
                converged = true;
                break;
            }
            window_ref = best_obj;
        }
    }

    // Finishing passes on a softmin smoothing of the max-min objective; the
    // smoothed surrogate is differentiable, so plain projected ascent with a
    // shrinking temperature tightens the last digits the 1/sqrt(t) schedule
    // leaves on the table.
    if (params.polish) {
        const double scale = std::max(std::abs(best_obj), 1e-12);
        v = best_v;
        for (double tau : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double temperature = tau * scale;
            for (int it = 0; it < 200; ++it) {
                std::vector<double> tr(users);
                double tmin = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < users; ++k) {
                    tr[k] = trace_inner(gn[k], v);
                    tmin = std::min(tmin, tr[k]);
                }
                MatC dir = MatC::Zero(n, n);
                double wsum = 0.0;
                for (std::size_t k = 0; k < users; ++k) {
                    const double w = std::exp(-(tr[k] - tmin) / temperature);
                    dir += w * gn[k];
                    wsum += w;
                }
                dir /= wsum;
                const double dnorm = dir.norm();
                if (dnorm == 0.0) break;
                const double eta = 0.05 * n * tau;
                v = project_elliptope(v + (eta / dnorm) * dir);
                const double obj = min_trace(v);
                if (obj > best_obj) {
                    best_obj = obj;
                    best_v = v;
                }
            }
        }
    }

    res.v_matrix = std::move(best_v);
    res.xi = best_obj * gmax;
    res.converged = converged;
    res.iterations = iters;
    return res;
}

// ---------------------------------------------------------------------------
// Gaussian randomization + quantization
// ---------------------------------------------------------------------------

namespace {

ReflectionSet quantize_candidate(const VecC& z, std::uint32_t alpha) {
    const int n = static_cast<int>(z.size()) - 1;
    const std::uint32_t levels = 1u << alpha;
    VecC zr = z;
    const double lead = std::abs(z[0]);
    if (lead > 0.0) zr *= std::conj(z[0]) / lead;  // leading entry becomes |z_0|
    ReflectionSet v;
    v.alpha = alpha;
    v.phase_idx.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        v.phase_idx[static_cast<std::size_t>(i - 1)] =
            std::abs(zr[i]) == 0.0 ? levels : nearest_phase_index(-std::arg(zr[i]), alpha);
    }
    return v;
}

}  // namespace

ReflectionSet randomize_and_quantize(const MatC& v_matrix, const std::vector<MatC>& g_hats,
                                     std::uint32_t alpha, int draws, Rng& rng) {
    const int n1 = static_cast<int>(v_matrix.rows());
    if (draws < 1) throw std::invalid_argument("randomize_and_quantize: draws must be >= 1");

    Eigen::SelfAdjointEigenSolver<MatC> es(hermitian_part(v_matrix));
    Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    const MatC factor = es.eigenvectors() * evals.cwiseSqrt().asDiagonal();

    Eigen::Index top;
    es.eigenvalues().maxCoeff(&top);

    ReflectionSet best = quantize_candidate(es.eigenvectors().col(top), alpha);
    double best_obj = min_quad_objective(g_hats, best);

    for (int r = 0; r < draws; ++r) {
        VecC xi(n1);
        int attempts = 0;
        do {
            for (int i = 0; i < n1; ++i) xi[i] = crandn(rng);
        } while ((factor * xi).isZero(0.0) && ++attempts < 1000);
        const ReflectionSet cand = quantize_candidate(factor * xi, alpha);
        const double obj = min_quad_objective(g_hats, cand);
        if (obj > best_obj) {
            best_obj = obj;
            best = cand;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Successive refinement
// ---------------------------------------------------------------------------

ReflectionSolution successive_refinement(const ReflectionSet& v0, const std::vector<MatC>& g_hats,
                                         std::uint32_t alpha) {
    const int n = elements_of(g_hats);
    if (v0.elements() != n)
        throw std::invalid_argument("successive_refinement: initial reflection size mismatch");
    if (v0.alpha != alpha)
        throw std::invalid_argument("successive_refinement: initial reflection lattice mismatch");
    v0.validate();
    const std::uint32_t levels = 1u << alpha;

    ReflectionSolution sol;
    sol.method = "successive-refinement";
    sol.v = v0;

    double gmax = 0.0;
    for (const MatC& g : g_hats) gmax = std::max(gmax, g.norm());
    if (gmax == 0.0) {
        sol.objective = 0.0;
        sol.per_user.assign(g_hats.size(), 0.0);
        sol.status = "degenerate";
        return sol;
    }

    double obj = min_quad_objective(g_hats, sol.v);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            const std::uint32_t incumbent = sol.v.phase_idx[static_cast<std::size_t>(i)];
            std::uint32_t best_j = incumbent;
            double best_obj = obj;
            ReflectionSet cand = sol.v;
            for (std::uint32_t j = 1; j <= levels; ++j) {
                if (j == incumbent) continue;
                cand.phase_idx[static_cast<std::size_t>(i)] = j;
                const double cand_obj = min_quad_objective(g_hats, cand);
                if (cand_obj > best_obj) {
                    best_obj = cand_obj;
                    best_j = j;
                }
            }
            if (best_j != incumbent) {
                sol.v.phase_idx[static_cast<std::size_t>(i)] = best_j;
                obj = best_obj;
                sol.objective_trace.push_back(obj);
                ++sol.iterations;
                changed = true;
            }
        }
    }

    sol.objective = obj;
    sol.per_user.resize(g_hats.size());
    for (std::size_t k = 0; k < g_hats.size(); ++k)
        sol.per_user[k] = quad_objective(g_hats[k], sol.v);
    return sol;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

Strategy strategy_from_string(const std::string& name) {
    if (name.empty() || name == "rms-init+refine") return Strategy::rms_init_refine;
    if (name == "geometry") return Strategy::geometry;
    if (name == "sdr+refine") return Strategy::sdr_refine;
    throw std::invalid_argument("unknown optimizer strategy: \"" + name + "\"");
}

std::string strategy_to_string(Strategy s) {
    switch (s) {
        case Strategy::geometry: return "geometry";
        case Strategy::sdr_refine: return "sdr+refine";
        default: return "rms-init+refine";
    }
}

ReflectionSolution optimize(const std::vector<MatC>& g_hats, std::uint32_t alpha,
                            Strategy strategy, const OptimizeOptions& opts) {
    const int n = elements_of(g_hats);

    if (strategy == Strategy::geometry) {
        if (g_hats.size() != 1)
            throw std::invalid_argument("optimize: geometry strategy requires exactly one user");
        // Rank-one factor sqrt(lambda_max) * u of the covariance; exact for
        // the rank-one matrices produced by estimation.
        Eigen::SelfAdjointEigenSolver<MatC> es(hermitian_part(g_hats.front()));
        Eigen::Index top;
        const double lmax = es.eigenvalues().maxCoeff(&top);
        const VecC h = std::sqrt(std::max(lmax, 0.0)) * es.eigenvectors().col(top);
        ReflectionSolution sol = geometry_single_user(h, alpha);
        sol.objective = quad_objective(g_hats.front(), sol.v);
        sol.per_user = {sol.objective};
        return sol;
    }

    if (strategy == Strategy::sdr_refine) {
        RelaxResult relax = relaxed_solve(g_hats, opts.relax);
        Rng rng(opts.seed);
        const ReflectionSet v0 =
            randomize_and_quantize(relax.v_matrix, g_hats, alpha, opts.randomization_draws, rng);
        ReflectionSolution sol = successive_refinement(v0, g_hats, alpha);
        sol.method = "sdr+refine";
        sol.relax_iterations = relax.iterations;
        sol.relaxed_upper_bound = relax.xi;
        if (relax.degenerate)
            sol.status = "degenerate";
        else if (!relax.converged)
            sol.status = "relax-max-iterations";
        return sol;
    }

    if (!opts.initial.has_value())
        throw std::invalid_argument("optimize: rms-init+refine requires an initial reflection");
    if (opts.initial->elements() != n)
        throw std::invalid_argument("optimize: initial reflection size mismatch");
    ReflectionSolution sol = successive_refinement(*opts.initial, g_hats, alpha);
    sol.method = "rms-init+refine";
    return sol;
}

}  // namespace irspm
