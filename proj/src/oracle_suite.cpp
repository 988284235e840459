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

#include "oracle_suite.hpp"

#include <ostream>

namespace irspm {

ReflectionSolution exhaustive_best_reflection(const std::vector<MatC>& g_hats,
                                              std::uint32_t alpha) {
    const int n = static_cast<int>(g_hats.front().rows()) - 1;
    const std::uint32_t levels = 1u << alpha;
    if (static_cast<double>(n) * alpha > 24)
        throw std::invalid_argument("exhaustive_best_reflection: search space too large");

    ReflectionSet v;
    v.alpha = alpha;
    v.phase_idx.assign(static_cast<std::size_t>(n), 1u);

    ReflectionSolution best;
    best.method = "exhaustive";
    best.objective = -1.0;

    const std::uint64_t total = 1ull << (static_cast<unsigned>(n) * alpha);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (int i = 0; i < n; ++i) {
            v.phase_idx[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c % levels) + 1;
            c /= levels;
        }
        const double obj = min_quad_objective(g_hats, v);
        if (obj > best.objective) {
            best.objective = obj;
            best.v = v;
        }
    }
    best.iterations = static_cast<int>(total);
    best.per_user.resize(g_hats.size());
    for (std::size_t k = 0; k < g_hats.size(); ++k)
        best.per_user[k] = quad_objective(g_hats[k], best.v);
    return best;
}

namespace {

VecC random_channel_vector(int n1, Rng& rng) {
    VecC h(n1);
    for (int i = 0; i < n1; ++i) h[i] = crandn(rng);
    return h;
}

struct Check {
    std::ostream& os;
    int failures = 0;
    void report(const std::string& name, bool ok, const std::string& detail = "") {
        os << (ok ? "PASS" : "FAIL") << "  " << name;
        if (!detail.empty()) os << "  (" << detail << ")";
        os << "\n";
        if (!ok) ++failures;
    }
};

}  // namespace

int run_oracle_suite(const std::string& suite, std::ostream& os) {
    if (suite != "small") throw std::invalid_argument("unknown oracle suite: \"" + suite + "\"");
    Check check{os};
    Rng rng(0x5eed0001);

    {  // geometry method == exhaustive search
        bool ok = true;
        std::string detail;
        for (int inst = 0; inst < 25 && ok; ++inst) {
            const std::uint32_t alpha = inst % 2 ? 2 : 1;
            const int n = 4 + inst % 3;
            const VecC h = random_channel_vector(n + 1, rng);
            const std::vector<MatC> gs = {h * h.adjoint()};
            const double geo = geometry_single_user(h, alpha).objective;
            const double ref = exhaustive_best_reflection(gs, alpha).objective;
            if (geo != ref) {
                ok = false;
                char buf[96];
                std::snprintf(buf, sizeof buf, "instance %d: geometry %.12g vs exhaustive %.12g",
                              inst, geo, ref);
                detail = buf;
            }
        }
        check.report("geometry equals exhaustive search (N<=6, alpha<=2)", ok, detail);
    }

    {  // relaxed solve upper-bounds the discrete optimum
        bool ok = true;
        std::string detail;
        for (int inst = 0; inst < 10 && ok; ++inst) {
            std::vector<MatC> gs;
            for (int k = 0; k < 2; ++k) {
                const VecC h = random_channel_vector(5, rng);
                gs.push_back(h * h.adjoint());
            }
            const double relaxed = relaxed_solve(gs).xi;
            const double discrete = exhaustive_best_reflection(gs, 1).objective;
            if (!(relaxed >= discrete * (1.0 - 1e-6))) {
                ok = false;
                char buf[96];
                std::snprintf(buf, sizeof buf, "instance %d: relaxed %.12g < discrete %.12g", inst,
                              relaxed, discrete);
                detail = buf;
            }
        }
        check.report("relaxed solve upper-bounds exhaustive optimum (K=2, N=4, alpha=1)", ok,
                     detail);
    }

    {  // successive refinement: monotone trace, locally optimal endpoint
        bool ok = true;
        std::string detail;
        for (int inst = 0; inst < 10 && ok; ++inst) {
            std::vector<MatC> gs;
            for (int k = 0; k < 2; ++k) {
                const VecC h = random_channel_vector(5, rng);
                gs.push_back(h * h.adjoint());
            }
            const std::vector<ReflectionSet> inits = random_reflections(1, 4, 1, rng);
            const ReflectionSolution sol = successive_refinement(inits.front(), gs, 1);
            const double init_obj = min_quad_objective(gs, inits.front());
            if (sol.objective < init_obj) {
                ok = false;
                detail = "objective decreased from the initial point";
                break;
            }
            double prev = init_obj;
            for (double t : sol.objective_trace) {
                if (t <= prev) {
                    ok = false;
                    detail = "trace not strictly increasing";
                }
                prev = t;
            }
            ReflectionSet probe = sol.v;
            for (int i = 0; i < 4 && ok; ++i) {
                for (std::uint32_t j = 1; j <= 2; ++j) {
                    probe.phase_idx[static_cast<std::size_t>(i)] = j;
                    if (min_quad_objective(gs, probe) > sol.objective) {
                        ok = false;
                        detail = "single-coordinate improvement left";
                    }
                }
                probe.phase_idx[static_cast<std::size_t>(i)] =
                    sol.v.phase_idx[static_cast<std::size_t>(i)];
            }
        }
        check.report("successive refinement is monotone and locally optimal (N=4, alpha=1)", ok,
                     detail);
    }

    {  // baselines against a direct re-scan
        bool ok = true;
        std::string detail;
        for (int inst = 0; inst < 10 && ok; ++inst) {
            MeasurementTable table;
            table.users = 2;
            table.q_samples = 1;
            table.reflections = random_reflections(40, 4, 2, rng);
            table.p_bar.resize(80);
            for (double& p : table.p_bar) p = runif(rng, 0.0, 1.0);
            const ReflectionSet picked = rms_select(table);
            int best = 0;
            double best_val = -1.0;
            for (int m = 0; m < table.sets(); ++m) {
                const double val = std::min(table.value(0, m), table.value(1, m));
                if (val > best_val) {
                    best_val = val;
                    best = m;
                }
            }
            if (!(picked == table.reflections[static_cast<std::size_t>(best)])) {
                ok = false;
                detail = "rms pick differs from re-scan";
            }
        }
        check.report("rms selection equals direct re-scan", ok, detail);
    }

    os << (check.failures == 0 ? "oracle suite: all checks passed\n"
                               : "oracle suite: FAILURES present\n");
    return check.failures;
}

}  // namespace irspm
