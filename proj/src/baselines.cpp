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

#include "baselines.hpp"

#include <limits>
#include <vector>

namespace irspm {

namespace {

std::vector<double> min_power_per_set(const MeasurementTable& table) {
    std::vector<double> u(static_cast<std::size_t>(table.sets()));
    for (int m = 0; m < table.sets(); ++m) {
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < table.users; ++k) worst = std::min(worst, table.value(k, m));
        u[static_cast<std::size_t>(m)] = worst;
    }
    return u;
}

}  // namespace

ReflectionSet rms_select(const MeasurementTable& table) {
    if (table.sets() < 1) throw std::invalid_argument("rms_select: empty table");
    const std::vector<double> u = min_power_per_set(table);
    int best = 0;
    for (int m = 1; m < table.sets(); ++m) {
        if (u[static_cast<std::size_t>(m)] > u[static_cast<std::size_t>(best)]) best = m;
    }
    return table.reflections[static_cast<std::size_t>(best)];
}

ReflectionSet csm_select(const MeasurementTable& table, std::uint32_t alpha) {
    if (table.sets() < 1) throw std::invalid_argument("csm_select: empty table");
    const int n = table.reflections.front().elements();
    const std::uint32_t levels = 1u << alpha;
    const std::vector<double> u = min_power_per_set(table);

    ReflectionSet out;
    out.alpha = alpha;
    out.phase_idx.resize(static_cast<std::size_t>(n));
    std::vector<double> sum(levels);
    std::vector<int> count(levels);
    for (int i = 0; i < n; ++i) {
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (int m = 0; m < table.sets(); ++m) {
            const std::uint32_t psi = table.reflections[static_cast<std::size_t>(m)]
                                          .phase_idx[static_cast<std::size_t>(i)];
            if (psi < 1 || psi > levels)
                throw std::invalid_argument("csm_select: table lattice does not match alpha");
            sum[psi - 1] += u[static_cast<std::size_t>(m)];
            count[psi - 1] += 1;
        }
        std::uint32_t best_psi = 0;
        double best_mean = -std::numeric_limits<double>::infinity();
        for (std::uint32_t psi = 1; psi <= levels; ++psi) {
            if (count[psi - 1] == 0) continue;  // empty subset: conditional mean is -inf
            const double mean = sum[psi - 1] / count[psi - 1];
            if (mean > best_mean) {
                best_mean = mean;
                best_psi = psi;
            }
        }
        if (best_psi == 0) throw std::logic_error("csm_select: no occupied phase bin");
        out.phase_idx[static_cast<std::size_t>(i)] = best_psi;
    }
    return out;
}

}  // namespace irspm
