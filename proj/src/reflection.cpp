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

#include "reflection.hpp"

#include <cmath>

namespace irspm {

cxd unit_phase(std::uint32_t idx, std::uint32_t alpha) {
    const std::uint32_t levels = 1u << alpha;
    const std::uint32_t r = idx % levels;  // 0 stands for the full turn 2*pi
    if (alpha == 1) return r == 1 ? cxd{-1.0, 0.0} : cxd{1.0, 0.0};
    const std::uint32_t quarter = levels / 4;
    if (r % quarter == 0) {
        switch (r / quarter) {
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
            default: return {1.0, 0.0};
        }
    }
    const double theta = static_cast<double>(r) * phase_step(alpha);
    return {std::cos(theta), std::sin(theta)};
}

std::uint32_t nearest_phase_index(double angle, std::uint32_t alpha) {
    const std::uint32_t levels = 1u << alpha;
    const double omega = phase_step(alpha);
    double t = angle / omega;
    t -= std::floor(t / static_cast<double>(levels)) * static_cast<double>(levels);
    // t in [0, levels); candidate lattice positions floor(t) and floor(t)+1
    const double lo = std::floor(t);
    const double frac = t - lo;
    auto wrap = [levels](std::uint32_t j) { return (j % levels == 0) ? levels : j % levels; };
    const std::uint32_t jlo = wrap(static_cast<std::uint32_t>(lo) + levels);  // +levels avoids 0-1 underflow
    const std::uint32_t jhi = wrap(static_cast<std::uint32_t>(lo) + levels + 1);
    if (frac > 0.5) return jhi;
    if (frac < 0.5) return jlo;
    return std::min(jlo, jhi);
}

ReflectionSet::ReflectionSet(std::uint32_t alpha_, std::vector<std::uint32_t> idx)
    : alpha(alpha_), phase_idx(std::move(idx)) {
    validate();
}

void ReflectionSet::validate() const {
    const std::uint32_t levels = 1u << alpha;
    for (std::uint32_t idx : phase_idx) {
        if (idx < 1 || idx > levels)
            throw std::invalid_argument("reflection: phase index out of range");
    }
}

std::vector<ReflectionSet> random_reflections(int m, int n, std::uint32_t alpha, Rng& rng) {
    if (m < 1) throw std::invalid_argument("random_reflections: m must be >= 1");
    if (n < 1) throw std::invalid_argument("random_reflections: n must be >= 1");
    std::uniform_int_distribution<std::uint32_t> dist(1, 1u << alpha);
    std::vector<ReflectionSet> sets;
    sets.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        ReflectionSet s;
        s.alpha = alpha;
        s.phase_idx.resize(static_cast<std::size_t>(n));
        for (auto& idx : s.phase_idx) idx = dist(rng);
        sets.push_back(std::move(s));
    }
    return sets;
}

}  // namespace irspm
