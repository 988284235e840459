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

#ifndef IRSPM_REFLECTION_HPP
#define IRSPM_REFLECTION_HPP

#include <cstdint>
#include <vector>

#include "common.hpp"

namespace irspm {

/// Lattice step omega = 2*pi / 2^alpha of the discrete phase set
/// {omega, 2*omega, ..., 2^alpha * omega}.
inline double phase_step(std::uint32_t alpha) {
    return kTwoPi / static_cast<double>(1u << alpha);
}

/// e^{j * idx * omega}. Quarter-circle points come out exact (+-1, +-j), so
/// one-bit reflections are exactly real.
cxd unit_phase(std::uint32_t idx, std::uint32_t alpha);

/// Index in {1,...,2^alpha} whose lattice angle is nearest to `angle`
/// (any real, taken mod 2*pi). Exact halfway ties go to the smaller index.
std::uint32_t nearest_phase_index(double angle, std::uint32_t alpha);

/// One discrete IRS configuration: per-element phase indices into the
/// 2^alpha-point lattice. The extended reflection vector has a fixed leading
/// entry 1 for the direct path.
struct ReflectionSet {
    std::uint32_t alpha = 1;
    std::vector<std::uint32_t> phase_idx;  // 1-based indices, one per element

    ReflectionSet() = default;
    ReflectionSet(std::uint32_t alpha_, std::vector<std::uint32_t> idx);

    int elements() const { return static_cast<int>(phase_idx.size()); }
    double phase(int i) const { return phase_idx[static_cast<std::size_t>(i)] * phase_step(alpha); }

    /// Entry i of the row vector v^H = [1, e^{j theta_1}, ..., e^{j theta_N}].
    cxd vh_entry(int i) const {
        return i == 0 ? cxd{1.0, 0.0} : unit_phase(phase_idx[static_cast<std::size_t>(i - 1)], alpha);
    }

    /// Entry i of the column vector v (the conjugate of vh_entry).
    cxd v_entry(int i) const { return std::conj(vh_entry(i)); }

    bool operator==(const ReflectionSet& other) const = default;

    /// Throws std::invalid_argument if any index is outside {1,...,2^alpha}.
    void validate() const;
};

/// M reflection sets with i.i.d. uniform phase indices.
std::vector<ReflectionSet> random_reflections(int m, int n, std::uint32_t alpha, Rng& rng);

}  // namespace irspm

#endif
