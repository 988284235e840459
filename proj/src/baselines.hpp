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

#ifndef IRSPM_BASELINES_HPP
#define IRSPM_BASELINES_HPP

#include "measurement.hpp"

namespace irspm {

// Measurement-only reflection selection; no channel estimation involved.
// Both selectors are deterministic functions of the table.

/// Random-max sampling: the measured set maximizing the minimum received
/// power across users. Ties go to the smallest set index.
ReflectionSet rms_select(const MeasurementTable& table);

/// Conditional sample mean: per element i and lattice phase psi, the mean of
/// min_k p_bar over the sets with theta_i = psi; each element takes the
/// argmax phase. Empty conditional subsets never win; phase-index ties go to
/// the smallest index. The output need not be one of the measured sets.
ReflectionSet csm_select(const MeasurementTable& table, std::uint32_t alpha);

}  // namespace irspm

#endif
