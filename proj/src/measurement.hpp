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

#ifndef IRSPM_MEASUREMENT_HPP
#define IRSPM_MEASUREMENT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "channel.hpp"

namespace irspm {

/// Per-user RSRP rows for each of M reflection sets, in watts. The same
/// reflection schedule is broadcast to all users.
struct MeasurementTable {
    std::vector<ReflectionSet> reflections;  // M entries
    std::vector<double> p_bar;               // K x M, row-major (k * M + m)
    int users = 0;
    int q_samples = 1;

    int sets() const { return static_cast<int>(reflections.size()); }
    double value(int k, int m) const { return p_bar[static_cast<std::size_t>(k) * sets() + m]; }
    double& value(int k, int m) { return p_bar[static_cast<std::size_t>(k) * sets() + m]; }

    /// First `m` columns (shared-prefix reuse across a sweep).
    MeasurementTable prefix(int m) const;

    /// Columns: m, idx_1..idx_N, pbar_1..pbar_K.
    void write_csv(std::ostream& os) const;
    void write_csv_file(const std::string& path) const;
};

/// Q-sample average received power |g_k + n|^2 under one reflection set;
/// exact desired power when sigma^2 = 0.
double rsrp(const ReflectionSet& v, const ChannelRealization& real, int k, int q, Rng& rng);

/// Full K x M table; noise independent per (set, user).
MeasurementTable collect(const ChannelRealization& real, const std::vector<ReflectionSet>& sets,
                         int q, Rng& rng);

}  // namespace irspm

#endif
