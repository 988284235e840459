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

#include "measurement.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace irspm {

double rsrp(const ReflectionSet& v, const ChannelRealization& real, int k, int q, Rng& rng) {
    if (q < 1) throw std::invalid_argument("rsrp: sample count must be >= 1");
    const cxd g = effective_gain(v, real, k);
    if (real.sigma2_w == 0.0) return std::norm(g);
    const double sigma = std::sqrt(real.sigma2_w);
    double acc = 0.0;
    for (int s = 0; s < q; ++s) acc += std::norm(g + sigma * crandn(rng));
    return acc / q;
}

MeasurementTable collect(const ChannelRealization& real, const std::vector<ReflectionSet>& sets,
                         int q, Rng& rng) {
    MeasurementTable table;
    table.reflections = sets;
    table.users = real.users();
    table.q_samples = q;
    table.p_bar.assign(static_cast<std::size_t>(table.users) * sets.size(), 0.0);
    for (std::size_t m = 0; m < sets.size(); ++m)
        for (int k = 0; k < table.users; ++k)
            table.value(k, static_cast<int>(m)) = rsrp(sets[m], real, k, q, rng);
    return table;
}

MeasurementTable MeasurementTable::prefix(int m) const {
    if (m < 1 || m > sets()) throw std::invalid_argument("MeasurementTable::prefix: bad length");
    MeasurementTable out;
    out.reflections.assign(reflections.begin(), reflections.begin() + m);
    out.users = users;
    out.q_samples = q_samples;
    out.p_bar.resize(static_cast<std::size_t>(users) * m);
    for (int k = 0; k < users; ++k)
        for (int col = 0; col < m; ++col) out.value(k, col) = value(k, col);
    return out;
}

void MeasurementTable::write_csv(std::ostream& os) const {
    const int n = reflections.empty() ? 0 : reflections.front().elements();
    os << "m";
    for (int i = 1; i <= n; ++i) os << ",idx_" << i;
    for (int k = 1; k <= users; ++k) os << ",pbar_" << k;
    os << "\n";
    char buf[40];
    for (int m = 0; m < sets(); ++m) {
        os << (m + 1);
        for (int i = 0; i < n; ++i) os << ',' << reflections[m].phase_idx[static_cast<std::size_t>(i)];
        for (int k = 0; k < users; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", value(k, m));
            os << ',' << buf;
        }
        os << "\n";
    }
}

void MeasurementTable::write_csv_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(os);
}

}  // namespace irspm
