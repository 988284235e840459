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

#ifndef IRSPM_SCENARIO_HPP
#define IRSPM_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace irspm {

using Point3 = std::array<double, 3>;

/// Axis-aligned square on a horizontal plane; users are dropped uniformly in it.
struct UserArea {
    double xmin = 0.0;
    double xmax = 10.0;
    double ymin = 0.0;
    double ymax = 10.0;
    double z = 0.0;
};

/// Physical deployment: one single-antenna BS, one IRS panel (N_y x N_z
/// elements at half-wavelength spacing), K single-antenna users.
/// Powers are stored in linear watts; dBm appears only at the config boundary.
struct ScenarioConfig {
    int users = 1;                    // K
    int irs_ny = 4;                   // elements along y
    int irs_nz = 4;                   // elements along z
    std::uint32_t phase_bits = 1;     // alpha; per-element phases in {omega,...,2^alpha*omega}
    double tx_power_w = dbm_to_watt(30.0);
    double noise_w = dbm_to_watt(-90.0);
    int nlos_paths = 5;               // L
    double rician_bs_irs = 10.0;      // eps_BI (linear)
    double rician_irs_user = 1.0;     // eps_IU (linear)
    Point3 bs_pos{50.0, -200.0, 20.0};
    Point3 irs_pos{-2.0, -1.0, 0.0};
    UserArea user_area{};
    double wavelength_m = 0.1;        // only the LoS phase term depends on it

    int elements() const { return irs_ny * irs_nz; }
    std::uint32_t phase_levels() const { return 1u << phase_bits; }

    /// Throws std::invalid_argument on violated invariants.
    void validate() const;
};

/// Strict JSON parse: unknown keys anywhere are rejected, missing keys fall
/// back to the defaults above. Keys carry units (e.g. "tx_power_dbm").
ScenarioConfig scenario_from_json_text(const std::string& json_text);

// Path-loss laws (dB) for the three links.
inline double pathloss_bs_user_db(double d) { return 33.0 + 37.0 * std::log10(d); }
inline double pathloss_bs_irs_db(double d) { return 30.0 + 20.0 * std::log10(d); }
inline double pathloss_irs_user_db(double d) { return 30.0 + 20.0 * std::log10(d); }

double distance(const Point3& a, const Point3& b);

/// K i.i.d. uniform positions in the user area.
std::vector<Point3> draw_user_positions(const ScenarioConfig& cfg, Rng& rng);

}  // namespace irspm

#endif
