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

#include "scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace irspm {

using nlohmann::json;

void ScenarioConfig::validate() const {
    if (users < 1) throw std::invalid_argument("scenario: users must be >= 1");
    if (irs_ny < 1 || irs_nz < 1)
        throw std::invalid_argument("scenario: irs_ny and irs_nz must be >= 1");
    if (phase_bits < 1 || phase_bits > 16)
        throw std::invalid_argument("scenario: phase_bits must be in [1, 16]");
    if (!(tx_power_w > 0.0)) throw std::invalid_argument("scenario: tx power must be positive");
    if (noise_w < 0.0) throw std::invalid_argument("scenario: noise power must be >= 0");
    if (nlos_paths < 1) throw std::invalid_argument("scenario: nlos_paths must be >= 1");
    if (rician_bs_irs < 0.0 || rician_irs_user < 0.0)
        throw std::invalid_argument("scenario: Rician factors must be >= 0");
    if (!(wavelength_m > 0.0)) throw std::invalid_argument("scenario: wavelength must be positive");
    if (user_area.xmax < user_area.xmin || user_area.ymax < user_area.ymin)
        throw std::invalid_argument("scenario: user area corners out of order");
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!known.count(item.key()))
            throw parse_error(where + ": unknown key \"" + item.key() + "\"");
    }
}

Point3 parse_point(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw parse_error(where + ": expected an array of 3 coordinates");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

UserArea parse_area(const json& j) {
    reject_unknown_keys(j, {"xmin", "xmax", "ymin", "ymax", "z"}, "user_area_m");
    UserArea a;
    a.xmin = j.value("xmin", a.xmin);
    a.xmax = j.value("xmax", a.xmax);
    a.ymin = j.value("ymin", a.ymin);
    a.ymax = j.value("ymax", a.ymax);
    a.z = j.value("z", a.z);
    return a;
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("scenario: expected a JSON object");
    reject_unknown_keys(j,
                        {"users", "irs_ny", "irs_nz", "phase_bits", "tx_power_dbm", "noise_dbm",
                         "nlos_paths", "rician_bs_irs", "rician_irs_user", "bs_pos_m", "irs_pos_m",
                         "user_area_m", "wavelength_m"},
                        "scenario");
    ScenarioConfig cfg;
    cfg.users = j.value("users", cfg.users);
    cfg.irs_ny = j.value("irs_ny", cfg.irs_ny);
    cfg.irs_nz = j.value("irs_nz", cfg.irs_nz);
    cfg.phase_bits = j.value("phase_bits", cfg.phase_bits);
    if (j.contains("tx_power_dbm")) cfg.tx_power_w = dbm_to_watt(j["tx_power_dbm"].get<double>());
    if (j.contains("noise_dbm")) cfg.noise_w = dbm_to_watt(j["noise_dbm"].get<double>());
    cfg.nlos_paths = j.value("nlos_paths", cfg.nlos_paths);
    cfg.rician_bs_irs = j.value("rician_bs_irs", cfg.rician_bs_irs);
    cfg.rician_irs_user = j.value("rician_irs_user", cfg.rician_irs_user);
    if (j.contains("bs_pos_m")) cfg.bs_pos = parse_point(j["bs_pos_m"], "bs_pos_m");
    if (j.contains("irs_pos_m")) cfg.irs_pos = parse_point(j["irs_pos_m"], "irs_pos_m");
    if (j.contains("user_area_m")) cfg.user_area = parse_area(j["user_area_m"]);
    cfg.wavelength_m = j.value("wavelength_m", cfg.wavelength_m);
    cfg.validate();
    return cfg;
}

ScenarioConfig scenario_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("scenario: invalid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

double distance(const Point3& a, const Point3& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::vector<Point3> draw_user_positions(const ScenarioConfig& cfg, Rng& rng) {
    std::vector<Point3> pos(static_cast<std::size_t>(cfg.users));
    for (auto& p : pos) {
        p[0] = runif(rng, cfg.user_area.xmin, cfg.user_area.xmax);
        p[1] = runif(rng, cfg.user_area.ymin, cfg.user_area.ymax);
        p[2] = cfg.user_area.z;
    }
    return pos;
}

}  // namespace irspm
