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

#include "channel.hpp"

#include <cmath>

namespace irspm {

VecC steering_from_cosines(double cos_y, double cos_z, int ny, int nz) {
    VecC u(static_cast<Eigen::Index>(ny) * nz);
    for (int iy = 0; iy < ny; ++iy) {
        for (int iz = 0; iz < nz; ++iz) {
            const double phase = -kPi * (cos_y * iy + cos_z * iz);
            u[static_cast<Eigen::Index>(iy) * nz + iz] = cxd{std::cos(phase), std::sin(phase)};
        }
    }
    return u;
}

VecC steering_vector(double theta, double phi, int ny, int nz) {
    return steering_from_cosines(std::sin(theta) * std::sin(phi), std::cos(theta), ny, nz);
}

namespace {

/// Unit direction from `from` toward `to`; throws on zero distance.
struct Direction {
    double cos_y;
    double cos_z;
    double dist;
};

Direction direction_between(const Point3& from, const Point3& to) {
    const double d = distance(from, to);
    if (!(d > 0.0)) throw std::invalid_argument("gen_channels: coincident positions");
    return {(to[1] - from[1]) / d, (to[2] - from[2]) / d, d};
}

/// Rician multipath vector toward/from the IRS: deterministic LoS ray plus L
/// random scatter rays with angles uniform on [0, pi]^2.
VecC rician_channel(const ScenarioConfig& cfg, const Direction& los, double pathloss_db,
                    double rician, Rng& rng) {
    const double amp = std::pow(10.0, -pathloss_db / 20.0);
    const double los_phase = -kTwoPi * los.dist / cfg.wavelength_m;
    const cxd los_coef = amp * cxd{std::cos(los_phase), std::sin(los_phase)};
    VecC h = los_coef * steering_from_cosines(los.cos_y, los.cos_z, cfg.irs_ny, cfg.irs_nz);

    VecC nlos = VecC::Zero(h.size());
    for (int l = 0; l < cfg.nlos_paths; ++l) {
        const double theta = runif(rng, 0.0, kPi);
        const double phi = runif(rng, 0.0, kPi);
        const cxd kappa = amp * crandn(rng);  // CN(0, 10^(-beta/10))
        nlos += kappa * steering_vector(theta, phi, cfg.irs_ny, cfg.irs_nz);
    }
    nlos *= std::sqrt(1.0 / cfg.nlos_paths);

    return std::sqrt(rician / (1.0 + rician)) * h + std::sqrt(1.0 / (1.0 + rician)) * nlos;
}

}  // namespace

ChannelRealization gen_channels(const ScenarioConfig& cfg, const std::vector<Point3>& user_pos,
                                Rng& rng) {
    cfg.validate();
    if (static_cast<int>(user_pos.size()) != cfg.users)
        throw std::invalid_argument("gen_channels: user position count != configured users");

    const int n = cfg.elements();
    ChannelRealization real;
    real.elements = n;
    real.sigma2_w = cfg.noise_w;

    const Direction bs_dir = direction_between(cfg.irs_pos, cfg.bs_pos);
    real.h_bi = rician_channel(cfg, bs_dir, pathloss_bs_irs_db(bs_dir.dist), cfg.rician_bs_irs, rng);

    const double sqrt_p = std::sqrt(cfg.tx_power_w);
    real.h_bu.reserve(user_pos.size());
    real.h_iu.reserve(user_pos.size());
    real.h_cascaded.reserve(user_pos.size());
    real.h_eff.reserve(user_pos.size());
    for (const Point3& pos : user_pos) {
        const double d_bu = distance(cfg.bs_pos, pos);
        if (!(d_bu > 0.0)) throw std::invalid_argument("gen_channels: user at BS position");
        const double amp_bu = std::pow(10.0, -pathloss_bs_user_db(d_bu) / 20.0);
        const cxd h_bu = amp_bu * crandn(rng);

        const Direction user_dir = direction_between(cfg.irs_pos, pos);
        const VecC h_iu =
            rician_channel(cfg, user_dir, pathloss_irs_user_db(user_dir.dist), cfg.rician_irs_user, rng);

        VecC cascaded(n);
        for (int i = 0; i < n; ++i) cascaded[i] = std::conj(h_iu[i]) * real.h_bi[i];

        VecC h_eff(n + 1);
        h_eff[0] = sqrt_p * h_bu;
        h_eff.tail(n) = sqrt_p * cascaded;

        real.h_bu.push_back(h_bu);
        real.h_iu.push_back(h_iu);
        real.h_cascaded.push_back(std::move(cascaded));
        real.h_eff.push_back(std::move(h_eff));
    }
    return real;
}

MatC ChannelRealization::covariance(int k) const {
    const VecC& h = h_eff.at(static_cast<std::size_t>(k));
    return h * h.adjoint();
}

cxd effective_gain(const ReflectionSet& v, const ChannelRealization& real, int k) {
    const VecC& h = real.h_eff.at(static_cast<std::size_t>(k));
    if (v.elements() != real.elements)
        throw std::invalid_argument("effective_gain: reflection size != element count");
    cxd g = h[0];  // leading entry of v^H is the fixed 1
    for (int i = 1; i <= real.elements; ++i) g += v.vh_entry(i) * h[i];
    return g;
}

double snr(const ReflectionSet& v, const ChannelRealization& real, int k) {
    const cxd g = effective_gain(v, real, k);
    return std::norm(g) / real.sigma2_w;
}

}  // namespace irspm
