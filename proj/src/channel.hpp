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

#ifndef IRSPM_CHANNEL_HPP
#define IRSPM_CHANNEL_HPP

#include <Eigen/Dense>

#include <vector>

#include "reflection.hpp"
#include "scenario.hpp"

namespace irspm {

using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

/// Response of the N_y x N_z half-wavelength planar array for azimuth theta
/// and elevation phi, both in [0, pi]: e(sin(theta)sin(phi), N_y) (x)
/// e(cos(theta), N_z) with e(g, n)_m = exp(-j*pi*g*(m-1)).
VecC steering_vector(double theta, double phi, int ny, int nz);

/// Same response parameterized by the y/z direction cosines of the
/// propagation direction; used for geometry-derived line-of-sight paths,
/// which may fall outside the [0, pi]^2 angle box.
VecC steering_from_cosines(double cos_y, double cos_z, int ny, int nz);

/// All channels of one fading block. Effective vectors fold in sqrt(P):
/// h_k = sqrt(P) * [h_BU_k; conj(h_IU_k) .* h_BI].
struct ChannelRealization {
    int elements = 0;                 // N
    double sigma2_w = 0.0;            // receiver noise power
    VecC h_bi;                        // BS -> IRS, length N
    std::vector<cxd> h_bu;            // BS -> user, one scalar per user
    std::vector<VecC> h_iu;           // IRS -> user, length N each
    std::vector<VecC> h_cascaded;     // diag(h_IU^H) * h_BI, length N each
    std::vector<VecC> h_eff;          // length N+1 each, sqrt(P) folded in

    int users() const { return static_cast<int>(h_eff.size()); }

    /// Rank-one covariance h_k h_k^H, materialized on demand.
    MatC covariance(int k) const;
};

ChannelRealization gen_channels(const ScenarioConfig& cfg, const std::vector<Point3>& user_pos,
                                Rng& rng);

/// g_k = v^H h_k for the extended reflection vector.
cxd effective_gain(const ReflectionSet& v, const ChannelRealization& real, int k);

/// |v^H h_k|^2 / sigma^2.
double snr(const ReflectionSet& v, const ChannelRealization& real, int k);

}  // namespace irspm

#endif
