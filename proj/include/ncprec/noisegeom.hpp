// SPDX-License-Identifier: Apache-2.0
//
// ncprec - downlink precoding under improper Gaussian jamming
// Copyright (C) 2026 The ncprec authors
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
// ------------------------------------------------------------------------

#pragma once

// Jammer and effective-noise statistics.
//
// The effective noise at user k is c_k = h_{j,k} z + n_k. In real-expanded form
// its covariance is G_k = rho^2 Hj Q Hj^T + (awgn_var / 2) I, with
// tr(G_k) = rho^2 |h_{j,k}|^2 + awgn_var.

#include "ncprec/wlalg.hpp"

#include <random>

namespace ncprec
{

using Rng = std::mt19937_64;

struct JammerModel
{
    double rho = 0.0; // amplitude; rho^2 is the jammer transmit power
    SymMat2 q;        // unit-trace PSD covariance of the jamming signal
    Mat2 t_factor;    // T with T T^T = Q

    // Validates trace(Q) = 1 and Q PSD; derives T as the symmetric root.
    static JammerModel make(double rho, const SymMat2 &q);
};

struct ConfidenceEllipse
{
    Vec2 center = Vec2::Zero();
    double lambda1 = 0.0; // variance along the major axis
    double lambda2 = 0.0;
    double alpha = 0.0;   // major-axis angle in [0, pi)
    double omega = 0.0;   // chi-square(2) scale, -2 ln(1 - p)

    Vec2 major_axis() const;
    Vec2 minor_axis() const;
};

struct NoisePowers
{
    double awgn_var = 0.0;  // sigma_bar_k^2
    double total_var = 0.0; // sigma_k^2 = rho^2 |h_{j,k}|^2 + sigma_bar_k^2
};

NoisePowers noise_powers(cplx h_jk, double rho, double awgn_var);

// Q = [q11, q12; q12, 1 - q11]. Throws InfeasibleQ outside (q11-1/2)^2 + q12^2 <= 1/4.
SymMat2 q_from_elements(double q11, double q12);

// Rank-one Q = v v^T with v = (cos phi, sin phi).
SymMat2 q_rank_one(double phi);

Mat2 t_from_q(const SymMat2 &q);

SymMat2 effective_cov(cplx h_jk, const JammerModel &jam, double awgn_var);

// Covariance in the symbol-aligned frame: S^T G S.
SymMat2 rotated_cov(const SymMat2 &g, cplx s);

double omega_from_confidence(double p);

ConfidenceEllipse ellipse_from_cov(const SymMat2 &g_check, double p, const Vec2 &center = Vec2::Zero());

// One draw of the real-expanded effective noise [Re c_k; Im c_k].
Vec2 sample_noise(Rng &rng, cplx h_jk, const JammerModel &jam, double awgn_var);

} // namespace ncprec
