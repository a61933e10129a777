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

#include "ncprec/noisegeom.hpp"

#include "ncprec/errors.hpp"

#include <cmath>

namespace ncprec
{

JammerModel JammerModel::make(double rho, const SymMat2 &q)
{
    if (!(rho >= 0.0))
        throw InvalidArgument("jammer amplitude must be non-negative");
    if (std::abs(q.trace() - 1.0) > 1e-12)
        throw InfeasibleQ("jammer covariance must have unit trace");
    if (eig2_sym(q).lambda2 < -1e-12)
        throw InfeasibleQ("jammer covariance must be positive semidefinite");
    return {rho, q, t_from_q(q)};
}

Vec2 ConfidenceEllipse::major_axis() const
{
    return {std::cos(alpha), std::sin(alpha)};
}

Vec2 ConfidenceEllipse::minor_axis() const
{
    return {-std::sin(alpha), std::cos(alpha)};
}

NoisePowers noise_powers(cplx h_jk, double rho, double awgn_var)
{
    return {awgn_var, rho * rho * std::norm(h_jk) + awgn_var};
}

SymMat2 q_from_elements(double q11, double q12)
{
    const double r2 = (q11 - 0.5) * (q11 - 0.5) + q12 * q12;
    if (!(r2 <= 0.25 + 1e-12))
        throw InfeasibleQ("(q11, q12) outside the unit-trace PSD disk");
    return {q11, q12, 1.0 - q11};
}

SymMat2 q_rank_one(double phi)
{
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * c, c * s, 1.0 - c * c};
}

Mat2 t_from_q(const SymMat2 &q)
{
    return sqrt_psd2(q);
}

SymMat2 effective_cov(cplx h_jk, const JammerModel &jam, double awgn_var)
{
    const Mat2 hj = symbol_rotation(h_jk);
    const Mat2 g = jam.rho * jam.rho * hj * jam.q.matrix() * hj.transpose() +
                   0.5 * awgn_var * Mat2::Identity();
    return SymMat2::from_matrix(g);
}

SymMat2 rotated_cov(const SymMat2 &g, cplx s)
{
    const Mat2 sb = symbol_rotation(s);
    return SymMat2::from_matrix(sb.transpose() * g.matrix() * sb);
}

double omega_from_confidence(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw InvalidConfidence("confidence must lie in (0, 1)");
    return -2.0 * std::log1p(-p);
}

ConfidenceEllipse ellipse_from_cov(const SymMat2 &g_check, double p, const Vec2 &center)
{
    const Eig2 e = eig2_sym(g_check);
    ConfidenceEllipse el;
    el.center = center;
    el.lambda1 = e.lambda1;
    el.lambda2 = std::max(e.lambda2, 0.0);
    el.alpha = axis_angle(e.v);
    el.omega = omega_from_confidence(p);
    return el;
}

Vec2 sample_noise(Rng &rng, cplx h_jk, const JammerModel &jam, double awgn_var)
{
    std::normal_distribution<double> n01(0.0, 1.0);
    // Draws are sequenced explicitly; argument evaluation order is unspecified.
    Vec2 v, n;
    v(0) = n01(rng);
    v(1) = n01(rng);
    const double sd = std::sqrt(0.5 * awgn_var);
    n(0) = sd * n01(rng);
    n(1) = sd * n01(rng);
    return jam.rho * symbol_rotation(h_jk) * jam.t_factor * v + n;
}

} // namespace ncprec
