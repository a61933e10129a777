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

#include "ncprec/wlalg.hpp"

#include "ncprec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ncprec
{

SymMat2 SymMat2::from_matrix(const Mat2 &m)
{
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
}

Mat2 SymMat2::matrix() const
{
    Mat2 m;
    m << m11, m12, m12, m22;
    return m;
}

RealVec2N expand_vec(const CVec &v)
{
    const auto q = v.size();
    RealVec2N out(2 * q);
    out.head(q) = v.real();
    out.tail(q) = v.imag();
    return out;
}

CVec collapse_vec(const RealVec2N &v)
{
    if (v.size() % 2 != 0)
        throw InvalidArgument("collapse_vec: odd length");
    const auto q = v.size() / 2;
    CVec out(q);
    out.real() = v.head(q);
    out.imag() = v.tail(q);
    return out;
}

RealExpandedChannel expand_row(const CRow &h)
{
    const auto t = h.size();
    RealExpandedChannel b(2, 2 * t);
    b.row(0) << h.real(), -h.imag();
    b.row(1) << h.imag(), h.real();
    return b;
}

Mat2 rotation2(double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    Mat2 r;
    r << c, s, -s, c;
    return r;
}

Eig2 eig2_sym(const SymMat2 &g)
{
    const double mean = 0.5 * (g.m11 + g.m22);
    const double half = 0.5 * (g.m11 - g.m22);
    const double r = std::hypot(half, g.m12);

    const double scale = std::max({std::abs(g.m11), std::abs(g.m22), std::abs(g.m12)});
    Eig2 e{mean + r, mean - r, Vec2(1.0, 0.0)};
    if (r <= 4.0 * std::numeric_limits<double>::epsilon() * scale)
    {
        // Circle: orientation is arbitrary, pin it to the first axis.
        e.lambda1 = e.lambda2 = mean;
        return e;
    }

    // Pick the better-conditioned of the two null-space candidates of (g - lambda1 I).
    Vec2 v = half >= 0.0 ? Vec2(half + r, g.m12) : Vec2(g.m12, r - half);
    v.normalize();
    if (v(0) < 0.0 || (v(0) == 0.0 && v(1) < 0.0))
        v = -v;
    e.v = v;
    return e;
}

Mat2 sqrt_inv_psd2(const SymMat2 &g)
{
    const Eig2 e = eig2_sym(g);
    if (!(e.lambda2 > 0.0))
        throw NotPositiveDefinite("sqrt_inv_psd2: matrix is not positive definite");
    const Vec2 &v1 = e.v;
    const Vec2 v2(-v1(1), v1(0));
    return v1 * v1.transpose() / std::sqrt(e.lambda1) + v2 * v2.transpose() / std::sqrt(e.lambda2);
}

Mat2 sqrt_psd2(const SymMat2 &g)
{
    const Eig2 e = eig2_sym(g);
    const Vec2 &v1 = e.v;
    const Vec2 v2(-v1(1), v1(0));
    return v1 * v1.transpose() * std::sqrt(std::max(e.lambda1, 0.0)) +
           v2 * v2.transpose() * std::sqrt(std::max(e.lambda2, 0.0));
}

Mat2 symbol_rotation(cplx s)
{
    Mat2 m;
    m << s.real(), -s.imag(), s.imag(), s.real();
    return m;
}

double axis_angle(const Vec2 &v)
{
    double a = std::atan2(v(1), v(0));
    if (a < 0.0)
        a += std::numbers::pi;
    if (a >= std::numbers::pi)
        a -= std::numbers::pi;
    return a;
}

} // namespace ncprec
