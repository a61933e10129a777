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

// Widely-linear algebra kernel.
//
// Complex quantities are carried in their real-expanded form: a complex
// vector a of length q becomes the real vector [Re a; Im a] of length 2q,
// and a complex row b of length t becomes the 2 x 2t block
//
//     [ Re b  -Im b ]
//     [ Im b   Re b ]
//
// so that expand_row(b) * expand_vec(x) == [Re(b x); Im(b x)].

#include <complex>
#include <Eigen/Dense>

namespace ncprec
{

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RRow = Eigen::RowVectorXd;
using RMat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Real 2q-vector: first q entries real parts, last q imaginary parts.
using RealVec2N = RVec;

// Real 2 x 2t block form of a complex 1 x t row.
using RealExpandedChannel = RMat;

// 2x2 real symmetric matrix stored by its three free entries.
struct SymMat2
{
    double m11 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;

    static SymMat2 from_matrix(const Mat2 &m); // symmetrises (m + m^T)/2
    static SymMat2 identity(double scale = 1.0) { return {scale, 0.0, scale}; }

    Mat2 matrix() const;
    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m12; }
};

struct Eig2
{
    double lambda1; // largest eigenvalue
    double lambda2;
    Vec2 v;         // unit eigenvector of lambda1, first nonzero component > 0
};

RealVec2N expand_vec(const CVec &v);
CVec collapse_vec(const RealVec2N &v);

RealExpandedChannel expand_row(const CRow &h);

// The orientation rotation [cos a, sin a; -sin a, cos a]. Note that this rotates
// vectors by -a in the usual counter-clockwise convention.
Mat2 rotation2(double angle);

// Closed-form eigendecomposition of a symmetric 2x2 matrix. A repeated eigenvalue
// yields v = (1, 0).
Eig2 eig2_sym(const SymMat2 &g);

// Symmetric principal inverse square root W = g^{-1/2}, i.e. W g W^T = I.
// Throws NotPositiveDefinite unless both eigenvalues are strictly positive.
Mat2 sqrt_inv_psd2(const SymMat2 &g);

// Symmetric PSD square root T with T T^T = g; negative round-off eigenvalues clip to 0.
Mat2 sqrt_psd2(const SymMat2 &g);

// 2x2 block of a unit-modulus symbol, [Re s, -Im s; Im s, Re s].
Mat2 symbol_rotation(cplx s);

// Angle of v in [0, pi).
double axis_angle(const Vec2 &v);

} // namespace ncprec
