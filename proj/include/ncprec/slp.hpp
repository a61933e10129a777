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

// Symbol-level precoding for D-PSK under (possibly improper) effective noise.
//
// All designs work in the frame rotated by the conjugate of the intended symbol,
// where the correct decision sector is the wedge |arg y| < theta, theta = pi / D.
// For a user with real 2 x 2M block B the rotated rows are
//     H1 = first row of S^T B,  H2 = second row of S^T B,
// and the two boundary-distance rows are
//     A- = H1 sin(theta) - H2 cos(theta)   (upper boundary)
//     A+ = H1 sin(theta) + H2 cos(theta)   (lower boundary).

#include "ncprec/noisegeom.hpp"
#include "ncprec/solver.hpp"

#include <array>
#include <vector>

namespace ncprec
{

struct MarginRows
{
    RRow a_minus;
    RRow a_plus;
};

struct MarginTargets
{
    std::vector<double> delta_u0;
    std::vector<double> delta_l0;

    static MarginTargets uniform(std::size_t k, double delta) { return {std::vector<double>(k, delta), std::vector<double>(k, delta)}; }
};

enum class SlpStatus
{
    solved,
    infeasible
};

struct SlpSolution
{
    RVec x;                // real-expanded transmit vector, length 2M
    double power = 0.0;    // ||x||^2
    double delta = 0.0;    // achieved common margin (max-min designs only)
    RVec achieved_margins; // slack A x - b of every constraint
    SlpStatus status = SlpStatus::solved;
    QpProblem problem;     // the QP actually solved
    RVec duals;

    CVec transmit() const { return collapse_vec(x); }
};

struct EllipseMargins
{
    double upper = 0.0; // |delta_u|
    double lower = 0.0; // |delta_l|
};

// Offsets from the ellipse centre of the bounding-box tangency points. The upper
// pair has tangent slope tan(theta), the lower pair -tan(theta). For a degenerate
// ellipse (lambda2 == 0) both pairs are the segment endpoints.
struct TangentPoints
{
    std::array<Vec2, 2> upper;
    std::array<Vec2, 2> lower;
    bool degenerate = false;
};

struct PTerms
{
    double u1, u2, l1, l2;
};

enum class RobustMode
{
    per_direction, // one QP per direction, keep the largest-power solution
    conservative // single QP with the elementwise-max bounds of all directions
};

MarginRows margin_rows_block(const RMat &block, cplx s, double theta);
MarginRows margin_rows(const CRow &h, cplx s, double theta);

// gamma G^{-1/2} Hk with gamma = sigma_k / sqrt(2): whitened noise becomes (sigma_k^2 / 2) I.
RMat whitened_effective_channel(const CRow &h, const SymMat2 &g, double sigma_k);

double safety_margin(cplx s, const CRow &h_e, const CVec &x, double theta);

// Safety margin of a real 2 x 2M effective block, which need not be a complex row.
double safety_margin_block(cplx s, const RMat &block, const RVec &x, double theta);

SlpSolution pw_slp_minpower(const std::vector<RMat> &eff_blocks, const CVec &s,
                            const std::vector<double> &targets, double theta);

SlpSolution pw_slp_msm(const std::vector<RMat> &eff_blocks, const CVec &s, double p_t, double theta);

EllipseMargins ellipse_margins(const ConfidenceEllipse &el, double theta);

TangentPoints tangent_points(const ConfidenceEllipse &el, double theta);

// Transmit-only design for known effective covariances G_k (one per user).
SlpSolution nc_slp_from_covs(const CMat &channels, const std::vector<SymMat2> &covs, const CVec &s,
                             const MarginTargets &targets, double p, double theta);

SlpSolution nc_slp(const CMat &channels, const CVec &h_j, const JammerModel &jam,
                   const std::vector<double> &awgn_vars, const CVec &s, const MarginTargets &targets,
                   double p, double theta);

// Circular stand-in with the same total power: G_k = (sigma_k^2 / 2) I.
SlpSolution naive_slp(const CMat &channels, const std::vector<double> &jammer_powers,
                      const std::vector<double> &awgn_vars, const CVec &s, const MarginTargets &targets,
                      double p, double theta);

PTerms worst_case_pterms(double alpha_check, double theta, double jammer_power, double awgn_var);

// Worst case over rank-one Q = v v^T, v = (cos phi, sin phi), sampled at phi = n pi / n_div.
// The rotated major axis of user k sits at phi + arg h_{j,k} - arg s_k.
SlpSolution robust_slp(const CMat &channels, const CVec &h_j, double rho2,
                       const std::vector<double> &awgn_vars, const CVec &s, const MarginTargets &targets,
                       double p, double theta, int n_div, RobustMode mode = RobustMode::per_direction);

} // namespace ncprec
