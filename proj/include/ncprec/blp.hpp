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

// Block-level MMSE precoding in the real-expanded (widely-linear) domain.
//
// Each user pre-whitens its received pair with W_k = G_k^{-1/2}; stacking the
// first whitened rows of all users followed by the second rows gives H_E
// (2K x 2M). The precoder maps the stacked symbol vector [Re s; Im s] to x.

#include "ncprec/wlalg.hpp"

#include <vector>

namespace ncprec
{

struct LinearPrecoder
{
    RMat p;                   // 2M x 2K
    double beta = 1.0;        // receive scaling
    double power_budget = 0.0;

    // Expected transmit power 0.5 tr(P P^T) for symbols with E{s s^T} = I/2.
    double expected_power() const { return 0.5 * p.squaredNorm(); }
};

using StackedWhitenedChannel = RMat;

// channels: K x M complex, row k is h_k.
StackedWhitenedChannel stack_whitened(const CMat &channels, const std::vector<SymMat2> &covs);

LinearPrecoder mmse_blp(const StackedWhitenedChannel &h_e, double p_t, int k);

// Pre-whitened MMSE precoder for the given per-user covariances.
LinearPrecoder pw_blp(const CMat &channels, const std::vector<SymMat2> &covs, double p_t);

// Worst-case design: G_k = (sigma_k^2 / 2) I with sigma_k^2 = jammer_power_k + awgn_var_k.
LinearPrecoder robust_blp(const CMat &channels, const std::vector<double> &awgn_vars,
                          const std::vector<double> &jammer_powers, double p_t);

// Jammer ignored: G_k = (awgn_var_k / 2) I.
LinearPrecoder naive_blp(const CMat &channels, const std::vector<double> &awgn_vars, double p_t);

// Optimal MSE of the pre-whitened design:
//   K - M + 0.5 tr{(I + (1/a) sum_k Hk^T G_k^{-1} Hk)^{-1}},   a = 2K / p_t.
double mse_closed_form(const CMat &channels, const std::vector<SymMat2> &covs, double p_t);

// Analytic MSE E||beta^{-1} y_E - s||^2 of a precoder designed for `design_covs`
// (receivers whiten with those covariances) when the actual effective noise has
// covariances `true_covs`.
double mse_mismatched(const CMat &channels, const std::vector<SymMat2> &design_covs,
                      const std::vector<SymMat2> &true_covs, double p_t);

struct StationarityResidual
{
    double lambda = 0.0;         // multiplier recovered by least squares from dL/dP = 0
    double p_residual = 0.0;     // max-abs entry of dL/dP at (P, beta, lambda)
    double beta_residual = 0.0;  // |dL/dbeta|, scaled by beta^3
};

StationarityResidual blp_stationarity(const StackedWhitenedChannel &h_e, const LinearPrecoder &pc);

} // namespace ncprec
