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

// Small dense convex kernel:  minimize ||x||^2  subject to  A x >= b.

#include "ncprec/wlalg.hpp"

#include <vector>

namespace ncprec
{

struct QpProblem
{
    RMat a; // m x n
    RVec b; // m
};

struct QpSolution
{
    RVec x;
    double objective = 0.0;     // ||x||^2
    RVec duals;                 // multipliers of ||x||^2 (2x = A^T duals), >= 0
    std::vector<int> active_set;
    int iterations = 0;
};

struct QpOptions
{
    double feas_tol = 1e-10; // internal violation tolerance
    int max_iterations = 1000;
};

// Dual active-set (Goldfarb-Idnani) method specialised to the identity Hessian.
// Starting from the unconstrained minimiser x = 0, the most violated constraint
// (lowest index on ties) is added until all are satisfied. The result is the
// unique global optimum. Throws Infeasible or MaxIterations.
QpSolution solve_min_norm(const QpProblem &p, const QpOptions &opt = {});

struct MaximinSolution
{
    RVec x;
    double delta = 0.0; // achieved min_i a_i x
    double power = 0.0; // ||x||^2
};

// maximize delta s.t. a_i x >= delta for all rows, ||x||^2 <= p_t.
// Throws ZeroRow if any row is zero.
MaximinSolution solve_maximin(const RMat &a_rows, double p_t, const QpOptions &opt = {});

struct KktReport
{
    double primal_violation = 0.0;   // max(b - A x, 0)
    double dual_violation = 0.0;     // max(-duals, 0)
    double complementarity = 0.0;    // max |dual_i * slack_i|
    double stationarity = 0.0;       // max |2x - A^T duals|

    bool ok(double primal_tol = 1e-7, double comp_tol = 1e-6, double stat_tol = 1e-6) const
    {
        return primal_violation <= primal_tol && dual_violation <= 0.0 &&
               complementarity <= comp_tol && stationarity <= stat_tol;
    }
};

// Re-validates a solution from its (x, duals) only.
KktReport check_kkt(const QpProblem &p, const QpSolution &s);

} // namespace ncprec
