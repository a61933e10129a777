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

// Brute-force reference computations. They share no code paths with the
// production kernels beyond basic matrix types, and are used to cross-check them.

#include "ncprec/noisegeom.hpp"
#include "ncprec/solver.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace ncprec::oracle
{

// Exact minimum-norm point of {x : A x >= b} by enumerating every subset of
// linearly independent active constraints. Returns nullopt iff infeasible.
// Exponential in the number of rows; intended for m <= 10.
std::optional<RVec> enumerate_min_norm(const QpProblem &p, double tol = 1e-9);

// Random feasible instance: x0 ~ N(0, I), b = A x0 - slack with some slacks zero.
QpProblem random_feasible_qp(Rng &rng, int n, int m);

// max over sampled boundary points of n . (point - centre), with n a unit direction.
double sampled_support(const ConfidenceEllipse &el, const Vec2 &direction, int samples);

// Upper and lower boundary extents of the ellipse toward the decision lines of
// half-angle theta, measured by dense boundary sampling.
struct SampledMargins
{
    double upper = 0.0;
    double lower = 0.0;
};
SampledMargins sampled_margins(const ConfidenceEllipse &el, double theta, int samples);

// |sin| of the angle between the ellipse tangent at offset t and the line of
// slope tan(slope_angle), plus the level-set residual |t^T G^-1 t / omega - 1|.
struct TangentCheck
{
    double slope = 0.0;
    double level = 0.0;
};
TangentCheck tangent_residual(const ConfidenceEllipse &el, const Vec2 &t, double slope_angle);

// Sample covariance (about zero) of n draws.
Mat2 sample_covariance(const std::function<Vec2()> &draw, long n);

// max over a fine angular grid of min_i a_i x on the circle ||x||^2 = p_t; 2-column rows only.
double maximin_angle_scan(const RMat &a_rows, double p_t, int samples);

// Runs a named suite ("qp", "ellipse", "covariance" or "all") and prints one line per check.
// Returns true iff every check passed. Throws InvalidArgument for an unknown suite.
bool run_suite(const std::string &name, std::ostream &out);

} // namespace ncprec::oracle
