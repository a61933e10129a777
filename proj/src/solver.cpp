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

#include "ncprec/solver.hpp"

#include "ncprec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncprec
{
namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

struct StepDirections
{
    RVec z; // primal direction: component of n_plus orthogonal to the active normals
    RVec r; // dual direction: coefficients of n_plus on the active normals
};

StepDirections directions(const RMat &a, const std::vector<int> &act, const RVec &n_plus)
{
    const auto n = a.cols();
    const auto q = static_cast<Eigen::Index>(act.size());
    if (q == 0)
        return {n_plus, RVec(0)};

    RMat nmat(n, q);
    for (Eigen::Index j = 0; j < q; ++j)
        nmat.col(j) = a.row(act[j]).transpose();

    Eigen::HouseholderQR<RMat> qr(nmat);
    const RMat q1 = qr.householderQ() * RMat::Identity(n, q);
    const RMat r = qr.matrixQR().topLeftCorner(q, q).triangularView<Eigen::Upper>();
    const RVec proj = q1.transpose() * n_plus;

    StepDirections d;
    // With n independent active normals the step direction vanishes exactly.
    d.z = q == n ? RVec::Zero(n) : RVec(n_plus - q1 * proj);
    d.r = r.triangularView<Eigen::Upper>().solve(proj);
    return d;
}

} // namespace

QpSolution solve_min_norm(const QpProblem &p, const QpOptions &opt)
{
    const auto m = p.a.rows();
    const auto n = p.a.cols();
    if (m < 1 || n < 1 || p.b.size() != m)
        throw InvalidArgument("solve_min_norm: malformed problem");

    for (Eigen::Index i = 0; i < m; ++i)
        if (p.a.row(i).cwiseAbs().maxCoeff() == 0.0 && p.b(i) > 0.0)
            throw Infeasible("solve_min_norm: zero row with positive bound");

    RVec x = RVec::Zero(n);
    std::vector<int> act;
    std::vector<double> u; // multipliers of 0.5 ||x||^2, i.e. x = sum u_i a_i
    int iter = 0;

    auto tol_of = [&](Eigen::Index i) { return opt.feas_tol * std::max(1.0, std::abs(p.b(i))); };

    for (;;)
    {
        // Most violated inactive constraint, lowest index on ties.
        int pick = -1;
        double worst = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            if (std::find(act.begin(), act.end(), static_cast<int>(i)) != act.end())
                continue;
            const double s = p.a.row(i).dot(x) - p.b(i);
            if (s < -tol_of(i) && s < worst)
            {
                worst = s;
                pick = static_cast<int>(i);
            }
        }
        if (pick < 0)
            break;

        const RVec n_plus = p.a.row(pick).transpose();
        std::vector<double> u_plus = u;
        double u_new = 0.0;

        for (;;)
        {
            if (++iter > opt.max_iterations)
                throw MaxIterations("solve_min_norm: iteration limit reached");

            const StepDirections d = directions(p.a, act, n_plus);

            // Partial step: largest move before an active multiplier hits zero.
            double t1 = kInf;
            int drop = -1;
            for (std::size_t j = 0; j < act.size(); ++j)
            {
                const double rj = d.r(static_cast<Eigen::Index>(j));
                if (rj > 0.0)
                {
                    const double tj = u_plus[j] / rj;
                    if (tj < t1)
                    {
                        t1 = tj;
                        drop = static_cast<int>(j);
                    }
                }
            }

            // Full step: move until constraint `pick` holds with equality. A direction
            // below roundoff means n_plus is dependent on the active normals.
            const double zn = d.z.dot(n_plus);
            double t2 = kInf;
            if (zn > 1e-12 * n_plus.squaredNorm())
                t2 = (p.b(pick) - n_plus.dot(x)) / zn;

            const double t = std::min(t1, t2);
            if (t == kInf)
                throw Infeasible("solve_min_norm: constraints are inconsistent");

            for (std::size_t j = 0; j < act.size(); ++j)
                u_plus[j] -= t * d.r(static_cast<Eigen::Index>(j));
            u_new += t;

            if (t2 != kInf)
                x += t * d.z;

            if (t2 <= t1)
            {
                act.push_back(pick);
                u_plus.push_back(u_new);
                u = std::move(u_plus);
                break;
            }
            act.erase(act.begin() + drop);
            u_plus.erase(u_plus.begin() + drop);
        }
    }

    QpSolution sol;
    sol.x = x;
    sol.objective = x.squaredNorm();
    sol.duals = RVec::Zero(m);
    for (std::size_t j = 0; j < act.size(); ++j)
        sol.duals(act[j]) = 2.0 * std::max(u[j], 0.0);
    sol.active_set = act;
    std::sort(sol.active_set.begin(), sol.active_set.end());
    sol.iterations = iter;
    return sol;
}

MaximinSolution solve_maximin(const RMat &a_rows, double p_t, const QpOptions &opt)
{
    if (!(p_t > 0.0))
        throw InvalidArgument("solve_maximin: power budget must be positive");
    for (Eigen::Index i = 0; i < a_rows.rows(); ++i)
        if (a_rows.row(i).cwiseAbs().maxCoeff() == 0.0)
            throw ZeroRow("solve_maximin: zero constraint row");

    // The feasible set of {A x >= delta 1} scales with delta, so the min-norm point
    // is delta * x(1) and the power budget fixes delta directly.
    MaximinSolution out;
    QpSolution unit;
    try
    {
        unit = solve_min_norm({a_rows, RVec::Ones(a_rows.rows())}, opt);
    }
    catch (const Infeasible &)
    {
        // No direction improves every margin; the best achievable minimum is 0 at x = 0.
        out.x = RVec::Zero(a_rows.cols());
        return out;
    }
    const double scale = std::sqrt(p_t / unit.objective);
    out.x = scale * unit.x;
    out.power = out.x.squaredNorm();
    out.delta = (a_rows * out.x).minCoeff();
    return out;
}

KktReport check_kkt(const QpProblem &p, const QpSolution &s)
{
    KktReport r;
    const RVec slack = p.a * s.x - p.b;
    for (Eigen::Index i = 0; i < slack.size(); ++i)
    {
        r.primal_violation = std::max(r.primal_violation, -slack(i));
        r.dual_violation = std::max(r.dual_violation, -s.duals(i));
        r.complementarity = std::max(r.complementarity, std::abs(s.duals(i) * slack(i)));
    }
    r.stationarity = (2.0 * s.x - p.a.transpose() * s.duals).cwiseAbs().maxCoeff();
    return r;
}

} // namespace ncprec
