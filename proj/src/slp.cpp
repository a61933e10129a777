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

#include "ncprec/slp.hpp"

#include "ncprec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncprec
{
namespace
{

void check_users(std::size_t k, std::size_t n, const char *what)
{
    if (k != n)
        throw InvalidArgument(std::string(what) + ": one entry per user required");
}

SlpSolution solve_rows(QpProblem problem)
{
    for (Eigen::Index i = 0; i < problem.a.rows(); ++i)
        if (problem.a.row(i).cwiseAbs().maxCoeff() == 0.0 && problem.b(i) > 0.0)
            throw ZeroRow("SLP constraint row is zero (null channel)");

    SlpSolution out;
    try
    {
        const QpSolution qp = solve_min_norm(problem);
        out.x = qp.x;
        out.power = qp.objective;
        out.duals = qp.duals;
        out.achieved_margins = problem.a * qp.x - problem.b;
    }
    catch (const Infeasible &)
    {
        out.status = SlpStatus::infeasible;
        out.x = RVec::Zero(problem.a.cols());
        out.duals = RVec::Zero(problem.a.rows());
        out.achieved_margins = -problem.b;
    }
    out.problem = std::move(problem);
    return out;
}

// Tangency offsets (-u, v) and (u, -v) for tangent slope tan(t).
std::array<Vec2, 2> tangent_pair(const ConfidenceEllipse &el, double t)
{
    const double a = el.alpha, l1 = el.lambda1, l2 = el.lambda2, w = el.omega;
    const double c = std::cos(a - t);
    if (std::abs(c) < 1e-9)
    {
        // Major axis perpendicular to the boundary direction: endpoints of the major axis.
        const Vec2 e = std::sqrt(w * l1) * el.major_axis();
        return {e, -e};
    }
    const double kappa = std::sin(a - t) / c;
    const double d = 1.0 / l1 + kappa * kappa / l2;
    const double e = std::sqrt(l2 * w / (l1 * d));
    const double f = l2 * std::cos(a) + l1 * kappa * std::sin(a);
    const double g = l2 * std::sin(a) - l1 * kappa * std::cos(a);
    const double u = g * e / l2, v = f * e / l2;
    return {Vec2(-u, v), Vec2(u, -v)};
}

} // namespace

MarginRows margin_rows_block(const RMat &block, cplx s, double theta)
{
    if (block.rows() != 2)
        throw InvalidArgument("margin_rows_block: block must have two rows");
    const RMat rot = symbol_rotation(s).transpose() * block;
    const double st = std::sin(theta), ct = std::cos(theta);
    return {rot.row(0) * st - rot.row(1) * ct, rot.row(0) * st + rot.row(1) * ct};
}

MarginRows margin_rows(const CRow &h, cplx s, double theta)
{
    return margin_rows_block(expand_row(h), s, theta);
}

RMat whitened_effective_channel(const CRow &h, const SymMat2 &g, double sigma_k)
{
    return (sigma_k / std::numbers::sqrt2) * sqrt_inv_psd2(g) * expand_row(h);
}

double safety_margin(cplx s, const CRow &h_e, const CVec &x, double theta)
{
    const cplx w = std::conj(s) * (h_e * x)(0);
    return w.real() * std::sin(theta) - std::abs(w.imag()) * std::cos(theta);
}

double safety_margin_block(cplx s, const RMat &block, const RVec &x, double theta)
{
    const RVec y = block * x;
    const cplx w = std::conj(s) * cplx(y(0), y(1));
    return w.real() * std::sin(theta) - std::abs(w.imag()) * std::cos(theta);
}

SlpSolution pw_slp_minpower(const std::vector<RMat> &eff_blocks, const CVec &s,
                            const std::vector<double> &targets, double theta)
{
    const std::size_t k = eff_blocks.size();
    check_users(k, static_cast<std::size_t>(s.size()), "pw_slp_minpower");
    check_users(k, targets.size(), "pw_slp_minpower");
    if (k == 0)
        throw InvalidArgument("pw_slp_minpower: no users");

    QpProblem qp{RMat(2 * k, eff_blocks[0].cols()), RVec(2 * k)};
    for (std::size_t u = 0; u < k; ++u)
    {
        if (targets[u] < 0.0)
            throw InvalidArgument("pw_slp_minpower: negative margin target");
        const MarginRows r = margin_rows_block(eff_blocks[u], s(u), theta);
        qp.a.row(2 * u) = r.a_minus;
        qp.a.row(2 * u + 1) = r.a_plus;
        qp.b(2 * u) = qp.b(2 * u + 1) = targets[u];
    }
    return solve_rows(std::move(qp));
}

SlpSolution pw_slp_msm(const std::vector<RMat> &eff_blocks, const CVec &s, double p_t, double theta)
{
    const std::size_t k = eff_blocks.size();
    check_users(k, static_cast<std::size_t>(s.size()), "pw_slp_msm");
    if (k == 0)
        throw InvalidArgument("pw_slp_msm: no users");

    RMat a(2 * k, eff_blocks[0].cols());
    for (std::size_t u = 0; u < k; ++u)
    {
        const MarginRows r = margin_rows_block(eff_blocks[u], s(u), theta);
        a.row(2 * u) = r.a_minus;
        a.row(2 * u + 1) = r.a_plus;
    }
    const MaximinSolution mm = solve_maximin(a, p_t);

    SlpSolution out;
    out.x = mm.x;
    out.power = mm.power;
    out.delta = mm.delta;
    out.problem = {a, RVec::Constant(a.rows(), mm.delta)};
    out.achieved_margins = a * mm.x - out.problem.b;
    out.duals = RVec::Zero(a.rows());
    return out;
}

EllipseMargins ellipse_margins(const ConfidenceEllipse &el, double theta)
{
    auto support = [&](double ang) {
        const double sn = std::sin(ang), cs = std::cos(ang);
        return std::sqrt(el.omega) * std::sqrt(el.lambda1 * sn * sn + el.lambda2 * cs * cs);
    };
    return {support(el.alpha - theta), support(el.alpha + theta)};
}

TangentPoints tangent_points(const ConfidenceEllipse &el, double theta)
{
    TangentPoints tp;
    if (el.lambda2 <= 0.0)
    {
        const Vec2 e = std::sqrt(el.omega * el.lambda1) * el.major_axis();
        tp.upper = tp.lower = {e, -e};
        tp.degenerate = true;
        return tp;
    }
    tp.upper = tangent_pair(el, theta);
    tp.lower = tangent_pair(el, -theta);
    return tp;
}

SlpSolution nc_slp_from_covs(const CMat &channels, const std::vector<SymMat2> &covs, const CVec &s,
                             const MarginTargets &targets, double p, double theta)
{
    const auto k = static_cast<std::size_t>(channels.rows());
    check_users(k, covs.size(), "nc_slp");
    check_users(k, static_cast<std::size_t>(s.size()), "nc_slp");
    check_users(k, targets.delta_u0.size(), "nc_slp");
    check_users(k, targets.delta_l0.size(), "nc_slp");

    const double ct = std::cos(theta);
    QpProblem qp{RMat(2 * k, 2 * channels.cols()), RVec(2 * k)};
    for (std::size_t u = 0; u < k; ++u)
    {
        const MarginRows r = margin_rows(channels.row(u), s(u), theta);
        const ConfidenceEllipse el = ellipse_from_cov(rotated_cov(covs[u], s(u)), p);
        const EllipseMargins em = ellipse_margins(el, theta);
        qp.a.row(2 * u) = r.a_minus;
        qp.a.row(2 * u + 1) = r.a_plus;
        qp.b(2 * u) = targets.delta_u0[u] * ct + em.upper;
        qp.b(2 * u + 1) = targets.delta_l0[u] * ct + em.lower;
    }
    return solve_rows(std::move(qp));
}

SlpSolution nc_slp(const CMat &channels, const CVec &h_j, const JammerModel &jam,
                   const std::vector<double> &awgn_vars, const CVec &s, const MarginTargets &targets,
                   double p, double theta)
{
    const auto k = static_cast<std::size_t>(channels.rows());
    check_users(k, static_cast<std::size_t>(h_j.size()), "nc_slp");
    check_users(k, awgn_vars.size(), "nc_slp");
    std::vector<SymMat2> covs(k);
    for (std::size_t u = 0; u < k; ++u)
        covs[u] = effective_cov(h_j(u), jam, awgn_vars[u]);
    return nc_slp_from_covs(channels, covs, s, targets, p, theta);
}

SlpSolution naive_slp(const CMat &channels, const std::vector<double> &jammer_powers,
                      const std::vector<double> &awgn_vars, const CVec &s, const MarginTargets &targets,
                      double p, double theta)
{
    const auto k = static_cast<std::size_t>(channels.rows());
    check_users(k, jammer_powers.size(), "naive_slp");
    check_users(k, awgn_vars.size(), "naive_slp");
    std::vector<SymMat2> covs(k);
    for (std::size_t u = 0; u < k; ++u)
        covs[u] = SymMat2::identity(0.5 * (jammer_powers[u] + awgn_vars[u]));
    return nc_slp_from_covs(channels, covs, s, targets, p, theta);
}

PTerms worst_case_pterms(double alpha_check, double theta, double jammer_power, double awgn_var)
{
    const double su = std::sin(alpha_check - theta), cu = std::cos(alpha_check - theta);
    const double sl = std::sin(alpha_check + theta), cl = std::cos(alpha_check + theta);
    const double floor = 0.5 * awgn_var;
    return {jammer_power * su * su + floor, jammer_power * cu * cu + floor,
            jammer_power * sl * sl + floor, jammer_power * cl * cl + floor};
}

SlpSolution robust_slp(const CMat &channels, const CVec &h_j, double rho2,
                       const std::vector<double> &awgn_vars, const CVec &s, const MarginTargets &targets,
                       double p, double theta, int n_div, RobustMode mode)
{
    const auto k = static_cast<std::size_t>(channels.rows());
    check_users(k, static_cast<std::size_t>(h_j.size()), "robust_slp");
    check_users(k, awgn_vars.size(), "robust_slp");
    check_users(k, static_cast<std::size_t>(s.size()), "robust_slp");
    check_users(k, targets.delta_u0.size(), "robust_slp");
    check_users(k, targets.delta_l0.size(), "robust_slp");
    if (n_div < 1)
        throw InvalidArgument("robust_slp: n_div must be at least 1");

    const double ct = std::cos(theta);
    const double sqrt_omega = std::sqrt(omega_from_confidence(p));

    RMat a(4 * k, 2 * channels.cols());
    for (std::size_t u = 0; u < k; ++u)
    {
        const MarginRows r = margin_rows(channels.row(u), s(u), theta);
        a.row(4 * u) = a.row(4 * u + 1) = r.a_minus;
        a.row(4 * u + 2) = a.row(4 * u + 3) = r.a_plus;
    }

    auto bounds_for = [&](int n) {
        const double phi = n * std::numbers::pi / n_div;
        RVec b(4 * k);
        for (std::size_t u = 0; u < k; ++u)
        {
            const double alpha = phi + std::arg(h_j(u)) - std::arg(s(u));
            const PTerms pt = worst_case_pterms(alpha, theta, rho2 * std::norm(h_j(u)), awgn_vars[u]);
            const double bu = targets.delta_u0[u] * ct, bl = targets.delta_l0[u] * ct;
            b(4 * u) = bu + sqrt_omega * std::sqrt(pt.u1);
            b(4 * u + 1) = bu + sqrt_omega * std::sqrt(pt.u2);
            b(4 * u + 2) = bl + sqrt_omega * std::sqrt(pt.l1);
            b(4 * u + 3) = bl + sqrt_omega * std::sqrt(pt.l2);
        }
        return b;
    };

    if (mode == RobustMode::conservative)
    {
        RVec b = bounds_for(1);
        for (int n = 2; n <= n_div; ++n)
            b = b.cwiseMax(bounds_for(n));
        return solve_rows({a, b});
    }

    SlpSolution best;
    bool have = false;
    for (int n = 1; n <= n_div; ++n)
    {
        SlpSolution cand = solve_rows({a, bounds_for(n)});
        // An infeasible direction dominates: no finite power satisfies it.
        if (cand.status == SlpStatus::infeasible)
            return cand;
        if (!have || cand.power > best.power)
        {
            best = std::move(cand);
            have = true;
        }
    }
    return best;
}

} // namespace ncprec
