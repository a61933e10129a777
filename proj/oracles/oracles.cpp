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

#include "oracles.hpp"

#include "ncprec/errors.hpp"
#include "ncprec/slp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ncprec::oracle
{

std::optional<RVec> enumerate_min_norm(const QpProblem &p, double tol)
{
    const auto m = p.a.rows();
    const auto n = p.a.cols();
    if (m > 20)
        throw InvalidArgument("enumerate_min_norm: too many rows");

    std::optional<RVec> best;
    double best_norm = std::numeric_limits<double>::infinity();
    for (unsigned long mask = 0; mask < (1UL << m); ++mask)
    {
        std::vector<Eigen::Index> rows;
        for (Eigen::Index i = 0; i < m; ++i)
            if (mask & (1UL << i))
                rows.push_back(i);
        const auto q = static_cast<Eigen::Index>(rows.size());
        if (q > n)
            continue;

        RVec x = RVec::Zero(n);
        if (q > 0)
        {
            RMat as(q, n);
            RVec bs(q);
            for (Eigen::Index j = 0; j < q; ++j)
            {
                as.row(j) = p.a.row(rows[j]);
                bs(j) = p.b(rows[j]);
            }
            Eigen::FullPivLU<RMat> lu(as * as.transpose());
            lu.setThreshold(1e-10);
            if (lu.rank() < q)
                continue;
            x = as.transpose() * lu.solve(bs);
        }
        bool feasible = true;
        for (Eigen::Index i = 0; i < m && feasible; ++i)
            feasible = p.a.row(i).dot(x) >= p.b(i) - tol * std::max(1.0, std::abs(p.b(i)));
        if (feasible && x.squaredNorm() < best_norm)
        {
            best_norm = x.squaredNorm();
            best = x;
        }
    }
    return best;
}

QpProblem random_feasible_qp(Rng &rng, int n, int m)
{
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit;
    QpProblem p{RMat(m, n), RVec(m)};
    RVec x0(n);
    for (int j = 0; j < n; ++j)
        x0(j) = gauss(rng);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            p.a(i, j) = gauss(rng);
    for (int i = 0; i < m; ++i)
    {
        const double slack = unit(rng) < 0.5 ? 0.0 : unit(rng);
        p.b(i) = p.a.row(i).dot(x0) - slack;
    }
    return p;
}

double sampled_support(const ConfidenceEllipse &el, const Vec2 &direction, int samples)
{
    const double r1 = std::sqrt(el.omega * el.lambda1);
    const double r2 = std::sqrt(el.omega * std::max(el.lambda2, 0.0));
    const Vec2 v1(std::cos(el.alpha), std::sin(el.alpha));
    const Vec2 v2(-std::sin(el.alpha), std::cos(el.alpha));
    const double d1 = direction.dot(v1), d2 = direction.dot(v2);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
    {
        const double t = 2.0 * std::numbers::pi * i / samples;
        best = std::max(best, r1 * std::cos(t) * d1 + r2 * std::sin(t) * d2);
    }
    return best;
}

SampledMargins sampled_margins(const ConfidenceEllipse &el, double theta, int samples)
{
    const double s = std::sin(theta), c = std::cos(theta);
    return {sampled_support(el, Vec2(-s, c), samples), sampled_support(el, Vec2(-s, -c), samples)};
}

TangentCheck tangent_residual(const ConfidenceEllipse &el, const Vec2 &t, double slope_angle)
{
    const Vec2 v1(std::cos(el.alpha), std::sin(el.alpha));
    const Vec2 v2(-std::sin(el.alpha), std::cos(el.alpha));
    const double c1 = v1.dot(t), c2 = v2.dot(t);
    // Gradient of t^T G^-1 t, expressed in the principal frame.
    const Vec2 grad = (c1 / el.lambda1) * v1 + (c2 / el.lambda2) * v2;
    const Vec2 tangent(-grad(1), grad(0));
    const Vec2 line(std::cos(slope_angle), std::sin(slope_angle));
    TangentCheck r;
    r.slope = std::abs(tangent(0) * line(1) - tangent(1) * line(0)) / tangent.norm();
    r.level = std::abs((c1 * c1 / el.lambda1 + c2 * c2 / el.lambda2) / el.omega - 1.0);
    return r;
}

Mat2 sample_covariance(const std::function<Vec2()> &draw, long n)
{
    Mat2 acc = Mat2::Zero();
    for (long i = 0; i < n; ++i)
    {
        const Vec2 v = draw();
        acc += v * v.transpose();
    }
    return acc / static_cast<double>(n);
}

double maximin_angle_scan(const RMat &a_rows, double p_t, int samples)
{
    if (a_rows.cols() != 2)
        throw InvalidArgument("maximin_angle_scan: rows must have two columns");
    const double r = std::sqrt(p_t);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
    {
        const double t = 2.0 * std::numbers::pi * i / samples;
        const Vec2 x(r * std::cos(t), r * std::sin(t));
        best = std::max(best, (a_rows * x).minCoeff());
    }
    return best;
}

namespace
{

void report(std::ostream &out, bool ok, const std::string &name, const std::string &detail)
{
    out << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << '\n';
}

std::string sci(double v)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

bool qp_suite(std::ostream &out)
{
    Rng rng(20260401);
    double worst_dx = 0.0;
    int kkt_failures = 0, disagreements = 0;
    for (int i = 0; i < 200; ++i)
    {
        const int n = 1 + i % 6;
        const int m = 1 + (i / 6) % 8;
        const QpProblem p = random_feasible_qp(rng, n, m);
        const auto ref = enumerate_min_norm(p);
        try
        {
            const QpSolution s = solve_min_norm(p);
            if (!ref)
            {
                ++disagreements;
                continue;
            }
            worst_dx = std::max(worst_dx, (s.x - *ref).cwiseAbs().maxCoeff());
            kkt_failures += !check_kkt(p, s).ok();
        }
        catch (const Infeasible &)
        {
            disagreements += ref.has_value();
        }
    }
    const bool ok = worst_dx <= 1e-6 && kkt_failures == 0 && disagreements == 0;
    report(out, ok, "qp-enumeration",
           "max |dx| = " + sci(worst_dx) + ", kkt failures = " + std::to_string(kkt_failures) +
               ", disagreements = " + std::to_string(disagreements));
    return ok;
}

bool ellipse_suite(std::ostream &out)
{
    Rng rng(20260402);
    std::uniform_real_distribution<double> unit;
    double worst_margin = 0.0, worst_slope = 0.0, worst_level = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        ConfidenceEllipse el;
        el.lambda1 = 0.1 + 5.0 * unit(rng);
        el.lambda2 = el.lambda1 * (0.01 + 0.99 * unit(rng));
        el.alpha = std::numbers::pi * unit(rng);
        el.omega = omega_from_confidence(0.5 + 0.49 * unit(rng));
        for (double theta : {std::numbers::pi / 2, std::numbers::pi / 4, std::numbers::pi / 8})
        {
            const EllipseMargins em = ellipse_margins(el, theta);
            const SampledMargins sm = sampled_margins(el, theta, 1000000);
            worst_margin = std::max({worst_margin, std::abs(em.upper - sm.upper), std::abs(em.lower - sm.lower)});
            const TangentPoints tp = tangent_points(el, theta);
            for (const Vec2 &t : tp.upper)
            {
                const TangentCheck c = tangent_residual(el, t, theta);
                worst_slope = std::max(worst_slope, c.slope);
                worst_level = std::max(worst_level, c.level);
            }
            for (const Vec2 &t : tp.lower)
            {
                const TangentCheck c = tangent_residual(el, t, -theta);
                worst_slope = std::max(worst_slope, c.slope);
                worst_level = std::max(worst_level, c.level);
            }
        }
    }
    const bool ok_margin = worst_margin <= 1e-4;
    const bool ok_tangent = worst_slope <= 1e-8 && worst_level <= 1e-8;
    report(out, ok_margin, "ellipse-sampling", "max |d margin| = " + sci(worst_margin));
    report(out, ok_tangent, "tangent-points",
           "max slope residual = " + sci(worst_slope) + ", level residual = " + sci(worst_level));
    return ok_margin && ok_tangent;
}

bool covariance_suite(std::ostream &out)
{
    Rng rng(20260403);
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> unit;
    double worst_raw = 0.0, worst_blp = 0.0, worst_slp = 0.0;
    for (int i = 0; i < 5; ++i)
    {
        const cplx hj{half(rng), half(rng)};
        const double rho = std::sqrt(std::pow(10.0, 0.1 * 20.0 * unit(rng)));
        const double awgn = 0.2 + 2.0 * unit(rng);
        const SymMat2 q = i % 2 ? q_rank_one(std::numbers::pi * unit(rng))
                                : q_from_elements(0.5 + 0.3 * (unit(rng) - 0.5), 0.3 * (unit(rng) - 0.5));
        const JammerModel jam = JammerModel::make(rho, q);
        const SymMat2 g = effective_cov(hj, jam, awgn);
        const double sigma2 = rho * rho * std::norm(hj) + awgn;
        const Mat2 w = sqrt_inv_psd2(g);

        Rng noise(1000 + i);
        const Mat2 raw = sample_covariance([&] { return sample_noise(noise, hj, jam, awgn); }, 1000000);
        worst_raw = std::max(worst_raw, (raw - g.matrix()).cwiseAbs().maxCoeff() / g.trace());

        const Mat2 white = w * raw * w.transpose();
        worst_blp = std::max(worst_blp, (white - Mat2::Identity()).cwiseAbs().maxCoeff() / 2.0);

        const double gamma2 = sigma2 / 2.0;
        const Mat2 slp = gamma2 * white;
        worst_slp = std::max(worst_slp, (slp - gamma2 * Mat2::Identity()).cwiseAbs().maxCoeff() / sigma2);
    }
    const bool ok_raw = worst_raw <= 0.01, ok_blp = worst_blp <= 0.01, ok_slp = worst_slp <= 0.01;
    report(out, ok_raw, "noise-covariance", "max rel error = " + sci(worst_raw));
    report(out, ok_blp, "whitened-blp", "max rel error = " + sci(worst_blp));
    report(out, ok_slp, "whitened-slp", "max rel error = " + sci(worst_slp));
    return ok_raw && ok_blp && ok_slp;
}

} // namespace

bool run_suite(const std::string &name, std::ostream &out)
{
    if (name == "qp")
        return qp_suite(out);
    if (name == "ellipse")
        return ellipse_suite(out);
    if (name == "covariance")
        return covariance_suite(out);
    if (name == "all")
    {
        const bool a = qp_suite(out);
        const bool b = ellipse_suite(out);
        const bool c = covariance_suite(out);
        return a && b && c;
    }
    throw InvalidArgument("unknown oracle suite '" + name + "'");
}

} // namespace ncprec::oracle
