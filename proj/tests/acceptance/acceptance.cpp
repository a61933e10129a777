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

// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 0 iff all pass.

#include "ncprec/blp.hpp"
#include "ncprec/config.hpp"
#include "ncprec/errors.hpp"
#include "ncprec/sim.hpp"
#include "ncprec/slp.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

#include <unistd.h>

namespace
{

using namespace ncprec;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

std::string num(double v)
{
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

void verdict(int id, const std::string &title, bool ok, const std::string &detail)
{
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << detail << std::endl;
    g_failures += !ok;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int worker_count()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Scenario grid_scenario()
{
    Scenario sc;
    sc.m = sc.k = 3;
    sc.d = 4;
    sc.p_t_db = 20.0;
    sc.rho2_db = 10.0;
    sc.awgn_std = 1.0;
    sc.seed = 2026;
    return sc;
}

std::vector<SymMat2> covs_for(const ChannelDraw &ch, const JammerModel &jam, double awgn)
{
    std::vector<SymMat2> g;
    for (Eigen::Index u = 0; u < ch.h_j.size(); ++u)
        g.push_back(effective_cov(ch.h_j(u), jam, awgn));
    return g;
}

void criterion_1()
{
    const auto t0 = Clock::now();
    const LemmaReport rep = verify_lemma(grid_scenario(), SweepMode::blp_mse, 100, 21, 1, worker_count());
    const double dt = seconds_since(t0);
    verdict(1, "BLP MSE peaks within one cell of circular jamming", rep.passes >= 95 && dt < 60.0,
            std::to_string(rep.passes) + "/100 draws (need >= 95), " + num(dt) + " s (limit 60 s)");
}

void criterion_2()
{
    Scenario sc = grid_scenario();
    sc.p = 0.95;
    const auto t0 = Clock::now();
    const LemmaReport rep = verify_lemma(sc, SweepMode::slp_power, 100, 21, 50, worker_count());
    const double dt = seconds_since(t0);
    verdict(2, "NC-SLP power peaks on the rank-one boundary", rep.passes >= 95 && dt < 300.0,
            std::to_string(rep.passes) + "/100 draws (need >= 95), " + num(dt) + " s (limit 300 s)");
}

void criterion_3()
{
    const Scenario sc = grid_scenario();
    const double p_t = sc.p_t(), awgn = sc.awgn_var();
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw)
    {
        Rng rc = substream(sc.seed, draw, static_cast<std::uint64_t>(Stream::channel));
        const ChannelDraw ch = sample_channels(rc, sc.m, sc.k);
        Rng rq = substream(sc.seed, draw, static_cast<std::uint64_t>(Stream::jammer));
        std::uniform_real_distribution<double> unit;
        const double r = 0.5 * std::sqrt(unit(rq)), ang = 2.0 * std::numbers::pi * unit(rq);
        const JammerModel jam = JammerModel::make(sc.rho(), q_from_elements(0.5 + r * std::cos(ang), r * std::sin(ang)));
        const std::vector<SymMat2> g = covs_for(ch, jam, awgn);
        const LinearPrecoder pc = pw_blp(ch.h, g, p_t);

        std::vector<Mat2> w;
        for (const SymMat2 &gk : g)
            w.push_back(sqrt_inv_psd2(gk));
        Rng rs = substream(sc.seed, draw, static_cast<std::uint64_t>(Stream::symbols));
        Rng rn = substream(sc.seed, draw, static_cast<std::uint64_t>(Stream::noise));
        const long n = 100000;
        double acc = 0.0;
        CVec s(sc.k);
        for (long t = 0; t < n; ++t)
        {
            const std::vector<int> idx = sample_psk(rs, sc.d, sc.k);
            for (int u = 0; u < sc.k; ++u)
                s(u) = psk_symbol(idx[u], sc.d);
            const RVec x = pc.p * expand_vec(s);
            for (int u = 0; u < sc.k; ++u)
            {
                const Vec2 y = expand_row(ch.h.row(u)) * x + sample_noise(rn, ch.h_j(u), jam, awgn);
                const Vec2 est = w[u] * y / pc.beta;
                acc += (est - Vec2(s(u).real(), s(u).imag())).squaredNorm();
            }
        }
        const double mc = acc / static_cast<double>(n);
        const double cf = mse_closed_form(ch.h, g, p_t);
        worst = std::max(worst, std::abs(mc - cf) / cf);
    }
    verdict(3, "closed-form MSE matches simulated PW-BLP MSE", worst <= 0.02,
            "max relative gap " + num(worst) + " over 20 draws (limit 0.02)");
}

void criterion_4()
{
    Rng rng(4004);
    double worst = 0.0;
    int kkt_bad = 0, disagree = 0, infeasible = 0;
    for (int i = 0; i < 200; ++i)
    {
        const int n = 1 + i % 6, m = 1 + (i / 6) % 8;
        QpProblem p;
        if (i % 10 == 9)
        {
            // Arbitrary right-hand side: feasibility is not guaranteed and must agree.
            std::normal_distribution<double> gauss;
            p = oracle::random_feasible_qp(rng, n, m);
            for (int r = 0; r < m; ++r)
                p.b(r) = gauss(rng);
        }
        else
            p = oracle::random_feasible_qp(rng, n, m);
        const auto ref = oracle::enumerate_min_norm(p);
        try
        {
            const QpSolution s = solve_min_norm(p);
            if (!ref)
            {
                ++disagree;
                continue;
            }
            worst = std::max(worst, (s.x - *ref).cwiseAbs().maxCoeff());
            kkt_bad += !check_kkt(p, s).ok();
        }
        catch (const Infeasible &)
        {
            ++infeasible;
            disagree += ref.has_value();
        }
    }
    verdict(4, "min-norm QP matches subset enumeration", worst <= 1e-6 && kkt_bad == 0 && disagree == 0,
            "max |dx| " + num(worst) + " (limit 1e-6), KKT failures " + std::to_string(kkt_bad) +
                ", feasibility disagreements " + std::to_string(disagree) + ", infeasible instances " +
                std::to_string(infeasible));
}

void criterion_5()
{
    Rng rng(5005);
    std::uniform_real_distribution<double> unit;
    double worst_margin = 0.0, worst_slope = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const double l1 = 0.05 + 10.0 * unit(rng);
        const double l2 = l1 * unit(rng);
        const double a = std::numbers::pi * unit(rng);
        const double c = std::cos(a), s = std::sin(a);
        SymMat2 g;
        g.m11 = l1 * c * c + l2 * s * s;
        g.m22 = l1 * s * s + l2 * c * c;
        g.m12 = (l1 - l2) * c * s;
        const ConfidenceEllipse el = ellipse_from_cov(g, 0.5 + 0.49 * unit(rng));
        for (double theta : {std::numbers::pi / 2, std::numbers::pi / 4, std::numbers::pi / 8})
        {
            const EllipseMargins em = ellipse_margins(el, theta);
            const oracle::SampledMargins sm = oracle::sampled_margins(el, theta, 1000000);
            worst_margin = std::max({worst_margin, std::abs(em.upper - sm.upper), std::abs(em.lower - sm.lower)});
            const TangentPoints tp = tangent_points(el, theta);
            for (const Vec2 &t : tp.upper)
                worst_slope = std::max(worst_slope, oracle::tangent_residual(el, t, theta).slope);
            for (const Vec2 &t : tp.lower)
                worst_slope = std::max(worst_slope, oracle::tangent_residual(el, t, -theta).slope);
        }
    }
    verdict(5, "ellipse margins match dense boundary sampling", worst_margin <= 1e-4 && worst_slope <= 1e-8,
            "max |d margin| " + num(worst_margin) + " (limit 1e-4), max slope residual " + num(worst_slope) +
                " (limit 1e-8)");
}

Scenario ser_scenario(Method m)
{
    Scenario sc;
    sc.m = sc.k = 4;
    sc.d = 4;
    sc.rho2_db = 10.0;
    sc.p = 0.8;
    sc.q.kind = QSpec::Kind::random_rank_one;
    sc.trials = 200;
    sc.block_len = 200;
    sc.psi_db = 10.0;
    sc.seed = 6006;
    sc.method = m;
    // Linear precoders transmit at the SNR implied by the threshold: psi (rho^2 + sigma^2).
    sc.p_t_db = sc.psi_db + 10.0 * std::log10(db_to_linear(sc.rho2_db) + sc.awgn_var());
    return sc;
}

void criterion_6()
{
    const Method order[] = {Method::pw_slp, Method::nc_slp, Method::naive_slp, Method::pw_blp};
    std::vector<MetricsRecord> r;
    for (Method m : order)
        r.push_back(run_montecarlo(ser_scenario(m), worker_count()));
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < r.size(); ++i)
    {
        detail += std::string(i ? ", " : "") + std::string(method_name(order[i])) + " " + num(r[i].worst_user_ser) +
                  " +- " + num(r[i].worst_user_ser_se);
        if (i + 1 < r.size())
        {
            const double gap = r[i + 1].worst_user_ser - r[i].worst_user_ser;
            const double se = std::hypot(r[i].worst_user_ser_se, r[i + 1].worst_user_ser_se);
            ok = ok && gap > 2.0 * se;
        }
    }
    verdict(6, "worst-user SER ordering pw_slp < nc_slp < naive_slp < pw_blp", ok,
            detail + " (each gap must exceed 2 combined SE)");
}

void criterion_7()
{
    auto run = [](Method m, double awgn_std) {
        Scenario sc;
        sc.m = sc.k = 4;
        sc.d = 4;
        sc.p_t_db = 30.0;
        sc.rho2_db = 10.0;
        sc.awgn_std = awgn_std;
        sc.q.kind = QSpec::Kind::random_rank_one;
        sc.trials = 200;
        sc.block_len = 200;
        sc.seed = 7007;
        sc.method = m;
        return run_montecarlo(sc, worker_count());
    };
    const MetricsRecord pw1 = run(Method::pw_msm, 1.0), msm1 = run(Method::msm, 1.0);
    const MetricsRecord pw30 = run(Method::pw_msm, 30.0), msm30 = run(Method::msm, 30.0);
    const double gap1 = msm1.ber - pw1.ber;
    const double se1 = std::hypot(msm1.ber_se, pw1.ber_se);
    const double rel30 = std::abs(msm30.ber - pw30.ber) / msm30.ber;
    verdict(7, "PW-MSM beats MSM at low noise and converges at high noise", gap1 > 2.0 * se1 && rel30 < 0.05,
            "sigma=1: BER pw_msm " + num(pw1.ber) + " vs msm " + num(msm1.ber) + " (gap " + num(gap1) + ", 2 SE " +
                num(2.0 * se1) + "); sigma=30: relative gap " + num(rel30) + " (limit 0.05); worst-user BER at sigma=1: " +
                num(pw1.worst_user_ber) + " vs " + num(msm1.worst_user_ber));
}

void criterion_8()
{
    Rng rng(8008);
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> unit;
    double worst_blp = 0.0, worst_slp = 0.0;
    for (int i = 0; i < 4; ++i)
    {
        const cplx hj{half(rng), half(rng)};
        const double rho = std::sqrt(10.0);
        const double awgn = 1.0;
        const SymMat2 q = i % 2 ? q_rank_one(std::numbers::pi * unit(rng)) : q_from_elements(0.7, 0.2);
        const JammerModel jam = JammerModel::make(rho, q);
        const SymMat2 g = effective_cov(hj, jam, awgn);
        const double sigma = std::sqrt(rho * rho * std::norm(hj) + awgn);
        const Mat2 w = sqrt_inv_psd2(g);
        const Mat2 w_slp = (sigma / std::numbers::sqrt2) * w;

        Rng noise(100 + i);
        Mat2 blp = Mat2::Zero(), slp = Mat2::Zero();
        const long n = 1000000;
        for (long t = 0; t < n; ++t)
        {
            const Vec2 c = sample_noise(noise, hj, jam, awgn);
            const Vec2 a = w * c, b = w_slp * c;
            blp += a * a.transpose();
            slp += b * b.transpose();
        }
        blp /= static_cast<double>(n);
        slp /= static_cast<double>(n);
        worst_blp = std::max(worst_blp, (blp - Mat2::Identity()).cwiseAbs().maxCoeff() / 2.0);
        const double target = sigma * sigma / 2.0;
        worst_slp = std::max(worst_slp, (slp - target * Mat2::Identity()).cwiseAbs().maxCoeff() / (2.0 * target));
    }
    verdict(8, "whitened noise covariance is I (BLP) and sigma^2/2 I (SLP)", worst_blp <= 0.01 && worst_slp <= 0.01,
            "max error / trace: BLP " + num(worst_blp) + ", SLP " + num(worst_slp) + " (limit 0.01)");
}

void criterion_9()
{
    // Symbol-level: robust design never needs less power than the design for the true Q.
    Scenario sc;
    sc.m = sc.k = 4;
    sc.seed = 9009;
    double worst_slack = std::numeric_limits<double>::infinity();
    int violations = 0;
    const MarginTargets targets = MarginTargets::uniform(sc.k, sc.margin_target());
    for (int i = 0; i < 100; ++i)
    {
        Rng rc = substream(sc.seed, i, static_cast<std::uint64_t>(Stream::channel));
        const ChannelDraw ch = sample_channels(rc, sc.m, sc.k);
        Rng rq = substream(sc.seed, i, static_cast<std::uint64_t>(Stream::jammer));
        QSpec spec;
        spec.kind = QSpec::Kind::random_rank_one;
        const JammerModel jam = JammerModel::make(sc.rho(), draw_q(spec, rq));
        Rng rs = substream(sc.seed, i, static_cast<std::uint64_t>(Stream::symbols));
        const std::vector<int> idx = sample_psk(rs, sc.d, sc.k);
        CVec s(sc.k);
        std::vector<double> awgn(sc.k, sc.awgn_var());
        for (int u = 0; u < sc.k; ++u)
            s(u) = psk_symbol(idx[u], sc.d);
        const SlpSolution nc = nc_slp(ch.h, ch.h_j, jam, awgn, s, targets, sc.p, sc.theta());
        const SlpSolution rb = robust_slp(ch.h, ch.h_j, sc.rho() * sc.rho(), awgn, s, targets, sc.p, sc.theta(), sc.n_div);
        if (rb.status == SlpStatus::infeasible)
            continue; // unbounded robust power dominates trivially
        if (nc.status == SlpStatus::infeasible)
        {
            ++violations;
            continue;
        }
        const double slack = rb.power - nc.power;
        worst_slack = std::min(worst_slack, slack);
        violations += slack < -1e-9;
    }

    // Block-level: worst case over the Q grid of the robust precoder versus one designed for a wrong Q.
    const Scenario bs = grid_scenario();
    const int n = 21;
    const double step = 1.0 / (n - 1);
    int blp_violations = 0;
    double worst_ratio = 0.0;
    for (int draw = 0; draw < 20; ++draw)
    {
        Rng rc = substream(bs.seed, draw, static_cast<std::uint64_t>(Stream::channel));
        const ChannelDraw ch = sample_channels(rc, bs.m, bs.k);
        const JammerModel wrong = JammerModel::make(bs.rho(), q_from_elements(0.8, 0.3));
        const std::vector<SymMat2> wrong_covs = covs_for(ch, wrong, bs.awgn_var());
        std::vector<SymMat2> robust_covs;
        for (int u = 0; u < bs.k; ++u)
            robust_covs.push_back(SymMat2::identity(0.5 * (bs.rho() * bs.rho() * std::norm(ch.h_j(u)) + bs.awgn_var())));
        double robust_worst = 0.0, wrong_worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                const double q11 = i * step, q12 = -0.5 + j * step;
                if ((q11 - 0.5) * (q11 - 0.5) + q12 * q12 > 0.25 + 1e-12)
                    continue;
                const JammerModel jam = JammerModel::make(bs.rho(), q_from_elements(q11, q12));
                const std::vector<SymMat2> truth = covs_for(ch, jam, bs.awgn_var());
                robust_worst = std::max(robust_worst, mse_mismatched(ch.h, robust_covs, truth, bs.p_t()));
                wrong_worst = std::max(wrong_worst, mse_mismatched(ch.h, wrong_covs, truth, bs.p_t()));
            }
        blp_violations += robust_worst > wrong_worst * (1.0 + 1e-12);
        worst_ratio = std::max(worst_ratio, robust_worst / wrong_worst);
    }
    verdict(9, "robust designs dominate over the jammer uncertainty set", violations == 0 && blp_violations == 0,
            "SLP: min(robust - nc power) " + num(worst_slack) + " (limit -1e-9), " + std::to_string(violations) +
                " violations; BLP: max robust/wrong worst-case MSE " + num(worst_ratio) + ", " +
                std::to_string(blp_violations) + " violations");
}

void criterion_10()
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("ncprec_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path cfg = dir / "determinism.cfg";
    {
        std::ofstream f(cfg);
        f << "[scenario]\nm = 4\nk = 4\nq = random_rank_one\ntrials = 24\nblock_len = 50\nseed = 10010\n"
             "[sweep]\nmethod = pw_msm, msm, naive_blp, pw_blp, robust_blp, naive_slp, pw_slp, nc_slp, robust_slp\n"
             "psi_db = 0, 10\n";
    }
    auto run = [&](int threads) {
        const fs::path out = dir / ("threads" + std::to_string(threads) + ".csv");
        const std::string cmd = std::string(NCPREC_CLI_PATH) + " run --config " + cfg.string() + " --out " +
                                out.string() + " --threads " + std::to_string(threads);
        const int rc = std::system(cmd.c_str());
        std::ifstream in(out, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return std::make_pair(rc, ss.str());
    };
    const auto [rc1, a] = run(1);
    const auto [rc8, b] = run(8);
    fs::remove_all(dir);
    const bool ok = rc1 == 0 && rc8 == 0 && !a.empty() && a == b;
    verdict(10, "CSV output is byte-identical for 1 and 8 threads", ok,
            std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " bytes, exit codes " +
                std::to_string(rc1) + "/" + std::to_string(rc8));
}

} // namespace

int main()
{
    const std::pair<int, void (*)()> criteria[] = {{1, criterion_1}, {2, criterion_2}, {3, criterion_3},
                                                   {4, criterion_4}, {5, criterion_5}, {6, criterion_6},
                                                   {7, criterion_7}, {8, criterion_8}, {9, criterion_9},
                                                   {10, criterion_10}};
    for (const auto &[id, fn] : criteria)
    {
        try
        {
            fn();
        }
        catch (const std::exception &e)
        {
            verdict(id, "error", false, e.what());
        }
    }
    std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
