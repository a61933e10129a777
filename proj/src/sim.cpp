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

#include "ncprec/sim.hpp"

#include "ncprec/errors.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace ncprec
{
namespace
{

constexpr std::array<std::pair<Method, std::string_view>, 9> kMethodNames{{
    {Method::pw_msm, "pw_msm"},
    {Method::msm, "msm"},
    {Method::naive_blp, "naive_blp"},
    {Method::pw_blp, "pw_blp"},
    {Method::robust_blp, "robust_blp"},
    {Method::naive_slp, "naive_slp"},
    {Method::pw_slp, "pw_slp"},
    {Method::nc_slp, "nc_slp"},
    {Method::robust_slp, "robust_slp"},
}};

struct MeanSe
{
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double> &v)
{
    MeanSe r;
    if (v.empty())
        return r;
    double sum = 0.0;
    for (double x : v)
        sum += x;
    r.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1)
    {
        double ss = 0.0;
        for (double x : v)
            ss += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return r;
}

struct TrialResult
{
    std::vector<std::int64_t> symbol_errors; // per user
    std::vector<std::int64_t> bit_errors;    // per user
    std::vector<int> block_error;            // per user, 0/1
    double power_sum = 0.0;
    std::int64_t infeasible = 0;
};

double parse_double(std::string_view text, std::string_view what)
{
    std::string s(text);
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ConfigError("cannot parse " + std::string(what) + " from '" + s + "'");
    return v;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

TrialResult run_trial(const Scenario &sc, int trial)
{
    const int k = sc.k, d = sc.d;
    const double theta = sc.theta();
    const double awgn = sc.awgn_var();
    const double rho = sc.rho();

    Rng rc = substream(sc.seed, trial, static_cast<std::uint64_t>(Stream::channel));
    const ChannelDraw ch = sample_channels(rc, sc.m, k);
    Rng rq = substream(sc.seed, trial, static_cast<std::uint64_t>(Stream::jammer));
    const JammerModel jam = JammerModel::make(rho, draw_q(sc.q, rq));

    std::vector<SymMat2> g(k);
    std::vector<double> jam_pow(k), awgn_vars(k, awgn), sigma2(k);
    std::vector<RMat> hbar(k);
    for (int u = 0; u < k; ++u)
    {
        g[u] = effective_cov(ch.h_j(u), jam, awgn);
        jam_pow[u] = rho * rho * std::norm(ch.h_j(u));
        sigma2[u] = jam_pow[u] + awgn;
        hbar[u] = expand_row(ch.h.row(u));
    }

    // Receiver processing applied to the real received pair before detection.
    std::vector<Mat2> rx(k, Mat2::Identity());
    std::vector<RMat> eff(k);
    LinearPrecoder blp;
    const Method method = sc.method;
    const double p_t = sc.p_t();
    const MarginTargets targets = MarginTargets::uniform(k, sc.margin_target());

    switch (method)
    {
    case Method::pw_blp:
        blp = pw_blp(ch.h, g, p_t);
        for (int u = 0; u < k; ++u)
            rx[u] = sqrt_inv_psd2(g[u]);
        break;
    case Method::naive_blp:
        blp = naive_blp(ch.h, awgn_vars, p_t);
        break;
    case Method::robust_blp:
        blp = robust_blp(ch.h, awgn_vars, jam_pow, p_t);
        break;
    case Method::pw_slp:
    case Method::pw_msm:
        for (int u = 0; u < k; ++u)
        {
            const double sig = std::sqrt(sigma2[u]);
            eff[u] = whitened_effective_channel(ch.h.row(u), g[u], sig);
            rx[u] = (sig / std::numbers::sqrt2) * sqrt_inv_psd2(g[u]);
        }
        break;
    case Method::msm:
        eff = hbar;
        break;
    default:
        break;
    }

    TrialResult tr;
    tr.symbol_errors.assign(k, 0);
    tr.bit_errors.assign(k, 0);
    tr.block_error.assign(k, 0);

    Rng rs = substream(sc.seed, trial, static_cast<std::uint64_t>(Stream::symbols));
    Rng rn = substream(sc.seed, trial, static_cast<std::uint64_t>(Stream::noise));
    CVec s(k);
    for (int slot = 0; slot < sc.block_len; ++slot)
    {
        const std::vector<int> idx = sample_psk(rs, d, k);
        for (int u = 0; u < k; ++u)
            s(u) = psk_symbol(idx[u], d);

        RVec x;
        if (is_blp(method))
        {
            x = blp.p * expand_vec(s);
            tr.power_sum += blp.expected_power();
        }
        else
        {
            SlpSolution sol;
            switch (method)
            {
            case Method::pw_slp:
                sol = pw_slp_minpower(eff, s, targets.delta_u0, theta);
                break;
            case Method::pw_msm:
            case Method::msm:
                sol = pw_slp_msm(eff, s, p_t, theta);
                break;
            case Method::nc_slp:
                sol = nc_slp_from_covs(ch.h, g, s, targets, sc.p, theta);
                break;
            case Method::naive_slp:
                sol = naive_slp(ch.h, jam_pow, awgn_vars, s, targets, sc.p, theta);
                break;
            case Method::robust_slp:
                sol = robust_slp(ch.h, ch.h_j, rho * rho, awgn_vars, s, targets, sc.p, theta, sc.n_div, sc.robust_mode);
                break;
            default:
                throw InvalidArgument("unhandled method");
            }
            if (sol.status == SlpStatus::infeasible)
                ++tr.infeasible;
            x = sol.x;
            tr.power_sum += x.squaredNorm();
        }

        for (int u = 0; u < k; ++u)
        {
            const Vec2 c = sample_noise(rn, ch.h_j(u), jam, awgn);
            const Vec2 y = rx[u] * (hbar[u] * x + c);
            const int det = psk_detect(cplx(y(0), y(1)), d);
            if (det != idx[u])
            {
                ++tr.symbol_errors[u];
                tr.bit_errors[u] += gray_bit_errors(idx[u], det);
                tr.block_error[u] = 1;
            }
        }
    }
    return tr;
}

} // namespace

std::string_view method_name(Method m)
{
    for (const auto &[id, name] : kMethodNames)
        if (id == m)
            return name;
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (const auto &[id, n] : kMethodNames)
        if (n == name)
            return id;
    return std::nullopt;
}

bool is_blp(Method m)
{
    return m == Method::naive_blp || m == Method::pw_blp || m == Method::robust_blp;
}

std::string QSpec::str() const
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    switch (kind)
    {
    case Kind::circular:
        return "circular";
    case Kind::elements:
        os << "elements:" << q11 << "," << q12;
        return os.str();
    case Kind::rank_one:
        os << "rank_one:" << phi;
        return os.str();
    case Kind::random_rank_one:
        return "random_rank_one";
    }
    return "circular";
}

QSpec QSpec::parse(std::string_view text)
{
    const std::string t = trim(text);
    QSpec q;
    if (t == "circular")
        return q;
    if (t == "random_rank_one")
    {
        q.kind = Kind::random_rank_one;
        return q;
    }
    if (t.rfind("elements:", 0) == 0)
    {
        const std::string body = t.substr(9);
        const auto comma = body.find(',');
        if (comma == std::string::npos)
            throw ConfigError("q elements need 'elements:q11,q12'");
        q.kind = Kind::elements;
        q.q11 = parse_double(trim(body.substr(0, comma)), "q11");
        q.q12 = parse_double(trim(body.substr(comma + 1)), "q12");
        try
        {
            q_from_elements(q.q11, q.q12);
        }
        catch (const InfeasibleQ &e)
        {
            throw ConfigError(e.what());
        }
        return q;
    }
    if (t.rfind("rank_one:", 0) == 0)
    {
        q.kind = Kind::rank_one;
        q.phi = parse_double(trim(t.substr(9)), "phi");
        return q;
    }
    throw ConfigError("unknown q specification '" + t + "'");
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double Scenario::theta() const
{
    return std::numbers::pi / d;
}

double Scenario::p_t() const
{
    return db_to_linear(p_t_db);
}

double Scenario::rho() const
{
    return std::sqrt(db_to_linear(rho2_db));
}

double Scenario::margin_target() const
{
    return margin_from_psi(db_to_linear(psi_db), theta(), db_to_linear(rho2_db), awgn_var());
}

void Scenario::validate() const
{
    if (m < 1 || k < 1)
        throw InvalidArgument("m and k must be positive");
    if (d != 2 && d != 4 && d != 8 && d != 16)
        throw InvalidArgument("d must be one of 2, 4, 8, 16");
    if (trials < 1 || block_len < 1)
        throw InvalidArgument("trials and block_len must be positive");
    if (!(p > 0.0 && p < 1.0))
        throw InvalidArgument("p must lie in (0, 1)");
    if (!(awgn_std > 0.0))
        throw InvalidArgument("awgn_std must be positive");
    if (n_div < 1)
        throw InvalidArgument("n_div must be at least 1");
    if (!std::isfinite(p_t_db) || !std::isfinite(psi_db) || std::isnan(rho2_db) || rho2_db == INFINITY)
        throw InvalidArgument("power levels must be finite (rho2_db may be -inf)");
}

Rng substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      static_cast<std::uint32_t>(purpose)};
    return Rng(seq);
}

ChannelDraw sample_channels(Rng &rng, int m, int k)
{
    std::normal_distribution<double> n01(0.0, std::sqrt(0.5));
    ChannelDraw ch{CMat(k, m), CVec(k)};
    for (int u = 0; u < k; ++u)
        for (int a = 0; a < m; ++a)
        {
            const double re = n01(rng);
            ch.h(u, a) = cplx(re, n01(rng));
        }
    for (int u = 0; u < k; ++u)
    {
        const double re = n01(rng);
        ch.h_j(u) = cplx(re, n01(rng));
    }
    return ch;
}

cplx psk_symbol(int index, int d)
{
    return std::polar(1.0, std::numbers::pi * (2 * index - 1) / d);
}

std::vector<int> sample_psk(Rng &rng, int d, int k)
{
    std::uniform_int_distribution<int> pick(1, d);
    std::vector<int> out(k);
    for (auto &v : out)
        v = pick(rng);
    return out;
}

int psk_detect(cplx y, int d)
{
    if (y == cplx(0.0, 0.0))
        return 1;
    double phase = std::arg(y);
    if (phase <= 0.0)
        phase += 2.0 * std::numbers::pi;
    // Sector i covers ((2i - 2) pi / d, 2 i pi / d].
    const int idx = static_cast<int>(std::ceil(phase * d / (2.0 * std::numbers::pi)));
    return std::clamp(idx, 1, d);
}

int gray_bit_errors(int tx_index, int rx_index)
{
    const unsigned a = static_cast<unsigned>(tx_index - 1), b = static_cast<unsigned>(rx_index - 1);
    return std::popcount((a ^ (a >> 1)) ^ (b ^ (b >> 1)));
}

double margin_from_psi(double psi, double theta, double rho2, double sigma2)
{
    if (!(psi >= 0.0))
        throw InvalidArgument("margin_from_psi: psi must be non-negative");
    return std::sin(theta) * std::sqrt(psi * (rho2 + sigma2));
}

double psi_from_margin(double delta, double theta, double rho2, double sigma2)
{
    const double st = std::sin(theta);
    return delta * delta / (st * st * (rho2 + sigma2));
}

double energy_efficiency(double bler, double c_bits, int block_len, int k, double avg_power)
{
    if (!(avg_power > 0.0))
        return 0.0;
    const double tau = (1.0 - bler) * c_bits * block_len * k;
    return tau / (block_len * avg_power);
}

SymMat2 draw_q(const QSpec &spec, Rng &rng)
{
    switch (spec.kind)
    {
    case QSpec::Kind::circular:
        return SymMat2::identity(0.5);
    case QSpec::Kind::elements:
        return q_from_elements(spec.q11, spec.q12);
    case QSpec::Kind::rank_one:
        return q_rank_one(spec.phi);
    case QSpec::Kind::random_rank_one:
    {
        std::uniform_real_distribution<double> ang(0.0, std::numbers::pi);
        return q_rank_one(ang(rng));
    }
    }
    return SymMat2::identity(0.5);
}

void parallel_for(int n, int threads, const std::function<void(int)> &fn)
{
    if (threads <= 1 || n <= 1)
    {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

MetricsRecord run_montecarlo(const Scenario &sc, int threads)
{
    sc.validate();
    std::vector<TrialResult> results(sc.trials);
    parallel_for(sc.trials, threads, [&](int t) { results[t] = run_trial(sc, t); });

    const int k = sc.k;
    const double T = sc.block_len;
    const double c_bits = std::log2(static_cast<double>(sc.d));

    MetricsRecord mr;
    mr.ser_per_user.assign(k, 0.0);
    std::vector<double> worst_ser, all_ser, worst_ber, all_ber, bler, power, tau, ee;
    for (const TrialResult &tr : results)
    {
        double ws = 0.0, as = 0.0, wb = 0.0, ab = 0.0, bl = 0.0;
        for (int u = 0; u < k; ++u)
        {
            const double su = tr.symbol_errors[u] / T;
            const double bu = tr.bit_errors[u] / (T * c_bits);
            mr.ser_per_user[u] += su;
            ws = std::max(ws, su);
            wb = std::max(wb, bu);
            as += su;
            ab += bu;
            bl += tr.block_error[u];
            mr.symbol_errors += tr.symbol_errors[u];
            mr.bit_errors += tr.bit_errors[u];
            mr.block_errors += tr.block_error[u];
        }
        mr.infeasible_solves += tr.infeasible;
        const double trial_bler = bl / k;
        const double trial_power = tr.power_sum / T;
        worst_ser.push_back(ws);
        all_ser.push_back(as / k);
        worst_ber.push_back(wb);
        all_ber.push_back(ab / k);
        bler.push_back(trial_bler);
        power.push_back(trial_power);
        tau.push_back((1.0 - trial_bler) * c_bits * T * k);
        ee.push_back(energy_efficiency(trial_bler, c_bits, sc.block_len, k, trial_power));
    }
    for (auto &v : mr.ser_per_user)
        v /= sc.trials;

    auto put = [](const std::vector<double> &v, double &mean, double &se) {
        const MeanSe r = mean_se(v);
        mean = r.mean;
        se = r.se;
    };
    put(worst_ser, mr.worst_user_ser, mr.worst_user_ser_se);
    put(all_ser, mr.ser, mr.ser_se);
    put(worst_ber, mr.worst_user_ber, mr.worst_user_ber_se);
    put(all_ber, mr.ber, mr.ber_se);
    put(bler, mr.bler, mr.bler_se);
    put(power, mr.avg_tx_power, mr.avg_tx_power_se);
    put(tau, mr.throughput, mr.throughput_se);
    double ee_mean_unused = 0.0;
    put(ee, ee_mean_unused, mr.ee_se);
    mr.ee = energy_efficiency(mr.bler, c_bits, sc.block_len, k, mr.avg_tx_power);
    return mr;
}

bool QGrid::feasible(int i, int j) const
{
    return i >= 0 && j >= 0 && i < n && j < n && !std::isnan(value(i, j));
}

QGrid sweep_q_grid(const Scenario &sc, int grid_n, SweepMode mode, int draw, int symbol_draws)
{
    sc.validate();
    if (grid_n < 5)
        throw InvalidArgument("sweep_q_grid: grid_n must be at least 5");
    if (symbol_draws < 1)
        throw InvalidArgument("sweep_q_grid: symbol_draws must be positive");

    Rng rc = substream(sc.seed, draw, static_cast<std::uint64_t>(Stream::channel));
    const ChannelDraw ch = sample_channels(rc, sc.m, sc.k);
    const int k = sc.k;
    const double rho = sc.rho(), awgn = sc.awgn_var(), theta = sc.theta();

    std::vector<CVec> symbols;
    if (mode == SweepMode::slp_power)
    {
        Rng rs = substream(sc.seed, draw, static_cast<std::uint64_t>(Stream::symbols));
        for (int t = 0; t < symbol_draws; ++t)
        {
            const std::vector<int> idx = sample_psk(rs, sc.d, k);
            CVec s(k);
            for (int u = 0; u < k; ++u)
                s(u) = psk_symbol(idx[u], sc.d);
            symbols.push_back(s);
        }
    }
    const MarginTargets targets = MarginTargets::uniform(k, sc.margin_target());

    QGrid grid;
    grid.n = grid_n;
    const double step = 1.0 / (grid_n - 1);
    for (int i = 0; i < grid_n; ++i)
    {
        grid.q11.push_back(i * step);
        grid.q12.push_back(-0.5 + i * step);
    }
    grid.value = RMat::Constant(grid_n, grid_n, std::numeric_limits<double>::quiet_NaN());

    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j)
        {
            SymMat2 q;
            try
            {
                q = q_from_elements(grid.q11[i], grid.q12[j]);
            }
            catch (const InfeasibleQ &)
            {
                continue;
            }
            const JammerModel jam = JammerModel::make(rho, q);
            std::vector<SymMat2> g(k);
            for (int u = 0; u < k; ++u)
                g[u] = effective_cov(ch.h_j(u), jam, awgn);

            double v = 0.0;
            if (mode == SweepMode::blp_mse)
            {
                v = mse_closed_form(ch.h, g, sc.p_t());
            }
            else
            {
                for (const CVec &s : symbols)
                    v += nc_slp_from_covs(ch.h, g, s, targets, sc.p, theta).power;
                v /= static_cast<double>(symbols.size());
            }
            grid.value(i, j) = v;
            if (v > best)
            {
                best = v;
                grid.argmax_i = i;
                grid.argmax_j = j;
            }
        }

    const int ai = grid.argmax_i, aj = grid.argmax_j;
    grid.argmax_on_boundary = !grid.feasible(ai - 1, aj) || !grid.feasible(ai + 1, aj) ||
                              !grid.feasible(ai, aj - 1) || !grid.feasible(ai, aj + 1);
    const double reach = step * (1.0 + 1e-9);
    grid.argmax_near_center =
        std::abs(grid.q11[ai] - 0.5) <= reach && std::abs(grid.q12[aj]) <= reach;
    return grid;
}

LemmaReport verify_lemma(const Scenario &sc, SweepMode mode, int draws, int grid_n, int symbol_draws,
                         int threads)
{
    LemmaReport rep;
    rep.draws = draws;
    rep.grids.resize(draws);
    parallel_for(draws, threads, [&](int i) { rep.grids[i] = sweep_q_grid(sc, grid_n, mode, i, symbol_draws); });
    for (const QGrid &g : rep.grids)
        rep.passes += mode == SweepMode::blp_mse ? g.argmax_near_center : g.argmax_on_boundary;
    return rep;
}

} // namespace ncprec
