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

// Monte-Carlo engine: block-fading channels, PSK symbols, improper jamming,
// precoding, receiver pipelines and error/power metrics.

#include "ncprec/blp.hpp"
#include "ncprec/noisegeom.hpp"
#include "ncprec/slp.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ncprec
{

enum class Method
{
    pw_msm,
    msm,
    naive_blp,
    pw_blp,
    robust_blp,
    naive_slp,
    pw_slp,
    nc_slp,
    robust_slp
};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
bool is_blp(Method m);

struct QSpec
{
    enum class Kind
    {
        circular,
        elements,
        rank_one,
        random_rank_one
    };
    Kind kind = Kind::circular;
    double q11 = 0.5;
    double q12 = 0.0;
    double phi = 0.0;

    std::string str() const;
    static QSpec parse(std::string_view text); // throws ConfigError
};

struct Scenario
{
    int m = 4;             // BS antennas
    int k = 4;             // users
    int d = 4;             // PSK order
    double p_t_db = 20.0;  // power budget of BLP and max-min designs
    double rho2_db = 10.0; // jammer power
    QSpec q;
    double awgn_std = 1.0; // sigma_bar
    double p = 0.8;        // confidence of the noise ellipses
    double psi_db = 10.0;  // SNR threshold that sets the margin targets
    int n_div = 16;
    int trials = 100;
    int block_len = 200;
    std::uint64_t seed = 1;
    Method method = Method::nc_slp;
    RobustMode robust_mode = RobustMode::per_direction;

    double theta() const;
    double p_t() const;
    double rho() const;
    double awgn_var() const { return awgn_std * awgn_std; }
    double margin_target() const; // delta from psi
    void validate() const;        // throws InvalidArgument
};

struct MetricsRecord
{
    std::vector<double> ser_per_user;
    double worst_user_ser = 0.0, worst_user_ser_se = 0.0;
    double ser = 0.0, ser_se = 0.0;
    double ber = 0.0, ber_se = 0.0;
    double worst_user_ber = 0.0, worst_user_ber_se = 0.0;
    double bler = 0.0, bler_se = 0.0;
    double avg_tx_power = 0.0, avg_tx_power_se = 0.0;
    double throughput = 0.0, throughput_se = 0.0; // bits per block over all users
    double ee = 0.0, ee_se = 0.0;
    std::int64_t symbol_errors = 0;
    std::int64_t bit_errors = 0;
    std::int64_t block_errors = 0;
    std::int64_t infeasible_solves = 0;
};

// Independent RNG substream for (seed, trial, purpose); never depends on scheduling.
Rng substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose);

enum class Stream : std::uint64_t
{
    channel = 1,
    jammer = 2,
    symbols = 3,
    noise = 4
};

struct ChannelDraw
{
    CMat h;   // K x M
    CVec h_j; // K
};

ChannelDraw sample_channels(Rng &rng, int m, int k);

cplx psk_symbol(int index, int d); // index in 1..d
std::vector<int> sample_psk(Rng &rng, int d, int k);
int psk_detect(cplx y, int d);
int gray_bit_errors(int tx_index, int rx_index);

double margin_from_psi(double psi, double theta, double rho2, double sigma2);
double psi_from_margin(double delta, double theta, double rho2, double sigma2);
double db_to_linear(double db);

double energy_efficiency(double bler, double c_bits, int block_len, int k, double avg_power);

SymMat2 draw_q(const QSpec &spec, Rng &rng);

MetricsRecord run_montecarlo(const Scenario &sc, int threads = 1);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)> &fn);

enum class SweepMode
{
    blp_mse,  // closed-form PW-BLP MSE
    slp_power // mean NC-SLP power over symbol draws
};

struct QGrid
{
    int n = 0;
    std::vector<double> q11;  // n values on [0, 1]
    std::vector<double> q12;  // n values on [-1/2, 1/2]
    RMat value;               // value(i, j) at (q11[i], q12[j]); NaN outside the disk
    int argmax_i = -1, argmax_j = -1;
    bool argmax_on_boundary = false;
    bool argmax_near_center = false;

    bool feasible(int i, int j) const;
};

QGrid sweep_q_grid(const Scenario &sc, int grid_n, SweepMode mode, int draw, int symbol_draws = 50);

struct LemmaReport
{
    int draws = 0;
    int passes = 0;
    std::vector<QGrid> grids;
    bool pass(double fraction = 0.95) const { return passes >= fraction * draws; }
};

// A draw passes in blp_mse mode when its argmax is within one cell of the centre,
// and in slp_power mode when its argmax lies on the disk boundary.
LemmaReport verify_lemma(const Scenario &sc, SweepMode mode, int draws, int grid_n, int symbol_draws,
                         int threads);

} // namespace ncprec
