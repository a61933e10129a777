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

// ncprec command-line front end.

#include "ncprec/config.hpp"
#include "ncprec/errors.hpp"
#include "ncprec/sim.hpp"
#include "oracles.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace
{

using namespace ncprec;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kConfig = 2;
constexpr int kFail = 3;

struct Options
{
    std::string config;
    std::string out;
    int threads = 1;
    OutputFormat format = OutputFormat::csv;
    std::string suite = "all";
};

void add_common(CLI::App *sub, Options &opt, bool needs_config)
{
    auto *c = sub->add_option("--config", opt.config, "Configuration file");
    if (needs_config)
        c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output file (default: standard output)");
    sub->add_option("--threads", opt.threads, "Worker threads; results do not depend on it")
        ->check(CLI::Range(1, 1024));
    const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
    sub->add_option("--format", opt.format, "csv or json")->transform(CLI::CheckedTransformer(formats));
}

template <class Fn> void with_output(const std::string &path, Fn &&fn)
{
    if (path.empty())
    {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot write '" + path + "'");
    fn(f);
    if (!f)
        throw Error("write to '" + path + "' failed");
}

int cmd_run(const Options &opt)
{
    const RunConfig cfg = load_config(opt.config);
    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < cfg.scenarios.size(); ++i)
    {
        RunConfig one = cfg;
        one.scenarios = {cfg.scenarios[i]};
        for (const Scenario &sc : one.expand())
            rows.push_back({i, sc, run_montecarlo(sc, opt.threads)});
    }
    with_output(opt.out, [&](std::ostream &o) { write_results(o, rows, opt.format); });
    return kOk;
}

int cmd_verify(const Options &opt, SweepMode mode)
{
    const RunConfig cfg = load_config(opt.config);
    const Scenario &sc = cfg.scenarios.front();
    const LemmaReport rep =
        verify_lemma(sc, mode, cfg.lemma.draws, cfg.lemma.grid_n, cfg.lemma.symbol_draws, opt.threads);
    if (!opt.out.empty())
        with_output(opt.out, [&](std::ostream &o) { write_grids(o, rep.grids, opt.format); });

    std::ostream &log = std::cout;
    for (std::size_t d = 0; d < rep.grids.size(); ++d)
    {
        const QGrid &g = rep.grids[d];
        log << "draw " << d << ": argmax (q11, q12) = (" << format_number(g.q11[g.argmax_i]) << ", "
            << format_number(g.q12[g.argmax_j]) << ")"
            << (g.argmax_near_center ? " centre" : "") << (g.argmax_on_boundary ? " boundary" : "") << '\n';
    }
    const bool pass = rep.pass();
    log << (mode == SweepMode::blp_mse ? "argmax within one cell of (0.5, 0)" : "argmax on the feasibility boundary")
        << " in " << rep.passes << " of " << rep.draws << " draws: " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kOk : kFail;
}

int cmd_sweep_q(const Options &opt)
{
    const RunConfig cfg = load_config(opt.config);
    const Scenario &sc = cfg.scenarios.front();
    const SweepMode mode = is_blp(sc.method) ? SweepMode::blp_mse : SweepMode::slp_power;
    const QGrid g = sweep_q_grid(sc, cfg.lemma.grid_n, mode, 0, cfg.lemma.symbol_draws);
    with_output(opt.out, [&](std::ostream &o) { write_grids(o, {g}, opt.format); });
    return kOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Downlink precoding under improper Gaussian jamming"};
    app.require_subcommand(1);
    Options opt;

    auto *run = app.add_subcommand("run", "Monte-Carlo run over every scenario and sweep point");
    add_common(run, opt, true);
    auto *lemma1 = app.add_subcommand("verify-lemma1", "Check that the BLP MSE peaks at circular jamming");
    add_common(lemma1, opt, true);
    auto *lemma2 = app.add_subcommand("verify-lemma2", "Check that the NC-SLP power peaks at rank-one jamming");
    add_common(lemma2, opt, true);
    auto *oracle = app.add_subcommand("oracle", "Cross-check kernels against brute-force references");
    add_common(oracle, opt, false);
    oracle->add_option("suite", opt.suite, "qp, ellipse, covariance or all")
        ->check(CLI::IsMember({"qp", "ellipse", "covariance", "all"}));
    auto *sweep = app.add_subcommand("sweep-q", "Grid of BLP MSE or SLP power over the jammer covariance");
    add_common(sweep, opt, true);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kConfig;
    }

    try
    {
        if (run->parsed())
            return cmd_run(opt);
        if (lemma1->parsed())
            return cmd_verify(opt, SweepMode::blp_mse);
        if (lemma2->parsed())
            return cmd_verify(opt, SweepMode::slp_power);
        if (sweep->parsed())
            return cmd_sweep_q(opt);
        if (oracle->parsed())
            return oracle::run_suite(opt.suite, std::cout) ? kOk : kFail;
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kRuntime;
}
