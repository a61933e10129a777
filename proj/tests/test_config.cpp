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

#include "ncprec/config.hpp"
#include "ncprec/errors.hpp"

#include <catch_amalgamated.hpp>

#include <unistd.h>
#include <sys/wait.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace ncprec;
namespace fs = std::filesystem;

namespace
{

RunConfig parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in);
}

class TempDir
{
  public:
    TempDir() : path_(fs::temp_directory_path() / ("ncprec_test_config_" + std::to_string(::getpid())))
    {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path write(const std::string &name, const std::string &text) const
    {
        const fs::path p = path_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }
    const fs::path &path() const { return path_; }

  private:
    fs::path path_;
};

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(NCPREC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const char *kTiny = "[scenario]\n"
                    "m = 2\nk = 2\nd = 4\ntrials = 3\nblock_len = 10\nseed = 5\nmethod = pw_blp\n";

} // namespace

TEST_CASE("minimal scenario")
{
    const RunConfig cfg = parse(kTiny);
    REQUIRE(cfg.scenarios.size() == 1);
    const Scenario &sc = cfg.scenarios[0];
    CHECK(sc.m == 2);
    CHECK(sc.d == 4);
    CHECK(sc.method == Method::pw_blp);
    CHECK(sc.seed == 5);
    CHECK(cfg.expand().size() == 1);
    CHECK(cfg.lemma.grid_n == 21);
}

TEST_CASE("every scenario key is read")
{
    const RunConfig cfg = parse("# full example\n"
                                "[scenario]\n"
                                "m = 5   # antennas\n"
                                "k = 3\n"
                                "d = 8\n"
                                "p_t_db = 17.5\n"
                                "rho2_db = -inf\n"
                                "q = elements:0.7,0.1\n"
                                "awgn_std = 0.5\n"
                                "p = 0.9\n"
                                "psi_db = 3\n"
                                "n_div = 8\n"
                                "trials = 7\n"
                                "block_len = 11\n"
                                "seed = 18446744073709551615\n"
                                "method = robust_slp\n"
                                "robust_mode = conservative\n"
                                "\n"
                                "[lemma]\n"
                                "grid_n = 11\ndraws = 3\nsymbol_draws = 2\n");
    const Scenario &s = cfg.scenarios.at(0);
    CHECK(s.m == 5);
    CHECK(s.k == 3);
    CHECK(s.d == 8);
    CHECK(s.p_t_db == 17.5);
    CHECK(std::isinf(s.rho2_db));
    CHECK(s.q.kind == QSpec::Kind::elements);
    CHECK(s.q.q11 == 0.7);
    CHECK(s.awgn_std == 0.5);
    CHECK(s.p == 0.9);
    CHECK(s.psi_db == 3.0);
    CHECK(s.n_div == 8);
    CHECK(s.trials == 7);
    CHECK(s.block_len == 11);
    CHECK(s.seed == 18446744073709551615ULL);
    CHECK(s.method == Method::robust_slp);
    CHECK(s.robust_mode == RobustMode::conservative);
    CHECK(cfg.lemma.grid_n == 11);
    CHECK(cfg.lemma.draws == 3);
    CHECK(cfg.lemma.symbol_draws == 2);
}

TEST_CASE("malformed configurations are rejected")
{
    const char *bad[] = {
        "",                                                    // no scenario
        "m = 2\n",                                             // key outside a section
        "[scenario]\nm = 2\nm = 3\n",                          // duplicate key
        "[scenario]\nantennas = 2\n",                          // unknown key
        "[scenario]\n[results]\n",                             // unknown section
        "[scenario]\nm = two\n",                               // not a number
        "[scenario]\nm\n",                                     // no '='
        "[scenario]\nd = 3\n",                                 // invalid order
        "[scenario]\np = 1.5\n",                               // invalid confidence
        "[scenario]\nmethod = zf\n",                           // unknown method
        "[scenario]\nq = elements:0.9,0.4\n",                  // Q outside the disk
        "[scenario]\nrobust_mode = sometimes\n",               // unknown mode
        "[scenario]\n[sweep]\npsi_db = 1, 1\n",                // duplicate sweep value
        "[scenario]\n[sweep]\npsi_db =\n",                     // empty list
        "[scenario]\n[sweep]\nmethod = pw_blp\n[sweep]\n",     // repeated sweep
        "[scenario]\n[lemma]\ngrid_n = 5\n[lemma]\n",          // repeated lemma
        "[scenario]\n[sweep]\np = 0.5, 1.0\n",                 // sweep point invalid
        "[scenario\nm = 2\n",                                  // unterminated header
    };
    for (const char *text : bad)
    {
        INFO(text);
        CHECK_THROWS_AS(parse(text), ConfigError);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/ncprec.cfg"), ConfigError);
}

TEST_CASE("sweep expansion order")
{
    const RunConfig cfg = parse("[scenario]\nseed = 1\n[scenario]\nseed = 2\n"
                                "[sweep]\n"
                                "method = nc_slp, pw_blp\n"
                                "psi_db = 10, 0, 5\n"
                                "rho2_db = 20, 10\n");
    CHECK(cfg.sweep.psi_db == std::vector<double>{0, 5, 10});
    const std::vector<Scenario> all = cfg.expand();
    REQUIRE(all.size() == 2 * 2 * 2 * 3);
    // Scenario outermost, then method, rho2_db, ..., psi_db fastest.
    CHECK(all[0].seed == 1);
    CHECK(all[12].seed == 2);
    CHECK(all[0].method == Method::nc_slp);
    CHECK(all[6].method == Method::pw_blp);
    CHECK(all[0].rho2_db == 10.0);
    CHECK(all[3].rho2_db == 20.0);
    CHECK(all[0].psi_db == 0.0);
    CHECK(all[1].psi_db == 5.0);
    CHECK(all[2].psi_db == 10.0);
}

TEST_CASE("a five-point psi sweep produces five ascending rows")
{
    const RunConfig cfg = parse(std::string(kTiny) + "[sweep]\nmethod = nc_slp\npsi_db = 12, 0, 3, 9, 6\n");
    std::vector<ResultRow> rows;
    for (const Scenario &sc : cfg.expand())
        rows.push_back({0, sc, run_montecarlo(sc)});
    std::ostringstream csv;
    write_results(csv, rows, OutputFormat::csv);
    std::istringstream lines(csv.str());
    std::string header, line;
    std::getline(lines, header);
    CHECK(header.rfind("scenario,m,k,d,", 0) == 0);
    std::vector<double> psi;
    while (std::getline(lines, line))
    {
        std::istringstream fields(line);
        std::string f;
        for (int i = 0; i <= 9; ++i)
            std::getline(fields, f, ',');
        psi.push_back(std::stod(f));
    }
    CHECK(psi == std::vector<double>{0, 3, 6, 9, 12});
}

TEST_CASE("result tables")
{
    const RunConfig cfg = parse(kTiny);
    const std::vector<ResultRow> rows{{0, cfg.scenarios[0], run_montecarlo(cfg.scenarios[0])}};

    std::ostringstream csv;
    write_results(csv, rows, OutputFormat::csv);
    const std::string text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    std::string header = text.substr(0, text.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') + 1 == static_cast<long>(result_columns().size()));

    std::ostringstream json;
    write_results(json, rows, OutputFormat::json);
    const std::string js = json.str();
    CHECK(js.front() == '[');
    CHECK(js.find("\"worst_user_ser\"") != std::string::npos);
    CHECK(js.find("\"method\": \"pw_blp\"") != std::string::npos);
}

TEST_CASE("format_number round-trips")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(20.0) == "20");
    CHECK(format_number(-INFINITY) == "-inf");
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int t = 0; t < 1000; ++t)
    {
        const double v = t % 2 ? u(rng) : std::ldexp(u(rng), -40);
        const std::string s = format_number(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
}

TEST_CASE("command-line exit codes and reruns")
{
    TempDir dir;
    const fs::path good = dir.write("good.cfg", std::string(kTiny) + "[lemma]\ngrid_n = 7\ndraws = 2\nsymbol_draws = 2\n");
    const fs::path broken = dir.write("broken.cfg", "[scenario]\nd = 3\n");
    const std::string out1 = (dir.path() / "a.csv").string(), out2 = (dir.path() / "b.csv").string();

    CHECK(run_cli("run --config " + good.string() + " --out " + out1 + " --threads 1") == 0);
    CHECK(run_cli("run --config " + good.string() + " --out " + out2 + " --threads 3") == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK_FALSE(slurp(out1).empty());

    CHECK(run_cli("run --config " + broken.string()) == 2);
    CHECK(run_cli("run --config " + (dir.path() / "missing.cfg").string()) == 2);
    CHECK(run_cli("run --config " + good.string() + " --format xml") == 2);
    CHECK(run_cli("run --config " + good.string() + " --threads 0") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("run --config " + good.string() + " --out /nonexistent/dir/x.csv") == 1);
    CHECK(run_cli("sweep-q --config " + good.string() + " --format json --out " + out1) == 0);
    CHECK(slurp(out1).front() == '[');

    // Two draws with a one-cell tolerance on a 7-point grid: the BLP peak sits at the centre.
    CHECK(run_cli("verify-lemma1 --config " + good.string()) == 0);
    CHECK(run_cli("oracle qp") == 0);

    // Seeded SLP grids: seed 2 peaks on the boundary in every draw, seed 3 in none.
    auto lemma2 = [&](int seed) {
        const fs::path cfg = dir.write("l2_" + std::to_string(seed) + ".cfg",
                                       "[scenario]\nm = 3\nk = 3\np = 0.95\nseed = " + std::to_string(seed) +
                                           "\n[lemma]\ngrid_n = 11\ndraws = 3\nsymbol_draws = 20\n");
        return run_cli("verify-lemma2 --config " + cfg.string());
    };
    CHECK(lemma2(2) == 0);
    CHECK(lemma2(3) == 3);
}
