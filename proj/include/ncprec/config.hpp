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

// Run configuration files and result tables.
//
// Grammar (line oriented, '#' starts a comment, blank lines ignored):
//     [scenario]          one block per base scenario, repeatable
//     key = value
//     [sweep]             optional axes, each a comma-separated list
//     key = v1, v2, ...
//     [lemma]             grid settings for verify-lemma1/2 and sweep-q
//     key = value

#include "ncprec/sim.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ncprec
{

struct SweepAxes
{
    std::vector<Method> method;
    std::vector<double> rho2_db;
    std::vector<double> p_t_db;
    std::vector<double> awgn_std;
    std::vector<double> p;
    std::vector<double> psi_db; // innermost axis
};

struct LemmaSettings
{
    int grid_n = 21;
    int draws = 100;
    int symbol_draws = 50;
};

struct RunConfig
{
    std::vector<Scenario> scenarios;
    SweepAxes sweep;
    LemmaSettings lemma;

    // Scenario x sweep-point expansion. Numeric axes ascend; psi_db varies fastest.
    std::vector<Scenario> expand() const;
};

RunConfig parse_config(std::istream &in);       // throws ConfigError
RunConfig load_config(const std::string &path); // throws ConfigError

// Shortest round-trip decimal, independent of the global locale.
std::string format_number(double v);

enum class OutputFormat
{
    csv,
    json
};

struct ResultRow
{
    std::size_t scenario_index = 0;
    Scenario scenario;
    MetricsRecord metrics;
};

// Column order of the results table.
const std::vector<std::string> &result_columns();

void write_results(std::ostream &out, const std::vector<ResultRow> &rows, OutputFormat fmt);
void write_grids(std::ostream &out, const std::vector<QGrid> &grids, OutputFormat fmt);

} // namespace ncprec
