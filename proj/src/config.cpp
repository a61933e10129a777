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

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <variant>

namespace ncprec
{
namespace
{

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &v)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = v.find(',', start);
        out.push_back(trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

struct Location
{
    int line = 0;
    std::string key;

    [[noreturn]] void fail(const std::string &msg) const
    {
        throw ConfigError("line " + std::to_string(line) + (key.empty() ? "" : " (" + key + ")") + ": " + msg);
    }
};

double to_double(const std::string &s, const Location &loc)
{
    double v = 0.0;
    const char *first = s.data();
    const char *last = first + s.size();
    if (!s.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last || std::isnan(v))
        loc.fail("expected a number, got '" + s + "'");
    return v;
}

template <class Int> Int to_int(const std::string &s, const Location &loc)
{
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        loc.fail("expected an integer, got '" + s + "'");
    return v;
}

Method to_method(const std::string &s, const Location &loc)
{
    const auto m = parse_method(s);
    if (!m)
        loc.fail("unknown method '" + s + "'");
    return *m;
}

std::string_view robust_mode_name(RobustMode m)
{
    return m == RobustMode::conservative ? "conservative" : "per_direction";
}

void set_scenario_key(Scenario &sc, const std::string &value, const Location &loc)
{
    const std::string &key = loc.key;
    if (key == "m")
        sc.m = to_int<int>(value, loc);
    else if (key == "k")
        sc.k = to_int<int>(value, loc);
    else if (key == "d")
        sc.d = to_int<int>(value, loc);
    else if (key == "p_t_db")
        sc.p_t_db = to_double(value, loc);
    else if (key == "rho2_db")
        sc.rho2_db = to_double(value, loc);
    else if (key == "q")
    {
        try
        {
            sc.q = QSpec::parse(value);
        }
        catch (const ConfigError &e)
        {
            loc.fail(e.what());
        }
    }
    else if (key == "awgn_std")
        sc.awgn_std = to_double(value, loc);
    else if (key == "p")
        sc.p = to_double(value, loc);
    else if (key == "psi_db")
        sc.psi_db = to_double(value, loc);
    else if (key == "n_div")
        sc.n_div = to_int<int>(value, loc);
    else if (key == "trials")
        sc.trials = to_int<int>(value, loc);
    else if (key == "block_len")
        sc.block_len = to_int<int>(value, loc);
    else if (key == "seed")
        sc.seed = to_int<std::uint64_t>(value, loc);
    else if (key == "method")
        sc.method = to_method(value, loc);
    else if (key == "robust_mode")
    {
        if (value == "per_direction")
            sc.robust_mode = RobustMode::per_direction;
        else if (value == "conservative")
            sc.robust_mode = RobustMode::conservative;
        else
            loc.fail("robust_mode must be per_direction or conservative");
    }
    else
        loc.fail("unknown scenario key");
}

std::vector<double> numeric_axis(const std::string &value, const Location &loc)
{
    std::vector<double> out;
    for (const auto &item : split_list(value))
        out.push_back(to_double(item, loc));
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        loc.fail("duplicate sweep value");
    return out;
}

void set_sweep_key(SweepAxes &ax, const std::string &value, const Location &loc)
{
    const std::string &key = loc.key;
    if (trim(value).empty())
        loc.fail("sweep axis must not be empty");
    if (key == "method")
    {
        std::set<Method> seen;
        for (const auto &item : split_list(value))
        {
            const Method m = to_method(item, loc);
            if (!seen.insert(m).second)
                loc.fail("duplicate method");
            ax.method.push_back(m);
        }
    }
    else if (key == "rho2_db")
        ax.rho2_db = numeric_axis(value, loc);
    else if (key == "p_t_db")
        ax.p_t_db = numeric_axis(value, loc);
    else if (key == "awgn_std")
        ax.awgn_std = numeric_axis(value, loc);
    else if (key == "p")
        ax.p = numeric_axis(value, loc);
    else if (key == "psi_db")
        ax.psi_db = numeric_axis(value, loc);
    else
        loc.fail("unknown sweep axis");
}

void set_lemma_key(LemmaSettings &ls, const std::string &value, const Location &loc)
{
    if (loc.key == "grid_n")
        ls.grid_n = to_int<int>(value, loc);
    else if (loc.key == "draws")
        ls.draws = to_int<int>(value, loc);
    else if (loc.key == "symbol_draws")
        ls.symbol_draws = to_int<int>(value, loc);
    else
        loc.fail("unknown lemma key");
}

template <class T, class Set>
void apply_axis(std::vector<Scenario> &list, const std::vector<T> &axis, Set set)
{
    if (axis.empty())
        return;
    std::vector<Scenario> next;
    next.reserve(list.size() * axis.size());
    for (const Scenario &sc : list)
        for (const T &v : axis)
        {
            Scenario s = sc;
            set(s, v);
            next.push_back(s);
        }
    list = std::move(next);
}

using Cell = std::variant<double, std::int64_t, std::string, std::vector<double>>;

std::vector<Cell> row_cells(const ResultRow &r)
{
    const Scenario &s = r.scenario;
    const MetricsRecord &m = r.metrics;
    return {static_cast<std::int64_t>(r.scenario_index),
            std::int64_t{s.m},
            std::int64_t{s.k},
            std::int64_t{s.d},
            s.p_t_db,
            s.rho2_db,
            s.q.str(),
            s.awgn_std,
            s.p,
            s.psi_db,
            std::int64_t{s.n_div},
            std::int64_t{s.trials},
            std::int64_t{s.block_len},
            std::to_string(s.seed),
            std::string(method_name(s.method)),
            std::string(robust_mode_name(s.robust_mode)),
            m.worst_user_ser,
            m.worst_user_ser_se,
            m.ser,
            m.ser_se,
            m.ber,
            m.ber_se,
            m.worst_user_ber,
            m.worst_user_ber_se,
            m.bler,
            m.bler_se,
            m.avg_tx_power,
            m.avg_tx_power_se,
            m.throughput,
            m.throughput_se,
            m.ee,
            m.ee_se,
            m.symbol_errors,
            m.bit_errors,
            m.block_errors,
            m.infeasible_solves,
            m.ser_per_user};
}

std::string csv_escape(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell &c)
{
    struct Visitor
    {
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const std::string &v) const { return csv_escape(v); }
        std::string operator()(const std::vector<double> &v) const
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out += (i ? ";" : "") + format_number(v[i]);
            return out;
        }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json cell_json(const Cell &c)
{
    return std::visit([](const auto &v) { return nlohmann::ordered_json(v); }, c);
}

void write_table(std::ostream &out, const std::vector<std::string> &cols,
                 const std::vector<std::vector<Cell>> &rows, OutputFormat fmt)
{
    if (fmt == OutputFormat::csv)
    {
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << (i ? "," : "") << cols[i];
        out << '\n';
        for (const auto &row : rows)
        {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << cell_text(row[i]);
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &row : rows)
    {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            obj[cols[i]] = cell_json(row[i]);
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
}

} // namespace

std::vector<Scenario> RunConfig::expand() const
{
    std::vector<Scenario> out;
    for (const Scenario &base : scenarios)
    {
        std::vector<Scenario> list{base};
        apply_axis(list, sweep.method, [](Scenario &s, Method v) { s.method = v; });
        apply_axis(list, sweep.rho2_db, [](Scenario &s, double v) { s.rho2_db = v; });
        apply_axis(list, sweep.p_t_db, [](Scenario &s, double v) { s.p_t_db = v; });
        apply_axis(list, sweep.awgn_std, [](Scenario &s, double v) { s.awgn_std = v; });
        apply_axis(list, sweep.p, [](Scenario &s, double v) { s.p = v; });
        apply_axis(list, sweep.psi_db, [](Scenario &s, double v) { s.psi_db = v; });
        out.insert(out.end(), list.begin(), list.end());
    }
    return out;
}

RunConfig parse_config(std::istream &in)
{
    enum class Section
    {
        none,
        scenario,
        sweep,
        lemma
    };
    RunConfig cfg;
    Section section = Section::none;
    std::set<std::string> seen;
    std::set<std::string> seen_sections;
    std::string raw;
    Location loc;
    while (std::getline(in, raw))
    {
        ++loc.line;
        loc.key.clear();
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                loc.fail("malformed section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            seen.clear();
            if (name == "scenario")
            {
                section = Section::scenario;
                cfg.scenarios.emplace_back();
                continue;
            }
            if (!seen_sections.insert(name).second)
                loc.fail("section [" + name + "] given twice");
            if (name == "sweep")
                section = Section::sweep;
            else if (name == "lemma")
                section = Section::lemma;
            else
                loc.fail("unknown section [" + name + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            loc.fail("expected 'key = value'");
        loc.key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (loc.key.empty())
            loc.fail("missing key");
        if (!seen.insert(loc.key).second)
            loc.fail("key given twice in one section");
        switch (section)
        {
        case Section::none:
            loc.fail("key outside of any section");
        case Section::scenario:
            set_scenario_key(cfg.scenarios.back(), value, loc);
            break;
        case Section::sweep:
            set_sweep_key(cfg.sweep, value, loc);
            break;
        case Section::lemma:
            set_lemma_key(cfg.lemma, value, loc);
            break;
        }
    }
    if (cfg.scenarios.empty())
        throw ConfigError("config defines no [scenario] block");
    if (cfg.lemma.grid_n < 5 || cfg.lemma.draws < 1 || cfg.lemma.symbol_draws < 1)
        throw ConfigError("[lemma] needs grid_n >= 5, draws >= 1, symbol_draws >= 1");
    for (const Scenario &sc : cfg.expand())
    {
        try
        {
            sc.validate();
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError(std::string("invalid scenario: ") + e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    return parse_config(in);
}

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        return "nan";
    return std::string(buf, ptr);
}

const std::vector<std::string> &result_columns()
{
    static const std::vector<std::string> cols{
        "scenario",       "m",
        "k",              "d",
        "p_t_db",         "rho2_db",
        "q",              "awgn_std",
        "p",              "psi_db",
        "n_div",          "trials",
        "block_len",      "seed",
        "method",         "robust_mode",
        "worst_user_ser", "worst_user_ser_se",
        "ser",            "ser_se",
        "ber",            "ber_se",
        "worst_user_ber", "worst_user_ber_se",
        "bler",           "bler_se",
        "avg_tx_power",   "avg_tx_power_se",
        "throughput",     "throughput_se",
        "ee",             "ee_se",
        "symbol_errors",  "bit_errors",
        "block_errors",   "infeasible_solves",
        "ser_per_user"};
    return cols;
}

void write_results(std::ostream &out, const std::vector<ResultRow> &rows, OutputFormat fmt)
{
    std::vector<std::vector<Cell>> cells;
    cells.reserve(rows.size());
    for (const ResultRow &r : rows)
        cells.push_back(row_cells(r));
    write_table(out, result_columns(), cells, fmt);
}

void write_grids(std::ostream &out, const std::vector<QGrid> &grids, OutputFormat fmt)
{
    static const std::vector<std::string> cols{"draw", "i", "j", "q11", "q12", "value", "argmax"};
    std::vector<std::vector<Cell>> cells;
    for (std::size_t g = 0; g < grids.size(); ++g)
    {
        const QGrid &grid = grids[g];
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j)
            {
                if (!grid.feasible(i, j))
                    continue;
                const bool am = i == grid.argmax_i && j == grid.argmax_j;
                cells.push_back({static_cast<std::int64_t>(g), std::int64_t{i}, std::int64_t{j}, grid.q11[i],
                                 grid.q12[j], grid.value(i, j), std::int64_t{am}});
            }
    }
    write_table(out, cols, cells, fmt);
}

} // namespace ncprec
