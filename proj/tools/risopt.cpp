// SPDX-License-Identifier: Apache-2.0
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

// risopt: optimize / sweep / pareto / validate.
//
// Exit codes: 0 success, 1 check failures or internal error, 2 configuration error,
// 3 infeasible instance or run.

#include "risopt/channel.hpp"
#include "risopt/error.hpp"
#include "risopt/harness.hpp"
#include "risopt/model.hpp"
#include "risopt/optimizer.hpp"
#include "risopt/units.hpp"
#include "risopt/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct CommonOptions {
    std::string config;
    std::uint64_t seed = 42;
    std::int64_t realizations = 10'000;
    std::vector<double> powers_dbm;
    std::string out;
    std::string format = "csv";
    unsigned threads = 1;
};

risopt::SystemParams load_params(const std::string &path)
{
    if (path.empty())
        return risopt::reference_params();
    return risopt::from_config(risopt::load_config_file(path));
}

// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const std::string &path, Fn &&write)
{
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw risopt::ConfigError("cannot open output file '" + path + "'");
    write(f);
}

std::optional<risopt::ObjectiveKind> parse_objective(const std::string &s)
{
    if (s == "rate")
        return risopt::ObjectiveKind::rate;
    if (s == "ee")
        return risopt::ObjectiveKind::energy_efficiency;
    return std::nullopt;
}

void print_result_text(std::ostream &os, const risopt::OptimizationResult &r, const std::string &objective)
{
    os << "objective: " << objective << '\n'
       << "method: " << risopt::to_string(r.method) << '\n'
       << "n_star: " << r.n_star << '\n'
       << "value: " << risopt::format_number(r.value) << '\n'
       << "rate_bps: " << risopt::format_number(r.metrics.rate) << '\n'
       << "power_w: " << risopt::format_number(r.metrics.power) << '\n'
       << "ee_bpj: " << risopt::format_number(r.metrics.ee) << '\n'
       << "assumption_ok: " << (r.assumption_ok ? "true" : "false") << '\n'
       << "evaluations: " << r.trace.size() << '\n'
       << "phases:\n";
    for (std::size_t k = 0; k < r.phases.elements.size(); ++k)
        os << "  " << r.phases.elements[k] << ' ' << risopt::format_number(r.phases.phases[k]) << '\n';
}

nlohmann::ordered_json result_json(const risopt::OptimizationResult &r, const std::string &objective)
{
    nlohmann::ordered_json j;
    j["objective"] = objective;
    j["method"] = risopt::to_string(r.method);
    j["n_star"] = r.n_star;
    j["value"] = r.value;
    j["rate_bps"] = r.metrics.rate;
    j["power_w"] = r.metrics.power;
    j["ee_bpj"] = r.metrics.ee;
    j["assumption_ok"] = r.assumption_ok;
    auto trace = nlohmann::ordered_json::array();
    for (const auto &t : r.trace)
        trace.push_back({t.n, t.value});
    j["trace"] = trace;
    j["elements"] = r.phases.elements;
    j["phases"] = r.phases.phases;
    return j;
}

int run_optimize(const CommonOptions &opt, const std::string &objective, const std::string &channel_in,
                 const std::string &channel_out)
{
    auto params = load_params(opt.config);
    if (opt.powers_dbm.size() > 1)
        throw risopt::ConfigError("optimize takes a single --powers-dbm value");
    if (!opt.powers_dbm.empty()) {
        params.tx_power = risopt::units::dbm_to_watts(opt.powers_dbm.front());
        params.validate();
    }

    risopt::ChannelRealization ch;
    if (!channel_in.empty()) {
        std::ifstream f(channel_in);
        if (!f)
            throw risopt::ConfigError("cannot open channel record '" + channel_in + "'");
        ch = risopt::read_realization(f);
    } else {
        ch = risopt::sample(params, risopt::child_seed(opt.seed, 0, 0));
    }
    if (!channel_out.empty()) {
        std::ofstream f(channel_out);
        risopt::write_realization(f, ch);
    }

    const auto cc = risopt::cascade(ch);
    const auto dc = risopt::derive_constants(params, ch.feedback, cc.alpha_max());

    if (objective == "pareto") {
        const auto weights = risopt::default_weight_grid();
        const auto points = risopt::pareto_sweep(cc, dc, params.bandwidth, weights);
        emit(opt.out, [&](std::ostream &os) {
            if (opt.format == "json") {
                auto arr = nlohmann::ordered_json::array();
                for (const auto &p : points)
                    arr.push_back({{"w", p.w}, {"n_star", p.n_star}, {"rate_bps", p.rate}, {"ee_bpj", p.ee}});
                os << arr.dump(2) << '\n';
            } else {
                os << "w,n_star,rate_bps,ee_bpj\n";
                for (const auto &p : points)
                    os << risopt::format_number(p.w) << ',' << p.n_star << ',' << risopt::format_number(p.rate)
                       << ',' << risopt::format_number(p.ee) << '\n';
            }
        });
        return 0;
    }

    const auto kind = parse_objective(objective);
    if (!kind)
        throw risopt::ConfigError("unknown objective '" + objective + "'");
    const auto obj = *kind == risopt::ObjectiveKind::rate ? risopt::Objective::rate()
                                                          : risopt::Objective::energy_efficiency();
    const auto res = risopt::optimize(cc, dc, obj, params.bandwidth);
    emit(opt.out, [&](std::ostream &os) {
        if (opt.format == "json")
            os << result_json(res, objective).dump(2) << '\n';
        else
            print_result_text(os, res, objective);
    });
    return 0;
}

int run_sweep(const CommonOptions &opt, const std::vector<std::string> &schemes, const std::string &objective)
{
    risopt::ExperimentSpec spec;
    spec.params = load_params(opt.config);
    spec.master_seed = opt.seed;
    spec.n_realizations = opt.realizations;
    spec.threads = opt.threads;
    if (!opt.powers_dbm.empty())
        spec.power_sweep_dbm = opt.powers_dbm;
    if (objective == "pareto")
        throw risopt::ConfigError("use the 'pareto' command for the trade-off experiment");
    if (!objective.empty()) {
        const auto kind = parse_objective(objective);
        if (!kind)
            throw risopt::ConfigError("unknown objective '" + objective + "'");
        spec.objectives = {*kind};
    }

    std::vector<risopt::SchemeRow> rows;
    for (const auto &s : schemes) {
        const auto scheme = risopt::parse_scheme(s);
        if (!scheme)
            throw risopt::ConfigError("unknown scheme '" + s + "'");
        spec.scheme = *scheme;
        const auto agg = risopt::run_scheme(spec);
        rows.insert(rows.end(), agg.rows.begin(), agg.rows.end());
    }
    emit(opt.out, [&](std::ostream &os) {
        if (opt.format == "json")
            risopt::write_scheme_json(os, rows);
        else
            risopt::write_scheme_csv(os, rows);
    });
    return 0;
}

int run_pareto(const CommonOptions &opt, const std::vector<double> &pcn_dbm)
{
    risopt::ExperimentSpec spec;
    spec.params = load_params(opt.config);
    spec.master_seed = opt.seed;
    spec.n_realizations = opt.realizations;
    spec.threads = opt.threads;
    spec.power_sweep_dbm = opt.powers_dbm.empty() ? std::vector<double>{20.0, 30.0, 40.0} : opt.powers_dbm;
    spec.element_power_dbm = pcn_dbm;
    const auto rows = risopt::pareto_experiment(spec);
    emit(opt.out, [&](std::ostream &os) {
        if (opt.format == "json")
            risopt::write_pareto_json(os, rows);
        else
            risopt::write_pareto_csv(os, rows);
    });
    return 0;
}

int run_validate(const CommonOptions &opt)
{
    const auto report = risopt::run_validation(opt.realizations, opt.seed);
    emit(opt.out, [&](std::ostream &os) {
        for (const auto &c : report.checks)
            os << (c.failed == 0 ? "PASS " : "FAIL ") << c.name << " passed=" << c.passed << " failed=" << c.failed
               << '\n';
        for (const auto &f : report.failures)
            os << "  " << f << '\n';
    });
    return report.ok() ? 0 : kExitChecksFailed;
}

void add_common(CLI::App *cmd, CommonOptions &opt, bool experiment)
{
    cmd->add_option("--config", opt.config, "Parameter file (key = value); defaults to the reference scenario");
    cmd->add_option("--seed", opt.seed, "Master seed");
    cmd->add_option("--out", opt.out, "Output path (stdout when omitted)");
    if (experiment) {
        cmd->add_option("--realizations", opt.realizations, "Channel realizations per power point")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--threads", opt.threads, "Worker threads; output does not depend on it")
            ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--powers-dbm", opt.powers_dbm, "Transmit powers in dBm, comma separated")->delimiter(',');
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Element-count and phase optimization for RIS-assisted links"};
    app.require_subcommand(1);

    CommonOptions opt;

    std::string objective_opt = "rate";
    std::string channel_in, channel_out;
    auto *optimize = app.add_subcommand("optimize", "Optimize one channel realization");
    add_common(optimize, opt, false);
    optimize->add_option("--objective", objective_opt, "rate | ee | pareto")
        ->check(CLI::IsMember({"rate", "ee", "pareto"}));
    optimize->add_option("--format", opt.format, "text | json")->check(CLI::IsMember({"text", "json"}));
    optimize->add_option("--channel", channel_in, "Read the realization from a channel record");
    optimize->add_option("--export-channel", channel_out, "Write the realization as a channel record");

    std::vector<std::string> schemes{"a", "b", "c"};
    std::string sweep_objective;
    auto *sweep = app.add_subcommand("sweep", "Scheme comparison and average maximizers over a power sweep");
    add_common(sweep, opt, true);
    sweep->add_option("--scheme", schemes, "a | b | c (repeatable, comma separated); all when omitted")
        ->delimiter(',')
        ->check(CLI::IsMember({"a", "b", "c"}));
    sweep->add_option("--objective", sweep_objective, "rate | ee (both when omitted)")
        ->check(CLI::IsMember({"rate", "ee", "pareto"}));
    sweep->add_option("--format", opt.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    std::vector<double> pcn_dbm{10.0, 15.0};
    auto *pareto = app.add_subcommand("pareto", "Averaged rate-EE trade-off curves");
    add_common(pareto, opt, true);
    pareto->add_option("--pcn-dbm", pcn_dbm, "Per-element hardware powers in dBm")->delimiter(',');
    pareto->add_option("--format", opt.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    auto *validate = app.add_subcommand("validate", "Greedy-vs-exhaustive agreement on random instances");
    validate->add_option("--seed", opt.seed, "Instance generator seed");
    validate->add_option("--realizations", opt.realizations, "Number of random instances")
        ->check(CLI::PositiveNumber);
    validate->add_option("--out", opt.out, "Output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*optimize)
            return run_optimize(opt, objective_opt, channel_in, channel_out);
        if (*sweep)
            return run_sweep(opt, schemes, sweep_objective);
        if (*pareto)
            return run_pareto(opt, pcn_dbm);
        if (*validate) {
            if (validate->count("--realizations") == 0)
                opt.realizations = 1000;
            return run_validate(opt);
        }
    } catch (const risopt::ConfigError &e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const risopt::ValidationError &e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const risopt::InfeasibleRunError &e) {
        std::cerr << e.what() << '\n';
        return kExitInfeasible;
    } catch (const risopt::InfeasibleError &e) {
        std::cerr << e.what() << '\n';
        return kExitInfeasible;
    } catch (const risopt::DomainError &e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitChecksFailed;
    }
    return 0;
}
