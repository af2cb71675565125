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

#include "risopt/harness.hpp"

#include "risopt/error.hpp"
#include "risopt/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace risopt {

namespace {

// Stream tags for child_seed.
constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kRandomConfigStream = 1;

struct Moments {
    double mean = 0.0;
    double se = 0.0;
};

Moments moments(const std::vector<double> &xs)
{
    Moments m;
    if (xs.empty())
        return m;
    double sum = 0.0;
    for (const double x : xs)
        sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (const double x : xs)
            ss += (x - m.mean) * (x - m.mean);
        const double var = ss / static_cast<double>(xs.size() - 1);
        m.se = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return m;
}

// Runs fn(i) for i in [0, n). Each index is written by exactly one worker, so the
// result does not depend on the thread count.
void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)> &fn)
{
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        for (std::int64_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::int64_t i = t; i < n; i += threads)
                        fn(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto &e : errors) {
        if (e)
            std::rethrow_exception(e);
    }
}

SystemParams at_power(const SystemParams &base, double power_dbm)
{
    SystemParams p = base;
    p.tx_power = units::dbm_to_watts(power_dbm);
    p.validate();
    return p;
}

// One channel draw prepared for optimization; empty when the instance is infeasible.
struct Instance {
    ChannelRealization ch;
    CascadedChannel cc;
    DerivedConstants dc;
};

std::optional<Instance> make_instance(const SystemParams &params, std::uint64_t seed)
{
    Instance inst;
    inst.ch = sample(params, seed);
    inst.cc = cascade(inst.ch);
    try {
        inst.dc = derive_constants(params, inst.ch.feedback, inst.cc.alpha_max());
    } catch (const InfeasibleError &) {
        return std::nullopt;
    } catch (const DegenerateChannelError &) {
        return std::nullopt;
    } catch (const DomainError &) {
        return std::nullopt;
    }
    return inst;
}

void check_skips(const ExperimentSpec &spec, double power_dbm, std::int64_t skipped)
{
    if (static_cast<double>(skipped) > spec.max_skip_fraction * static_cast<double>(spec.n_realizations)) {
        std::ostringstream msg;
        msg << "aborting: " << skipped << " of " << spec.n_realizations << " realizations at " << power_dbm
            << " dBm are infeasible (limit " << spec.max_skip_fraction * 100.0 << "%)";
        throw InfeasibleRunError(msg.str());
    }
}

struct Outcome {
    double rate = 0.0;
    double ee = 0.0;
    double n = 0.0;
};

} // namespace

std::string_view to_string(Scheme scheme)
{
    switch (scheme) {
    case Scheme::optimal_both: return "a";
    case Scheme::random_n_optimal_phase: return "b";
    case Scheme::random_both: return "c";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text)
{
    if (text == "a")
        return Scheme::optimal_both;
    if (text == "b")
        return Scheme::random_n_optimal_phase;
    if (text == "c")
        return Scheme::random_both;
    return std::nullopt;
}

void ExperimentSpec::validate() const
{
    if (power_sweep_dbm.empty())
        throw DomainError("power sweep is empty");
    if (n_realizations < 1)
        throw DomainError("n_realizations must be at least 1");
    if (objectives.empty())
        throw DomainError("no objectives requested");
    for (const auto kind : objectives) {
        if (kind == ObjectiveKind::trade_off)
            throw DomainError("sweep objectives are rate and ee; use pareto_experiment for the trade-off");
    }
    if (!(max_skip_fraction >= 0.0))
        throw DomainError("max_skip_fraction must be non-negative");
    params.validate();
}

RandomConfigOutcome random_configuration(const ChannelRealization &ch, const CascadedChannel &cc,
                                         const DerivedConstants &dc, const SystemParams &params, Rng &rng,
                                         bool random_phases)
{
    RandomConfigOutcome out;
    out.n = rng.uniform_int(1, dc.max_active);
    if (!random_phases) {
        out.rate = rate(cc, out.n, dc, params.bandwidth);
        out.power = total_power(out.n, dc);
    } else {
        PhaseConfig cfg;
        cfg.elements.resize(static_cast<std::size_t>(out.n));
        cfg.phases.resize(cfg.elements.size());
        for (std::size_t k = 0; k < cfg.elements.size(); ++k) {
            cfg.elements[k] = k;
            cfg.phases[k] = 2.0 * std::numbers::pi * rng.uniform();
        }
        const double gain = composite_gain(ch, cfg);
        // Nothing is reported to the surface and a single pilot is sent.
        out.rate = dc.frame_fraction * params.bandwidth * std::log1p(dc.snr_scale * gain * gain) / std::numbers::ln2;
        out.power = dc.power_intercept + params.element_power * static_cast<double>(out.n);
    }
    out.ee = out.rate / out.power;
    return out;
}

AggregateResult run_scheme(const ExperimentSpec &spec)
{
    spec.validate();
    const std::size_t n_obj = spec.objectives.size();
    const auto n_real = static_cast<std::size_t>(spec.n_realizations);

    AggregateResult result;
    for (std::size_t pi = 0; pi < spec.power_sweep_dbm.size(); ++pi) {
        const double power_dbm = spec.power_sweep_dbm[pi];
        const SystemParams params = at_power(spec.params, power_dbm);

        // slots[r * n_obj + k]
        std::vector<Outcome> slots(n_real * n_obj);
        std::vector<char> kept(n_real, 0);

        parallel_for(spec.n_realizations, spec.threads, [&](std::int64_t r) {
            const auto ri = static_cast<std::uint64_t>(r);
            const auto inst = make_instance(params, child_seed(spec.master_seed, ri, pi, kChannelStream));
            if (!inst)
                return;
            kept[static_cast<std::size_t>(r)] = 1;
            Outcome *row = &slots[static_cast<std::size_t>(r) * n_obj];

            if (spec.scheme == Scheme::optimal_both) {
                for (std::size_t k = 0; k < n_obj; ++k) {
                    const Objective obj = spec.objectives[k] == ObjectiveKind::rate ? Objective::rate()
                                                                                    : Objective::energy_efficiency();
                    const auto res = optimize(inst->cc, inst->dc, obj, params.bandwidth, spec.optimizer);
                    row[k] = {res.metrics.rate, res.metrics.ee, static_cast<double>(res.n_star)};
                }
            } else {
                Rng rng(child_seed(spec.master_seed, ri, pi, kRandomConfigStream));
                const auto o = random_configuration(inst->ch, inst->cc, inst->dc, params, rng,
                                                    spec.scheme == Scheme::random_both);
                for (std::size_t k = 0; k < n_obj; ++k)
                    row[k] = {o.rate, o.ee, static_cast<double>(o.n)};
            }
        });

        const auto n_kept = static_cast<std::int64_t>(std::count(kept.begin(), kept.end(), 1));
        const std::int64_t skipped = spec.n_realizations - n_kept;
        check_skips(spec, power_dbm, skipped);

        for (std::size_t k = 0; k < n_obj; ++k) {
            std::vector<double> rates, ees, ns;
            rates.reserve(n_real);
            ees.reserve(n_real);
            ns.reserve(n_real);
            for (std::size_t r = 0; r < n_real; ++r) {
                if (!kept[r])
                    continue;
                const Outcome &o = slots[r * n_obj + k];
                rates.push_back(o.rate);
                ees.push_back(o.ee);
                ns.push_back(o.n);
            }
            const auto mr = moments(rates);
            const auto me = moments(ees);
            const auto mn = moments(ns);
            result.rows.push_back({power_dbm, spec.scheme, spec.objectives[k], mr.mean, mr.se, me.mean, me.se,
                                   mn.mean, mn.se, spec.n_realizations, skipped});
        }
    }
    return result;
}

std::vector<MaximizerRow> table_maximizers(const ExperimentSpec &spec)
{
    ExperimentSpec s = spec;
    s.scheme = Scheme::optimal_both;
    s.objectives = {ObjectiveKind::rate, ObjectiveKind::energy_efficiency};
    const auto agg = run_scheme(s);

    std::vector<MaximizerRow> out;
    for (std::size_t i = 0; i + 1 < agg.rows.size(); i += 2) {
        const auto &r = agg.rows[i];
        const auto &e = agg.rows[i + 1];
        out.push_back({r.power_dbm, r.mean_n_star, r.se_n_star, e.mean_n_star, e.se_n_star, r.n_realizations,
                       r.n_skipped});
    }
    return out;
}

std::vector<ParetoRow> pareto_experiment(const ExperimentSpec &spec)
{
    spec.validate();
    if (spec.weights.empty())
        throw DomainError("weight grid is empty");
    if (spec.element_power_dbm.empty())
        throw DomainError("no element power levels requested");
    const std::size_t n_w = spec.weights.size();
    const auto n_real = static_cast<std::size_t>(spec.n_realizations);

    std::vector<ParetoRow> out;
    for (std::size_t pi = 0; pi < spec.power_sweep_dbm.size(); ++pi) {
        const double power_dbm = spec.power_sweep_dbm[pi];
        for (const double pcn_dbm : spec.element_power_dbm) {
            SystemParams params = spec.params;
            params.element_power = units::dbm_to_watts(pcn_dbm);
            params = at_power(params, power_dbm);

            std::vector<ParetoPoint> slots(n_real * n_w);
            std::vector<char> kept(n_real, 0);
            parallel_for(spec.n_realizations, spec.threads, [&](std::int64_t r) {
                // Same channel stream as the sweep, so both experiments see identical draws.
                const auto inst = make_instance(
                    params, child_seed(spec.master_seed, static_cast<std::uint64_t>(r), pi, kChannelStream));
                if (!inst)
                    return;
                const auto curve = tradeoff_curve(inst->cc, inst->dc, params.bandwidth, spec.weights, spec.optimizer);
                std::copy(curve.begin(), curve.end(), slots.begin() + static_cast<std::ptrdiff_t>(r * n_w));
                kept[static_cast<std::size_t>(r)] = 1;
            });

            const auto n_kept = static_cast<std::int64_t>(std::count(kept.begin(), kept.end(), 1));
            check_skips(spec, power_dbm, spec.n_realizations - n_kept);

            for (std::size_t j = 0; j < n_w; ++j) {
                double sum_rate = 0.0;
                double sum_ee = 0.0;
                for (std::size_t r = 0; r < n_real; ++r) {
                    if (!kept[r])
                        continue;
                    sum_rate += slots[r * n_w + j].rate;
                    sum_ee += slots[r * n_w + j].ee;
                }
                const double denom = static_cast<double>(std::max<std::int64_t>(n_kept, 1));
                out.push_back({power_dbm, pcn_dbm, spec.weights[j], sum_rate / denom, sum_ee / denom});
            }
        }
    }
    return out;
}

std::string format_number(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_scheme_csv(std::ostream &out, const std::vector<SchemeRow> &rows)
{
    out << "power_dbm,scheme,objective,mean_rate_bps,se_rate,mean_ee_bpj,se_ee,mean_n_star,se_n_star,"
           "n_realizations,n_skipped\n";
    for (const auto &r : rows) {
        out << format_number(r.power_dbm) << ',' << to_string(r.scheme) << ',' << to_string(r.objective) << ','
            << format_number(r.mean_rate) << ',' << format_number(r.se_rate) << ',' << format_number(r.mean_ee)
            << ',' << format_number(r.se_ee) << ',' << format_number(r.mean_n_star) << ','
            << format_number(r.se_n_star) << ',' << r.n_realizations << ',' << r.n_skipped << '\n';
    }
}

void write_scheme_json(std::ostream &out, const std::vector<SchemeRow> &rows)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        arr.push_back({{"power_dbm", r.power_dbm},
                       {"scheme", to_string(r.scheme)},
                       {"objective", to_string(r.objective)},
                       {"mean_rate_bps", r.mean_rate},
                       {"se_rate", r.se_rate},
                       {"mean_ee_bpj", r.mean_ee},
                       {"se_ee", r.se_ee},
                       {"mean_n_star", r.mean_n_star},
                       {"se_n_star", r.se_n_star},
                       {"n_realizations", r.n_realizations},
                       {"n_skipped", r.n_skipped}});
    }
    out << arr.dump(2) << '\n';
}

void write_pareto_csv(std::ostream &out, const std::vector<ParetoRow> &rows)
{
    out << "power_dbm,p_cn_dbm,w,mean_rate_bps,mean_ee_bpj\n";
    for (const auto &r : rows) {
        out << format_number(r.power_dbm) << ',' << format_number(r.element_power_dbm) << ','
            << format_number(r.w) << ',' << format_number(r.mean_rate) << ',' << format_number(r.mean_ee) << '\n';
    }
}

void write_pareto_json(std::ostream &out, const std::vector<ParetoRow> &rows)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        arr.push_back({{"power_dbm", r.power_dbm},
                       {"p_cn_dbm", r.element_power_dbm},
                       {"w", r.w},
                       {"mean_rate_bps", r.mean_rate},
                       {"mean_ee_bpj", r.mean_ee}});
    }
    out << arr.dump(2) << '\n';
}

void write_maximizer_csv(std::ostream &out, const std::vector<MaximizerRow> &rows)
{
    out << "power_dbm,mean_n_rate,se_n_rate,mean_n_ee,se_n_ee,n_realizations,n_skipped\n";
    for (const auto &r : rows) {
        out << format_number(r.power_dbm) << ',' << format_number(r.mean_n_rate) << ','
            << format_number(r.se_n_rate) << ',' << format_number(r.mean_n_ee) << ',' << format_number(r.se_n_ee)
            << ',' << r.n_realizations << ',' << r.n_skipped << '\n';
    }
}

} // namespace risopt
