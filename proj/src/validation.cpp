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

#include "risopt/validation.hpp"

#include "risopt/objectives.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace risopt {

namespace {

constexpr std::size_t kMaxFailureNotes = 20;
constexpr double kValueTolerance = 1e-12;
constexpr std::array<double, 5> kWeights{0.1, 0.3, 0.5, 0.7, 0.9};

double log_uniform(Rng &rng, double lo_exp, double hi_exp)
{
    return std::pow(10.0, lo_exp + (hi_exp - lo_exp) * rng.uniform());
}

bool close(double a, double b)
{
    return std::abs(a - b) <= kValueTolerance * std::max({std::abs(a), std::abs(b), 1e-300});
}

} // namespace

ValidationInstance random_instance(Rng &rng, std::int64_t min_n, std::int64_t max_n)
{
    for (;;) {
        ValidationInstance inst;
        SystemParams p;
        p.max_elements = rng.uniform_int(min_n, max_n);
        p.rice_los_ratio = 8.0 * rng.uniform();
        inst.ch = sample(p, rng.next());
        inst.cc = cascade(inst.ch);

        const double a = inst.cc.alpha_max();
        if (!(a > 0.0))
            continue;

        DerivedConstants &dc = inst.dc;
        dc.snr_scale = log_uniform(rng, 0.0, 6.0) / (a * a);
        const double pilot_share = log_uniform(rng, -4.0, -1.5);
        dc.frame_fraction = 1.0 - pilot_share;
        // Aim the frame cap anywhere from the minimum up to a few times the hardware size.
        const double target_cap = log_uniform(rng, std::log10(static_cast<double>(min_n)),
                                              std::log10(4.0 * static_cast<double>(p.max_elements)));
        dc.overhead_slope = std::max(dc.frame_fraction / (target_cap + rng.uniform()), 1.01 * pilot_share);
        dc.feedback_slot_time = dc.overhead_slope - pilot_share; // frame of 1 s
        dc.power_intercept = log_uniform(rng, -1.0, 2.0);
        dc.power_slope = dc.power_intercept * log_uniform(rng, -4.0, 0.0);
        dc.physical_cap = std::numeric_limits<std::int32_t>::max();
        dc.frame_cap = static_cast<std::int64_t>(std::floor(dc.frame_fraction / dc.overhead_slope));
        dc.max_active = std::min({p.max_elements, dc.physical_cap, dc.frame_cap});
        if (dc.max_active < min_n || dc.max_active > max_n)
            continue;
        inst.bandwidth = log_uniform(rng, 5.0, 7.0);
        return inst;
    }
}

std::int64_t unimodality_violation(std::span<const TracePoint> trace)
{
    bool decreased = false;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace[i].value < trace[i - 1].value)
            decreased = true;
        else if (decreased && trace[i].value > trace[i - 1].value)
            return static_cast<std::int64_t>(i);
    }
    return -1;
}

double min_increment_slack(const CascadedChannel &cc, const DerivedConstants &dc)
{
    double worst = std::numeric_limits<double>::infinity();
    for (std::int64_t n = 1; n + 2 <= dc.max_active; ++n) {
        const double f0 = spectral_gain(cc, n, dc.snr_scale);
        const double f1 = spectral_gain(cc, n + 1, dc.snr_scale);
        const double f2 = spectral_gain(cc, n + 2, dc.snr_scale);
        const double first = f1 - f0;
        const double second = f2 - f1;
        const double scale = std::max({std::abs(first), std::abs(second), 1e-300});
        worst = std::min(worst, (first - second) / scale);
    }
    return worst;
}

bool ValidationReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckCount &c) { return c.failed == 0; });
}

ValidationReport run_validation(std::int64_t n_instances, std::uint64_t seed)
{
    ValidationReport report;
    report.checks = {{"oracle_rate"},       {"oracle_ee"},          {"oracle_tradeoff"},
                     {"unimodal_rate"},     {"unimodal_ee"},        {"unimodal_tradeoff"},
                     {"increment_concavity"}, {"early_stop"}};
    auto tally = [&](std::size_t idx, bool pass, std::int64_t instance, const std::string &detail) {
        auto &c = report.checks[idx];
        if (pass) {
            ++c.passed;
            return;
        }
        ++c.failed;
        if (report.failures.size() < kMaxFailureNotes) {
            std::ostringstream msg;
            msg << c.name << " failed on instance " << instance << ": " << detail;
            report.failures.push_back(msg.str());
        }
    };

    Rng rng(seed);
    for (std::int64_t i = 0; i < n_instances; ++i) {
        const ValidationInstance inst = random_instance(rng);
        const auto &cc = inst.cc;
        const auto &dc = inst.dc;
        const double bw = inst.bandwidth;

        auto audit = [&](const Objective &obj, std::size_t oracle_idx, std::size_t unimodal_idx) {
            const auto g = greedy(cc, dc, obj, bw);
            const auto b = brute_force(cc, dc, obj, bw);
            std::ostringstream detail;
            detail << "greedy N=" << g.n_star << " exhaustive N=" << b.n_star << " (max_active " << dc.max_active
                   << ")";
            tally(oracle_idx, g.n_star == b.n_star && close(g.value, b.value), i, detail.str());
            const auto at = unimodality_violation(b.trace);
            tally(unimodal_idx, at < 0, i, "trace increases again at N=" + std::to_string(at + 1));
            const bool early = static_cast<std::int64_t>(g.trace.size()) <= g.n_star + 1 &&
                               g.trace.back().n <= g.n_star + 1;
            tally(7, early, i, "greedy evaluated past its stopping point");
            return b;
        };

        // Trade-off anchors come from the exhaustive results.
        const auto r = audit(Objective::rate(), 0, 3);
        const auto e = audit(Objective::energy_efficiency(), 1, 4);
        for (const double w : kWeights)
            audit(Objective::trade_off(w, r.value, e.value), 2, 5);

        const double slack = min_increment_slack(cc, dc);
        tally(6, slack >= kConcavitySlack, i, "relative slack " + std::to_string(slack));
    }
    return report;
}

} // namespace risopt
