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

#include "risopt/optimizer.hpp"

#include "risopt/error.hpp"

#include <algorithm>
#include <string>

namespace risopt {

namespace {

std::int64_t search_limit(const CascadedChannel &cc, const DerivedConstants &dc)
{
    if (dc.max_active < 1)
        throw InfeasibleError("no admissible element count (max_active < 1)");
    if (static_cast<std::size_t>(dc.max_active) > cc.size())
        throw DomainError("max_active " + std::to_string(dc.max_active) + " exceeds the " +
                          std::to_string(cc.size()) + " available elements");
    return dc.max_active;
}

void finish(OptimizationResult &res, const CascadedChannel &cc, const DerivedConstants &dc, double bandwidth,
            const Objective &obj)
{
    res.metrics = evaluate(cc, res.n_star, dc, bandwidth, obj);
    res.value = res.metrics.value;
    res.phases = optimal_phases(cc, res.n_star);
    res.assumption_ok = check_assumption(cc, dc).ok;
}

} // namespace

std::string_view to_string(SearchMethod method)
{
    return method == SearchMethod::greedy ? "greedy" : "brute_force";
}

AssumptionCheck check_assumption(const CascadedChannel &cc, const DerivedConstants &dc)
{
    AssumptionCheck out;
    const double a = cc.size() == 0 ? 0.0 : cc.alpha_max();
    out.peak_snr = dc.snr_scale * a * a;
    out.margin = out.peak_snr - 1.0;
    out.ok = out.peak_snr >= 1.0;
    return out;
}

OptimizationResult greedy(const CascadedChannel &cc, const DerivedConstants &dc, const Objective &obj,
                          double bandwidth)
{
    const std::int64_t limit = search_limit(cc, dc);

    OptimizationResult res;
    res.method = SearchMethod::greedy;
    std::int64_t n = 1;
    double current = evaluate(cc, n, dc, bandwidth, obj).value;
    res.trace.push_back({n, current});
    while (n < limit) {
        const double next = evaluate(cc, n + 1, dc, bandwidth, obj).value;
        res.trace.push_back({n + 1, next});
        if (next < current)
            break;
        ++n;
        current = next;
    }
    res.n_star = n;
    finish(res, cc, dc, bandwidth, obj);
    return res;
}

OptimizationResult brute_force(const CascadedChannel &cc, const DerivedConstants &dc, const Objective &obj,
                               double bandwidth, std::int64_t cap)
{
    const std::int64_t limit = search_limit(cc, dc);
    if (limit > cap)
        throw OracleCapError("exhaustive search over " + std::to_string(limit) + " candidates exceeds the cap of " +
                             std::to_string(cap));

    OptimizationResult res;
    res.method = SearchMethod::brute_force;
    res.trace.reserve(static_cast<std::size_t>(limit));
    std::int64_t best_n = 1;
    double best = 0.0;
    for (std::int64_t n = 1; n <= limit; ++n) {
        const double v = evaluate(cc, n, dc, bandwidth, obj).value;
        res.trace.push_back({n, v});
        if (n == 1 || v > best) {
            best = v;
            best_n = n;
        }
    }
    res.n_star = best_n;
    finish(res, cc, dc, bandwidth, obj);
    return res;
}

OptimizationResult optimize(const CascadedChannel &cc, const DerivedConstants &dc, const Objective &obj,
                            double bandwidth, const OptimizerOptions &opts)
{
    if (opts.fallback_brute_force_on_assumption_violation && !check_assumption(cc, dc).ok &&
        dc.max_active <= opts.oracle_cap)
        return brute_force(cc, dc, obj, bandwidth, opts.oracle_cap);
    return greedy(cc, dc, obj, bandwidth);
}

TradeOffAnchors trade_off_anchors(const CascadedChannel &cc, const DerivedConstants &dc, double bandwidth,
                                  const OptimizerOptions &opts)
{
    return {optimize(cc, dc, Objective::rate(), bandwidth, opts),
            optimize(cc, dc, Objective::energy_efficiency(), bandwidth, opts)};
}

std::vector<ParetoPoint> tradeoff_curve(const CascadedChannel &cc, const DerivedConstants &dc, double bandwidth,
                                        std::span<const double> weights, const OptimizerOptions &opts)
{
    if (weights.empty())
        throw DomainError("weight grid is empty");
    for (const double w : weights) {
        if (!(w > 0.0 && w < 1.0))
            throw DomainError("weights must lie strictly inside (0, 1)");
    }

    const TradeOffAnchors anchors = trade_off_anchors(cc, dc, bandwidth, opts);
    std::vector<ParetoPoint> out;
    out.reserve(weights.size());
    for (const double w : weights) {
        const auto obj = Objective::trade_off(w, anchors.rate.value, anchors.ee.value);
        const auto res = optimize(cc, dc, obj, bandwidth, opts);
        out.push_back({w, res.n_star, res.metrics.rate, res.metrics.ee});
    }
    return out;
}

std::vector<ParetoPoint> pareto_filter(std::vector<ParetoPoint> points)
{
    auto dominates = [](const ParetoPoint &a, const ParetoPoint &b) {
        return a.rate >= b.rate && a.ee >= b.ee && (a.rate > b.rate || a.ee > b.ee);
    };

    std::vector<ParetoPoint> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const bool dominated = std::any_of(points.begin(), points.end(),
                                           [&](const ParetoPoint &other) { return dominates(other, points[i]); });
        const bool repeated = std::any_of(kept.begin(), kept.end(), [&](const ParetoPoint &k) {
            return k.n_star == points[i].n_star && k.rate == points[i].rate && k.ee == points[i].ee;
        });
        if (!dominated && !repeated)
            kept.push_back(points[i]);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const ParetoPoint &a, const ParetoPoint &b) {
        return a.rate < b.rate || (a.rate == b.rate && a.ee > b.ee);
    });
    return kept;
}

std::vector<ParetoPoint> pareto_sweep(const CascadedChannel &cc, const DerivedConstants &dc, double bandwidth,
                                      std::span<const double> weights, const OptimizerOptions &opts)
{
    return pareto_filter(tradeoff_curve(cc, dc, bandwidth, weights, opts));
}

std::vector<double> default_weight_grid()
{
    std::vector<double> w;
    w.reserve(99);
    for (int k = 1; k <= 99; ++k)
        w.push_back(k / 100.0);
    return w;
}

} // namespace risopt
