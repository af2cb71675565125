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

#pragma once

#include "risopt/channel.hpp"
#include "risopt/model.hpp"
#include "risopt/objectives.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace risopt {

enum class SearchMethod { greedy, brute_force };

std::string_view to_string(SearchMethod method);

struct TracePoint {
    std::int64_t n = 0;
    double value = 0.0;
};

struct OptimizationResult {
    std::int64_t n_star = 0;
    double value = 0.0;
    ObjectiveValue metrics;  // rate, power and EE at n_star
    PhaseConfig phases;      // aligned phases of the n_star strongest elements
    bool assumption_ok = false;
    std::vector<TracePoint> trace; // every evaluated (N, value), in evaluation order
    SearchMethod method = SearchMethod::greedy;
};

struct AssumptionCheck {
    bool ok = false;
    double peak_snr = 0.0; // beta * alpha_max^2
    double margin = 0.0;   // peak_snr - 1
};

constexpr std::int64_t kDefaultOracleCap = 10'000;

struct OptimizerOptions {
    /// Replace the greedy answer by exhaustive search when beta * alpha_max^2 < 1,
    /// provided max_active stays within oracle_cap.
    bool fallback_brute_force_on_assumption_violation = true;
    std::int64_t oracle_cap = kDefaultOracleCap;
};

/// True iff beta * alpha_max^2 >= 1, the condition under which all three objectives
/// are unimodal in N.
AssumptionCheck check_assumption(const CascadedChannel &cc, const DerivedConstants &dc);

/// Activate elements one at a time in decreasing cascaded strength and stop at the
/// first strict decrease of the objective. Returns the last N before the decrease
/// (plateaus are walked through), or max_active when the objective never decreases.
/// Evaluates at most n_star + 1 points.
OptimizationResult greedy(const CascadedChannel &cc, const DerivedConstants &dc, const Objective &obj,
                          double bandwidth);

/// Exhaustive search over [1, max_active]; ties go to the smaller N. Throws
/// OracleCapError when max_active exceeds `cap`.
OptimizationResult brute_force(const CascadedChannel &cc, const DerivedConstants &dc, const Objective &obj,
                               double bandwidth, std::int64_t cap = kDefaultOracleCap);

/// Greedy search, falling back to brute force on instances outside the unimodal regime
/// when the options allow it.
OptimizationResult optimize(const CascadedChannel &cc, const DerivedConstants &dc, const Objective &obj,
                            double bandwidth, const OptimizerOptions &opts = {});

struct ParetoPoint {
    double w = 0.0;
    std::int64_t n_star = 0;
    double rate = 0.0;
    double ee = 0.0;
};

/// Rate and EE optima of one instance, the anchors of the weighted trade-off.
struct TradeOffAnchors {
    OptimizationResult rate;
    OptimizationResult ee;
};

TradeOffAnchors trade_off_anchors(const CascadedChannel &cc, const DerivedConstants &dc, double bandwidth,
                                  const OptimizerOptions &opts = {});

/// Solve the max-min trade-off for every weight, unfiltered and in weight order.
std::vector<ParetoPoint> tradeoff_curve(const CascadedChannel &cc, const DerivedConstants &dc, double bandwidth,
                                        std::span<const double> weights, const OptimizerOptions &opts = {});

/// Drop strictly dominated points and repeated element counts; sort by rate.
std::vector<ParetoPoint> pareto_filter(std::vector<ParetoPoint> points);

/// tradeoff_curve followed by pareto_filter. Weights must be non-empty and inside (0, 1).
std::vector<ParetoPoint> pareto_sweep(const CascadedChannel &cc, const DerivedConstants &dc, double bandwidth,
                                      std::span<const double> weights, const OptimizerOptions &opts = {});

/// 0.01, 0.02, ..., 0.99.
std::vector<double> default_weight_grid();

} // namespace risopt
