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
#include "risopt/optimizer.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace risopt {

/// Baselines compared by the sweep experiment.
///   optimal_both:           greedy element count + aligned phases (a)
///   random_n_optimal_phase: uniform random count of the strongest elements, aligned phases (b)
///   random_both:            uniform random count and uniform random phases; no feedback,
///                           a single pilot (c)
enum class Scheme { optimal_both, random_n_optimal_phase, random_both };

std::string_view to_string(Scheme scheme);      // "a", "b", "c"
std::optional<Scheme> parse_scheme(std::string_view text);

struct ExperimentSpec {
    SystemParams params = reference_params();
    std::vector<double> power_sweep_dbm{0.0, 10.0, 20.0, 30.0, 40.0};
    std::int64_t n_realizations = 500;
    Scheme scheme = Scheme::optimal_both;
    std::uint64_t master_seed = 42;
    std::vector<ObjectiveKind> objectives{ObjectiveKind::rate, ObjectiveKind::energy_efficiency};
    OptimizerOptions optimizer;
    unsigned threads = 1;
    double max_skip_fraction = 0.01;

    // Trade-off experiment only.
    std::vector<double> element_power_dbm{10.0, 15.0};
    std::vector<double> weights = default_weight_grid();

    /// Throws DomainError on an empty sweep, a non-positive realization count, or a
    /// trade-off objective in `objectives`.
    void validate() const;
};

/// Averages for one (power, scheme, objective) cell. Standard errors use the sample
/// standard deviation over the kept realizations.
struct SchemeRow {
    double power_dbm = 0.0;
    Scheme scheme = Scheme::optimal_both;
    ObjectiveKind objective = ObjectiveKind::rate;
    double mean_rate = 0.0;
    double se_rate = 0.0;
    double mean_ee = 0.0;
    double se_ee = 0.0;
    double mean_n_star = 0.0;
    double se_n_star = 0.0;
    std::int64_t n_realizations = 0;
    std::int64_t n_skipped = 0;
};

struct AggregateResult {
    std::vector<SchemeRow> rows; // power-major, then objective order of the spec
};

struct MaximizerRow {
    double power_dbm = 0.0;
    double mean_n_rate = 0.0;
    double se_n_rate = 0.0;
    double mean_n_ee = 0.0;
    double se_n_ee = 0.0;
    std::int64_t n_realizations = 0;
    std::int64_t n_skipped = 0;
};

struct ParetoRow {
    double power_dbm = 0.0;
    double element_power_dbm = 0.0;
    double w = 0.0;
    double mean_rate = 0.0;
    double mean_ee = 0.0;
};

/// Per-realization outcome of the random-configuration baseline.
struct RandomConfigOutcome {
    std::int64_t n = 0;
    double rate = 0.0;
    double power = 0.0;
    double ee = 0.0;
};

/// Count drawn uniformly in [1, max_active] from `rng`, then either the n strongest
/// elements with aligned phases (random_phases = false, full overhead) or the first n
/// elements with phases uniform in [0, 2 pi) and only the common pilot as overhead.
RandomConfigOutcome random_configuration(const ChannelRealization &ch, const CascadedChannel &cc,
                                         const DerivedConstants &dc, const SystemParams &params, Rng &rng,
                                         bool random_phases);

/// Throws InfeasibleRunError when more than max_skip_fraction of the realizations at a
/// power point are infeasible.
AggregateResult run_scheme(const ExperimentSpec &spec);

/// Mean rate- and EE-maximizing element counts of the optimal scheme at each power.
std::vector<MaximizerRow> table_maximizers(const ExperimentSpec &spec);

/// Averaged trade-off curve per (power, element power, weight).
std::vector<ParetoRow> pareto_experiment(const ExperimentSpec &spec);

void write_scheme_csv(std::ostream &out, const std::vector<SchemeRow> &rows);
void write_scheme_json(std::ostream &out, const std::vector<SchemeRow> &rows);
void write_pareto_csv(std::ostream &out, const std::vector<ParetoRow> &rows);
void write_pareto_json(std::ostream &out, const std::vector<ParetoRow> &rows);
void write_maximizer_csv(std::ostream &out, const std::vector<MaximizerRow> &rows);

/// Shortest round-trip decimal text of v.
std::string format_number(double v);

} // namespace risopt
