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
#include "risopt/optimizer.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace risopt {

/// A synthetic optimization instance: random Rician cascade plus directly drawn
/// derived constants, with beta * alpha_max^2 >= 1 and max_active in [min_n, max_n].
struct ValidationInstance {
    ChannelRealization ch;
    CascadedChannel cc;
    DerivedConstants dc;
    double bandwidth = 1e6;
};

ValidationInstance random_instance(Rng &rng, std::int64_t min_n = 4, std::int64_t max_n = 64);

/// Index of the first violation of "never increases after the first decrease",
/// or -1 when the sequence is unimodal in that sense.
std::int64_t unimodality_violation(std::span<const TracePoint> trace);

/// Smallest relative slack of f(N+1) - f(N) >= f(N+2) - f(N+1) over N in
/// [1, max_active - 2], with f the spectral gain. Non-negative when the increments shrink.
double min_increment_slack(const CascadedChannel &cc, const DerivedConstants &dc);

struct CheckCount {
    std::string name;
    std::int64_t passed = 0;
    std::int64_t failed = 0;
};

struct ValidationReport {
    std::vector<CheckCount> checks;
    std::vector<std::string> failures; // first few failure descriptions

    bool ok() const;
};

/// Greedy-vs-exhaustive agreement, unimodality of the full traces, increment concavity
/// and early-stop soundness for rate, EE and the trade-off at weights 0.1 ... 0.9.
ValidationReport run_validation(std::int64_t n_instances, std::uint64_t seed);

inline constexpr double kConcavitySlack = -1e-9;

} // namespace risopt
