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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace risopt {

/// Phase shifts of the active elements. `elements[k]` is an original element index,
/// `phases[k]` its shift in [0, 2 pi).
struct PhaseConfig {
    std::vector<std::size_t> elements;
    std::vector<double> phases;
};

enum class ObjectiveKind { rate, energy_efficiency, trade_off };

/// What the element count is chosen for. Trade-off carries the weight and the
/// individual optima it is measured against.
class Objective {
public:
    static Objective rate() { return Objective(ObjectiveKind::rate, 0.0, 0.0, 0.0); }
    static Objective energy_efficiency() { return Objective(ObjectiveKind::energy_efficiency, 0.0, 0.0, 0.0); }
    /// Throws DomainError unless 0 < weight < 1 and both optima are finite.
    static Objective trade_off(double weight, double rate_opt, double ee_opt);

    ObjectiveKind kind() const { return kind_; }
    double weight() const { return weight_; }
    double rate_opt() const { return rate_opt_; }
    double ee_opt() const { return ee_opt_; }

private:
    Objective(ObjectiveKind kind, double w, double r, double e) : kind_(kind), weight_(w), rate_opt_(r), ee_opt_(e) {}

    ObjectiveKind kind_;
    double weight_;
    double rate_opt_;
    double ee_opt_;
};

std::string_view to_string(ObjectiveKind kind);

struct ObjectiveValue {
    double value = 0.0; // bits/s, bits/J, or the weighted deficit
    double rate = 0.0;  // bits/s
    double power = 0.0; // W
    double ee = 0.0;    // bits/J, rate / power
};

/// Phases that put every active summand conj(g_n) e^{j phi_n} h_n on the positive real
/// axis. Throws DomainError for an empty or out-of-range index set.
PhaseConfig optimal_phases(const ChannelRealization &ch, std::span<const std::size_t> active);

/// Optimal phases of the n strongest cascaded paths, in strength order.
PhaseConfig optimal_phases(const CascadedChannel &cc, std::int64_t n);

/// |sum_k conj(g) e^{j phi} h| over the configured elements.
double composite_gain(const ChannelRealization &ch, const PhaseConfig &cfg);

/// log2(1 + beta * (sum of the n strongest magnitudes)^2), in bits/s/Hz.
double spectral_gain(const CascadedChannel &cc, std::int64_t n, double beta);

/// Overhead-aware rate in bits/s. N above the frame cap raises InfeasibleError;
/// N outside [1, max_active] otherwise raises DomainError.
double rate(const CascadedChannel &cc, std::int64_t n, const DerivedConstants &dc, double bandwidth);

/// Frame-averaged power draw power_intercept + power_slope * N, in W. N >= 0.
double total_power(std::int64_t n, const DerivedConstants &dc);

double energy_efficiency(const CascadedChannel &cc, std::int64_t n, const DerivedConstants &dc, double bandwidth);

/// min{w (R - R_opt), (1 - w)(EE - EE_opt)}. Never positive when the anchors are the
/// true optima; a positive value raises ContractError.
double scalarized_tradeoff(const CascadedChannel &cc, std::int64_t n, const DerivedConstants &dc,
                           double bandwidth, const Objective &obj);

ObjectiveValue evaluate(const CascadedChannel &cc, std::int64_t n, const DerivedConstants &dc, double bandwidth,
                        const Objective &obj);

} // namespace risopt
