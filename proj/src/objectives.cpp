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

#include "risopt/objectives.hpp"

#include "risopt/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace risopt {

namespace {

// Slack for anchors computed by a different but equivalent evaluation route.
constexpr double kAnchorTolerance = 1e-12;

void check_count(const CascadedChannel &cc, std::int64_t n)
{
    if (n < 1 || static_cast<std::size_t>(n) > cc.size())
        throw DomainError("element count " + std::to_string(n) + " outside [1, " + std::to_string(cc.size()) + "]");
}

double wrap_phase(double phi)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0)
        phi += two_pi;
    return phi >= two_pi ? 0.0 : phi;
}

} // namespace

Objective Objective::trade_off(double weight, double rate_opt, double ee_opt)
{
    if (!(weight > 0.0 && weight < 1.0))
        throw DomainError("trade-off weight must lie in (0, 1)");
    if (!std::isfinite(rate_opt) || !std::isfinite(ee_opt))
        throw DomainError("trade-off anchors must be finite");
    return Objective(ObjectiveKind::trade_off, weight, rate_opt, ee_opt);
}

std::string_view to_string(ObjectiveKind kind)
{
    switch (kind) {
    case ObjectiveKind::rate: return "rate";
    case ObjectiveKind::energy_efficiency: return "ee";
    case ObjectiveKind::trade_off: return "tradeoff";
    }
    return "?";
}

PhaseConfig optimal_phases(const ChannelRealization &ch, std::span<const std::size_t> active)
{
    if (active.empty())
        throw DomainError("optimal_phases: active set is empty");
    PhaseConfig cfg;
    cfg.elements.assign(active.begin(), active.end());
    cfg.phases.reserve(active.size());
    for (const std::size_t idx : active) {
        if (idx >= ch.size())
            throw DomainError("optimal_phases: element index " + std::to_string(idx) + " out of range");
        const cdouble term = std::conj(ch.ris_to_rx[idx]) * ch.tx_to_ris[idx];
        cfg.phases.push_back(term == cdouble{} ? 0.0 : wrap_phase(-std::arg(term)));
    }
    return cfg;
}

PhaseConfig optimal_phases(const CascadedChannel &cc, std::int64_t n)
{
    check_count(cc, n);
    const auto count = static_cast<std::size_t>(n);
    PhaseConfig cfg;
    cfg.elements.assign(cc.order.begin(), cc.order.begin() + static_cast<std::ptrdiff_t>(count));
    cfg.phases.assign(cc.alignment.begin(), cc.alignment.begin() + static_cast<std::ptrdiff_t>(count));
    return cfg;
}

double composite_gain(const ChannelRealization &ch, const PhaseConfig &cfg)
{
    if (cfg.elements.size() != cfg.phases.size())
        throw DomainError("composite_gain: phase count does not match element count");
    cdouble sum{};
    for (std::size_t k = 0; k < cfg.elements.size(); ++k) {
        const std::size_t idx = cfg.elements[k];
        if (idx >= ch.size())
            throw DomainError("composite_gain: element index out of range");
        sum += std::conj(ch.ris_to_rx[idx]) * std::polar(1.0, cfg.phases[k]) * ch.tx_to_ris[idx];
    }
    return std::abs(sum);
}

double spectral_gain(const CascadedChannel &cc, std::int64_t n, double beta)
{
    check_count(cc, n);
    const double s = cc.prefix[static_cast<std::size_t>(n) - 1];
    return std::log1p(beta * s * s) / std::numbers::ln2;
}

double rate(const CascadedChannel &cc, std::int64_t n, const DerivedConstants &dc, double bandwidth)
{
    if (n < 1)
        throw DomainError("rate: element count must be at least 1");
    if (n > dc.frame_cap)
        throw InfeasibleError("rate: N = " + std::to_string(n) + " exceeds the frame cap " +
                              std::to_string(dc.frame_cap));
    if (n > dc.max_active)
        throw DomainError("rate: N = " + std::to_string(n) + " exceeds max_active " + std::to_string(dc.max_active));
    // At N == frame_cap with an integral ratio the data share is zero up to rounding.
    const double share = std::max(0.0, data_fraction(dc, n));
    return share * bandwidth * spectral_gain(cc, n, dc.snr_scale);
}

double total_power(std::int64_t n, const DerivedConstants &dc)
{
    if (n < 0)
        throw DomainError("total_power: element count must be non-negative");
    return dc.power_intercept + dc.power_slope * static_cast<double>(n);
}

double energy_efficiency(const CascadedChannel &cc, std::int64_t n, const DerivedConstants &dc, double bandwidth)
{
    return rate(cc, n, dc, bandwidth) / total_power(n, dc);
}

double scalarized_tradeoff(const CascadedChannel &cc, std::int64_t n, const DerivedConstants &dc,
                           double bandwidth, const Objective &obj)
{
    return evaluate(cc, n, dc, bandwidth, obj).value;
}

ObjectiveValue evaluate(const CascadedChannel &cc, std::int64_t n, const DerivedConstants &dc, double bandwidth,
                        const Objective &obj)
{
    ObjectiveValue out;
    out.rate = rate(cc, n, dc, bandwidth);
    out.power = total_power(n, dc);
    out.ee = out.rate / out.power;

    switch (obj.kind()) {
    case ObjectiveKind::rate:
        out.value = out.rate;
        break;
    case ObjectiveKind::energy_efficiency:
        out.value = out.ee;
        break;
    case ObjectiveKind::trade_off: {
        const double w = obj.weight();
        const double rate_gap = out.rate - obj.rate_opt();
        const double ee_gap = out.ee - obj.ee_opt();
        if (rate_gap > kAnchorTolerance * std::abs(obj.rate_opt()) ||
            ee_gap > kAnchorTolerance * std::abs(obj.ee_opt()))
            throw ContractError("trade-off anchors are not the optima of this instance: N = " + std::to_string(n) +
                                " beats them");
        out.value = std::min(w * rate_gap, (1.0 - w) * ee_gap);
        break;
    }
    }
    return out;
}

} // namespace risopt
