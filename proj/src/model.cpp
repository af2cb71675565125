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

#include "risopt/model.hpp"

#include "risopt/error.hpp"
#include "risopt/units.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace risopt {

namespace {

// Frame caps beyond this are clamped before the integer conversion.
constexpr double kCapLimit = 9.0e15;

enum class LogScale { none, dbm, db_loss };

struct KeySpec {
    std::string_view name;
    LogScale scale;
    bool required;
    double SystemParams::*field;
};

constexpr std::array<KeySpec, 15> kKeys{{
    {"tx_power", LogScale::dbm, true, &SystemParams::tx_power},
    {"feedback_power", LogScale::dbm, true, &SystemParams::feedback_power},
    {"pilot_power", LogScale::dbm, true, &SystemParams::pilot_power},
    {"bandwidth", LogScale::none, true, &SystemParams::bandwidth},
    {"feedback_bandwidth", LogScale::none, true, &SystemParams::feedback_bandwidth},
    {"noise_psd", LogScale::dbm, true, &SystemParams::noise_psd},
    {"path_loss", LogScale::db_loss, true, &SystemParams::path_loss},
    {"feedback_path_loss", LogScale::db_loss, false, &SystemParams::feedback_path_loss},
    {"amp_inefficiency", LogScale::none, true, &SystemParams::amp_inefficiency},
    {"feedback_amp_inefficiency", LogScale::none, true, &SystemParams::feedback_amp_inefficiency},
    {"static_power", LogScale::dbm, true, &SystemParams::static_power},
    {"element_power", LogScale::dbm, true, &SystemParams::element_power},
    {"feedback_bits", LogScale::none, true, &SystemParams::feedback_bits},
    {"pilot_duration", LogScale::none, true, &SystemParams::pilot_duration},
    {"frame_duration", LogScale::none, false, &SystemParams::frame_duration},
}};

constexpr std::string_view kMaxElementsKey = "max_elements";
constexpr std::string_view kRiceKey = "rice_los_ratio";
constexpr std::string_view kSlopeModelKey = "power_slope_model";

std::string_view suffix_for(LogScale scale)
{
    switch (scale) {
    case LogScale::dbm: return "_dbm";
    case LogScale::db_loss: return "_db";
    case LogScale::none: break;
    }
    return {};
}

double from_log(LogScale scale, double value)
{
    switch (scale) {
    case LogScale::dbm: return units::dbm_to_watts(value);
    case LogScale::db_loss: return units::loss_db_to_gain(value);
    case LogScale::none: break;
    }
    return value;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ConfigError("config key '" + std::string(key) + "': cannot parse number '" + std::string(text) + "'");
    return value;
}

// Looks up `name` and `name<suffix>`; rejects having both.
std::optional<std::pair<double, bool>> lookup(const ConfigMap &raw, std::string_view name, LogScale scale)
{
    const auto linear = raw.find(name);
    std::optional<ConfigMap::const_iterator> logarithmic;
    if (scale != LogScale::none) {
        const std::string log_name = std::string(name) + std::string(suffix_for(scale));
        if (auto it = raw.find(log_name); it != raw.end())
            logarithmic = it;
    }
    if (linear != raw.end() && logarithmic)
        throw ConfigError("config key '" + std::string(name) + "' given both linearly and as '" +
                          (*logarithmic)->first + "'");
    if (linear != raw.end())
        return std::make_pair(parse_double(name, linear->second), false);
    if (logarithmic) {
        const double v = parse_double((*logarithmic)->first, (*logarithmic)->second);
        if (!std::isfinite(v))
            throw ValidationError("config key '" + (*logarithmic)->first + "' must be finite");
        return std::make_pair(from_log(scale, v), true);
    }
    return std::nullopt;
}

bool is_known_key(std::string_view key)
{
    if (key == kMaxElementsKey || key == kSlopeModelKey || key == kRiceKey || key == "rice_los_ratio_db")
        return true;
    for (const auto &spec : kKeys) {
        if (key == spec.name)
            return true;
        if (spec.scale != LogScale::none && key == std::string(spec.name) + std::string(suffix_for(spec.scale)))
            return true;
    }
    return false;
}

void require(bool ok, const std::string &what)
{
    if (!ok)
        throw ValidationError(what);
}

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

} // namespace

void SystemParams::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(positive(tx_power), "tx_power must be a positive finite power");
    require(positive(feedback_power), "feedback_power must be a positive finite power");
    require(positive(pilot_power), "pilot_power must be a positive finite power");
    require(positive(bandwidth), "bandwidth must be positive");
    require(positive(feedback_bandwidth), "feedback_bandwidth must be positive");
    require(positive(noise_psd), "noise_psd must be positive");
    require(positive(path_loss) && path_loss <= 1.0, "path_loss must lie in (0, 1]");
    require(positive(feedback_path_loss) && feedback_path_loss <= 1.0, "feedback_path_loss must lie in (0, 1]");
    require(std::isfinite(amp_inefficiency) && amp_inefficiency >= 1.0, "amp_inefficiency must be >= 1");
    require(std::isfinite(feedback_amp_inefficiency) && feedback_amp_inefficiency >= 1.0,
            "feedback_amp_inefficiency must be >= 1");
    require(positive(static_power), "static_power must be positive");
    require(positive(element_power), "element_power must be positive");
    require(std::isfinite(feedback_bits) && feedback_bits >= 0.0, "feedback_bits must be non-negative");
    require(positive(pilot_duration), "pilot_duration must be positive");
    require(positive(frame_duration), "frame_duration must be positive");
    require(frame_duration > 2.0 * pilot_duration, "frame_duration must exceed two pilot durations");
    require(max_elements >= 1, "max_elements must be at least 1");
    require(std::isfinite(rice_los_ratio) && rice_los_ratio >= 0.0, "rice_los_ratio must be non-negative");
}

SystemParams reference_params()
{
    SystemParams p;
    p.tx_power = units::dbm_to_watts(30.0);
    p.feedback_power = units::dbm_to_watts(30.0);
    p.pilot_power = units::dbm_to_watts(10.0);
    p.bandwidth = 5e6;
    p.feedback_bandwidth = 1e6;
    p.noise_psd = units::dbm_to_watts(-174.0);
    p.path_loss = units::loss_db_to_gain(110.0);
    p.feedback_path_loss = p.path_loss;
    p.amp_inefficiency = 1.0;
    p.feedback_amp_inefficiency = 1.0;
    p.static_power = units::dbm_to_watts(45.0);
    p.element_power = units::dbm_to_watts(10.0);
    p.feedback_bits = 16.0;
    p.pilot_duration = 0.5e-3;
    p.frame_duration = 1.0;
    p.max_elements = 200;
    p.rice_los_ratio = 4.0;
    return p;
}

SystemParams from_config(const ConfigMap &raw)
{
    for (const auto &[key, value] : raw) {
        if (!is_known_key(key))
            throw ConfigError("unknown config key '" + key + "'");
    }

    SystemParams params;
    bool feedback_loss_given = false;
    for (const auto &spec : kKeys) {
        const auto found = lookup(raw, spec.name, spec.scale);
        if (!found) {
            if (spec.required)
                throw ConfigError("missing config key '" + std::string(spec.name) + "'");
            continue;
        }
        params.*spec.field = found->first;
        if (spec.name == "feedback_path_loss")
            feedback_loss_given = true;
    }
    if (!feedback_loss_given)
        params.feedback_path_loss = params.path_loss;

    const auto n_hw = raw.find(kMaxElementsKey);
    if (n_hw == raw.end())
        throw ConfigError("missing config key 'max_elements'");
    const double n_value = parse_double(kMaxElementsKey, n_hw->second);
    if (n_value != std::floor(n_value) || std::abs(n_value) > kCapLimit)
        throw ConfigError("config key 'max_elements' must be an integer");
    params.max_elements = static_cast<std::int64_t>(n_value);

    if (raw.contains(kRiceKey) && raw.contains("rice_los_ratio_db"))
        throw ConfigError("config key 'rice_los_ratio' given both linearly and as 'rice_los_ratio_db'");
    if (auto it = raw.find(kRiceKey); it != raw.end())
        params.rice_los_ratio = parse_double(kRiceKey, it->second);
    else if (auto it_db = raw.find("rice_los_ratio_db"); it_db != raw.end())
        params.rice_los_ratio = units::db_to_linear(parse_double(it_db->first, it_db->second));

    if (auto it = raw.find(kSlopeModelKey); it != raw.end()) {
        const auto v = trim(it->second);
        if (v == "expanded")
            params.slope_model = PowerSlopeModel::expanded;
        else if (v == "shorthand")
            params.slope_model = PowerSlopeModel::shorthand;
        else
            throw ConfigError("config key 'power_slope_model' must be 'expanded' or 'shorthand'");
    }

    params.validate();
    return params;
}

ConfigMap parse_config_text(std::string_view text)
{
    ConfigMap out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (!out.emplace(std::string(key), std::string(value)).second)
            throw ConfigError("duplicate config key '" + std::string(key) + "'");
    }
    return out;
}

ConfigMap load_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string to_config_text(const SystemParams &params)
{
    std::string out;
    for (const auto &spec : kKeys)
        out += std::string(spec.name) + " = " + format_double(params.*spec.field) + "\n";
    out += "max_elements = " + std::to_string(params.max_elements) + "\n";
    out += "rice_los_ratio = " + format_double(params.rice_los_ratio) + "\n";
    out += "power_slope_model = " + std::string(to_string(params.slope_model)) + "\n";
    return out;
}

double compute_beta(const SystemParams &params)
{
    return params.tx_power * params.path_loss / (params.bandwidth * params.noise_psd);
}

double feedback_slot_time(const SystemParams &params, std::complex<double> feedback_gain)
{
    const double gain = std::norm(feedback_gain);
    if (!(gain > 0.0))
        throw DegenerateChannelError("feedback channel gain is zero: configuration can never be reported");
    if (params.feedback_bits == 0.0)
        return 0.0;
    const double snr =
        params.feedback_power * params.feedback_path_loss * gain / (params.noise_psd * params.feedback_bandwidth);
    const double bits_per_second = params.feedback_bandwidth * std::log2(1.0 + snr);
    return params.feedback_bits / bits_per_second;
}

DerivedConstants derive_constants(const SystemParams &params, std::complex<double> feedback_gain,
                                  double alpha_max)
{
    if (!(alpha_max > 0.0) || !std::isfinite(alpha_max))
        throw DomainError("alpha_max must be positive and finite");

    DerivedConstants dc;
    const double pilot_share = params.pilot_duration / params.frame_duration;
    const double tx = params.amp_inefficiency * params.tx_power;

    dc.snr_scale = compute_beta(params);
    dc.feedback_slot_time = feedback_slot_time(params, feedback_gain);
    dc.frame_fraction = 1.0 - pilot_share;
    const double feedback_share = dc.feedback_slot_time / params.frame_duration;
    dc.overhead_slope = pilot_share + feedback_share;
    dc.power_intercept = params.static_power + params.pilot_power * pilot_share + tx * dc.frame_fraction;
    if (params.slope_model == PowerSlopeModel::expanded) {
        dc.power_slope = (params.pilot_power - tx) * pilot_share +
                         feedback_share * (params.feedback_amp_inefficiency * params.feedback_power - tx) +
                         params.element_power;
    } else {
        dc.power_slope = (params.pilot_power - tx - 1.0) * pilot_share + dc.overhead_slope + params.element_power;
    }

    auto to_cap = [](double v) {
        return static_cast<std::int64_t>(std::floor(std::min(v, kCapLimit)));
    };
    const double reflect_cap = 1.0 / (alpha_max * std::sqrt(params.path_loss));
    const double snr_cap = std::sqrt(dc.snr_scale / params.path_loss);
    dc.physical_cap = to_cap(std::min(reflect_cap, snr_cap));
    dc.frame_cap = to_cap(dc.frame_fraction / dc.overhead_slope);
    dc.max_active = std::min({params.max_elements, dc.physical_cap, dc.frame_cap});

    if (dc.max_active < 1) {
        std::ostringstream msg;
        msg << "infeasible instance: hardware cap " << params.max_elements << ", physical cap "
            << dc.physical_cap << ", frame cap " << dc.frame_cap;
        throw InfeasibleError(msg.str());
    }
    return dc;
}

double data_fraction(const DerivedConstants &dc, std::int64_t n)
{
    return dc.frame_fraction - dc.overhead_slope * static_cast<double>(n);
}

std::string_view to_string(PowerSlopeModel model)
{
    return model == PowerSlopeModel::expanded ? "expanded" : "shorthand";
}

} // namespace risopt
