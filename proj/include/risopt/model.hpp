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

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace risopt {

/// How the per-element slope of the total power is formed.
///   expanded:  full term-by-term expansion of the frame power budget (default).
///   shorthand: legacy closed form that agrees with the expansion only when
///              mu_F * p_F - mu * p == 1 W. Kept for comparison with older results.
enum class PowerSlopeModel { expanded, shorthand };

/// Physical and protocol constants of one RIS-assisted link, all in linear SI units.
struct SystemParams {
    double tx_power = 1.0;                  // W
    double feedback_power = 1.0;            // W, controller link
    double pilot_power = 1e-2;              // W, per pilot tone
    double bandwidth = 5e6;                 // Hz
    double feedback_bandwidth = 1e6;        // Hz
    double noise_psd = 3.9810717055349565e-21; // W/Hz
    double path_loss = 1e-11;               // end-to-end attenuation, linear, <= 1
    double feedback_path_loss = 1e-11;      // controller-link attenuation, linear, <= 1
    double amp_inefficiency = 1.0;          // inverse amplifier efficiency, >= 1
    double feedback_amp_inefficiency = 1.0; // >= 1
    double static_power = 31.622776601683793; // W, everything except the RIS
    double element_power = 1e-2;            // W per active element
    double feedback_bits = 16.0;            // bits reported per element
    double pilot_duration = 5e-4;           // s
    double frame_duration = 1.0;            // s
    std::int64_t max_elements = 200;        // hardware element count
    double rice_los_ratio = 4.0;            // LOS power / scattered power
    PowerSlopeModel slope_model = PowerSlopeModel::expanded;

    /// Throws ValidationError when any field is outside its physical range.
    void validate() const;
};

/// Scalars derived from SystemParams and one feedback-channel realization.
/// Every objective is an affine or log-affine function of these.
struct DerivedConstants {
    double snr_scale = 0.0;          // p * delta / (B * N0)
    double frame_fraction = 0.0;     // 1 - T0/T, share of the frame left after the common pilot
    double overhead_slope = 0.0;     // frame share lost per active element (pilot + feedback)
    double feedback_slot_time = 0.0; // s of feedback per element
    double power_intercept = 0.0;    // W, N-independent part of the frame power
    double power_slope = 0.0;        // W per active element
    std::int64_t physical_cap = 0;   // largest N for which the path-loss model stays meaningful
    std::int64_t frame_cap = 0;      // floor(frame_fraction / overhead_slope)
    std::int64_t max_active = 0;     // min(hardware, physical, frame) caps
};

using ConfigMap = std::map<std::string, std::string, std::less<>>;

/// Parameters of the reference scenario: 5 MHz link, 110 dB loss, -174 dBm/Hz noise,
/// 45 dBm static power, 10 dBm per element, 16 feedback bits, 0.5 ms pilots, 200
/// elements, LOS/scatter ratio 4, 1 s frame, 30 dBm transmit power.
SystemParams reference_params();

/// Build SystemParams from a flat key/value map.
///
/// Each field may be given either linearly under its own name (`tx_power`) or in
/// logarithmic units under a suffixed name (`tx_power_dbm`, `path_loss_db`).
/// Giving both spellings of one field, an unknown key, or omitting a required key
/// raises ConfigError naming the key. Out-of-range linear values raise ValidationError.
SystemParams from_config(const ConfigMap &raw);

/// Parse `key = value` lines; `#` starts a comment. Duplicate keys raise ConfigError.
ConfigMap parse_config_text(std::string_view text);

ConfigMap load_config_file(const std::string &path);

/// Serialize params with linear keys only; from_config(parse_config_text(...)) inverts it.
std::string to_config_text(const SystemParams &params);

double compute_beta(const SystemParams &params);

/// Feedback time per reported element, in seconds. Zero bits cost zero time.
/// Throws DegenerateChannelError when the feedback gain is zero.
double feedback_slot_time(const SystemParams &params, std::complex<double> feedback_gain);

/// Throws InfeasibleError when no element count in [1, N_hw] is admissible and
/// DomainError when alpha_max is not strictly positive.
DerivedConstants derive_constants(const SystemParams &params, std::complex<double> feedback_gain,
                                  double alpha_max);

/// Frame share available for data with N active elements: frame_fraction - overhead_slope * N.
double data_fraction(const DerivedConstants &dc, std::int64_t n);

std::string_view to_string(PowerSlopeModel model);

} // namespace risopt
