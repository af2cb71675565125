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

#include <cmath>

// dB helpers. Only the configuration boundary uses these; everything past it is linear SI.
namespace risopt::units {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

// Attenuation given as a positive loss in dB (110 dB -> 1e-11).
inline double loss_db_to_gain(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

inline double gain_to_loss_db(double gain) { return -10.0 * std::log10(gain); }

} // namespace risopt::units
