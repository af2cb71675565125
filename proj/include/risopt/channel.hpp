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

#include "risopt/model.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace risopt {

using cdouble = std::complex<double>;

/// Fast-fading coefficients of one channel draw.
struct ChannelRealization {
    std::vector<cdouble> tx_to_ris; // h, one entry per RIS element
    std::vector<cdouble> ris_to_rx; // g
    cdouble feedback{1.0, 0.0};     // controller link

    std::size_t size() const { return tx_to_ris.size(); }

    /// Throws DomainError on mismatched lengths, empty vectors or non-finite entries.
    void validate() const;
};

/// Cascaded magnitudes |h_n g_n| sorted in non-increasing order.
///
/// `order[k]` is the original element index of the k-th strongest path; ties are
/// broken by ascending original index. `prefix[k]` is the sum of the k+1 strongest
/// magnitudes, so the composite gain with N aligned elements is `prefix[N-1]`.
/// `alignment[k]` is the phase that makes the k-th sorted summand real and non-negative.
struct CascadedChannel {
    std::vector<double> alpha;
    std::vector<double> prefix;
    std::vector<std::size_t> order;
    std::vector<double> alignment;

    std::size_t size() const { return alpha.size(); }
    double alpha_max() const { return alpha.front(); }

    /// Sum of the n strongest magnitudes; n == 0 gives 0.
    double strongest_sum(std::size_t n) const { return n == 0 ? 0.0 : prefix[n - 1]; }
};

/// Portable random source: std::mt19937_64 bits with distribution transforms defined
/// here, so identical seeds give identical draws on every conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [lo, hi], unbiased (rejection sampling).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Circularly-symmetric CN(0, 1) sample: sqrt(-ln u1) * exp(i 2 pi u2).
    cdouble complex_normal();

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Seed of one Monte Carlo work item. Pure function of its arguments; `stream`
/// separates independent uses (channel draw, random element count, ...) of one item.
std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t realization_index,
                         std::uint64_t power_index, std::uint64_t stream = 0);

/// Draw h, g (N_hw entries each) and the feedback coefficient.
/// Each entry is v + CN(0, 1) with v = sqrt(rice_los_ratio), real and positive.
/// Draw order: all of h, then all of g, then the feedback coefficient.
ChannelRealization sample(const SystemParams &params, std::uint64_t seed);

CascadedChannel cascade(const ChannelRealization &ch);

/// Text record: header line, element count, feedback coefficient, then one line per
/// element holding `re(h) im(h) re(g) im(g)`. Values use shortest round-trip formatting.
void write_realization(std::ostream &out, const ChannelRealization &ch);
ChannelRealization read_realization(std::istream &in);

} // namespace risopt
