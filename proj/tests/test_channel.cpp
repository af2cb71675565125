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


#include "risopt/channel.hpp"
#include "risopt/error.hpp"
#include "risopt/model.hpp"
#include "risopt/objectives.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace risopt;

TEST_CASE("cascade sorts by magnitude and accumulates prefix sums")
{
    ChannelRealization ch;
    ch.tx_to_ris = {{1.0, 0.0}, {0.0, 2.0}};
    ch.ris_to_rx = {{3.0, 0.0}, {1.0, 0.0}};
    const auto cc = cascade(ch);
    REQUIRE(cc.size() == 2);
    CHECK(cc.alpha[0] == doctest::Approx(3.0));
    CHECK(cc.alpha[1] == doctest::Approx(2.0));
    CHECK(cc.order[0] == 0);
    CHECK(cc.order[1] == 1);
    CHECK(cc.prefix[0] == doctest::Approx(3.0));
    CHECK(cc.prefix[1] == doctest::Approx(5.0));
    CHECK(cc.alignment[0] == doctest::Approx(0.0));
    CHECK(cc.alignment[1] == doctest::Approx(1.5 * std::numbers::pi));
    CHECK(cc.alpha_max() == doctest::Approx(3.0));
    CHECK(cc.strongest_sum(0) == 0.0);
    CHECK(cc.strongest_sum(2) == doctest::Approx(5.0));
}

TEST_CASE("cascade breaks magnitude ties toward the lower index")
{
    ChannelRealization ch;
    ch.tx_to_ris = {{1.0, 0.0}, {2.0, 0.0}, {0.0, 1.0}, {2.0, 0.0}};
    ch.ris_to_rx = {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
    const auto cc = cascade(ch);
    CHECK(cc.order == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("aligned phases make every cascaded term real and positive")
{
    Rng rng(9);
    ChannelRealization ch;
    for (int i = 0; i < 64; ++i) {
        ch.tx_to_ris.push_back(rng.complex_normal());
        ch.ris_to_rx.push_back(rng.complex_normal());
    }
    const auto cc = cascade(ch);
    for (std::size_t k = 0; k < cc.size(); ++k) {
        const std::size_t i = cc.order[k];
        const cdouble term = std::conj(ch.ris_to_rx[i]) * std::polar(1.0, cc.alignment[k]) * ch.tx_to_ris[i];
        CHECK(term.real() == doctest::Approx(cc.alpha[k]).epsilon(1e-12));
        CHECK(std::abs(term.imag()) <= 1e-12 * cc.alpha[k]);
        CHECK(cc.alignment[k] >= 0.0);
        CHECK(cc.alignment[k] < 2.0 * std::numbers::pi);
        if (k > 0)
            CHECK(cc.alpha[k - 1] >= cc.alpha[k]);
    }
    for (std::int64_t n = 1; n <= 64; ++n) {
        const auto cfg = optimal_phases(cc, n);
        CHECK(composite_gain(ch, cfg) == doctest::Approx(cc.prefix[static_cast<std::size_t>(n) - 1]).epsilon(1e-12));
    }
}

TEST_CASE("cascade rejects malformed realizations")
{
    ChannelRealization empty;
    CHECK_THROWS_AS(cascade(empty), DomainError);
    ChannelRealization mismatched;
    mismatched.tx_to_ris = {{1.0, 0.0}};
    mismatched.ris_to_rx = {{1.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(cascade(mismatched), DomainError);
    ChannelRealization nan_entry;
    nan_entry.tx_to_ris = {{std::nan(""), 0.0}};
    nan_entry.ris_to_rx = {{1.0, 0.0}};
    CHECK_THROWS_AS(cascade(nan_entry), DomainError);
}

TEST_CASE("Rician entries have mean power K + 1")
{
    SystemParams p = reference_params();
    p.max_elements = 1000;
    double sum_h = 0.0;
    double sum_g = 0.0;
    std::int64_t count = 0;
    for (std::uint64_t r = 0; r < 1000; ++r) {
        const auto ch = sample(p, child_seed(1, r, 0));
        for (std::size_t i = 0; i < ch.size(); ++i) {
            sum_h += std::norm(ch.tx_to_ris[i]);
            sum_g += std::norm(ch.ris_to_rx[i]);
        }
        count += static_cast<std::int64_t>(ch.size());
    }
    CHECK(sum_h / count == doctest::Approx(5.0).epsilon(0.01));
    CHECK(sum_g / count == doctest::Approx(5.0).epsilon(0.01));

    p.rice_los_ratio = 0.0;
    double sum_r = 0.0;
    for (std::uint64_t r = 0; r < 1000; ++r) {
        const auto ch = sample(p, child_seed(2, r, 0));
        for (const auto &h : ch.tx_to_ris)
            sum_r += std::norm(h);
    }
    CHECK(sum_r / 1e6 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("cascaded magnitude mean matches an independent Gaussian Monte Carlo")
{
    SystemParams p = reference_params();
    p.max_elements = 1000;
    double ours = 0.0;
    for (std::uint64_t r = 0; r < 200; ++r) {
        const auto cc = cascade(sample(p, child_seed(3, r, 0)));
        for (const double a : cc.alpha)
            ours += a;
    }
    ours /= 200.0 * 1000.0;

    std::mt19937_64 gen(12345);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    const double los = 2.0;
    double theirs = 0.0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        const cdouble h(los + nd(gen), nd(gen));
        const cdouble g(los + nd(gen), nd(gen));
        theirs += std::abs(h) * std::abs(g);
    }
    theirs /= draws;
    CHECK(ours == doctest::Approx(theirs).epsilon(0.01));
}

TEST_CASE("Rng primitives")
{
    Rng rng(77);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);

    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto k = rng.uniform_int(3, 9);
        REQUIRE(k >= 3);
        REQUIRE(k <= 9);
        ++hist[static_cast<std::size_t>(k - 3)];
    }
    for (const int h : hist)
        CHECK(h == doctest::Approx(10000).epsilon(0.05));
    CHECK(rng.uniform_int(5, 5) == 5);
    CHECK_THROWS_AS(rng.uniform_int(2, 1), DomainError);

    cdouble mean{};
    double power = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const cdouble z = rng.complex_normal();
        mean += z;
        power += std::norm(z);
    }
    CHECK(std::abs(mean / 200000.0) < 0.01);
    CHECK(power / 200000.0 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("seeding is deterministic and streams are distinct")
{
    const auto p = reference_params();
    const auto a = sample(p, 1234);
    const auto b = sample(p, 1234);
    CHECK(a.tx_to_ris == b.tx_to_ris);
    CHECK(a.ris_to_rx == b.ris_to_rx);
    CHECK(a.feedback == b.feedback);
    CHECK(sample(p, 1235).tx_to_ris != a.tx_to_ris);

    CHECK(child_seed(42, 0, 0, 0) == child_seed(42, 0, 0, 0));
    CHECK(child_seed(42, 0, 0, 0) != child_seed(42, 1, 0, 0));
    CHECK(child_seed(42, 0, 0, 0) != child_seed(42, 0, 1, 0));
    CHECK(child_seed(42, 0, 0, 0) != child_seed(42, 0, 0, 1));
    CHECK(child_seed(42, 1, 0, 0) != child_seed(42, 0, 1, 0));
    CHECK(child_seed(42, 0, 0, 0) != child_seed(43, 0, 0, 0));
    CHECK(a.size() == 200);

    SystemParams bad = p;
    bad.max_elements = 0;
    CHECK_THROWS_AS(sample(bad, 1), DomainError);
}

TEST_CASE("channel record round trip is exact")
{
    const auto ch = sample(reference_params(), 99);
    std::stringstream ss;
    write_realization(ss, ch);
    const std::string text = ss.str();
    CHECK(text.rfind("risopt-channel 1\nelements 200\nfeedback ", 0) == 0);
    const auto back = read_realization(ss);
    CHECK(back.tx_to_ris == ch.tx_to_ris);
    CHECK(back.ris_to_rx == ch.ris_to_rx);
    CHECK(back.feedback == ch.feedback);

    std::istringstream commented("# exported\nrisopt-channel 1\nelements 1\n# fb\nfeedback 1 -0.5\n+1.5 2 3 4e-1\n");
    const auto one = read_realization(commented);
    CHECK(one.feedback == cdouble(1.0, -0.5));
    CHECK(one.tx_to_ris[0] == cdouble(1.5, 2.0));
    CHECK(one.ris_to_rx[0] == cdouble(3.0, 0.4));
}

TEST_CASE("malformed channel records are rejected")
{
    for (const char *text : {"", "risopt-channel 2\n", "risopt-channel 1\nelements 0\n",
                             "risopt-channel 1\nelements 2\nfeedback 1 0\n1 0 1 0\n",
                             "risopt-channel 1\nelements 1\nfeedback 1 0\n1 0 1 x\n",
                             "risopt-channel 1\nelements 1\nfeedback 1 0\n1 0 1\n",
                             "risopt-channel 1\nelements 1\nfeedback 1 0\n1 0 1 nan\n"}) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_realization(in), DomainError);
    }
}
