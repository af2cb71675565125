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

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace risopt {

namespace {

constexpr std::string_view kRecordHeader = "risopt-channel 1";

std::string fmt(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

double parse(const std::string &token, std::size_t line)
{
    double v = 0.0;
    const char *first = token.data();
    const char *last = token.data() + token.size();
    if (first != last && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last)
        throw DomainError("channel record line " + std::to_string(line) + ": bad number '" + token + "'");
    return v;
}

bool finite(cdouble z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

void ChannelRealization::validate() const
{
    if (tx_to_ris.empty())
        throw DomainError("channel realization has no elements");
    if (tx_to_ris.size() != ris_to_rx.size())
        throw DomainError("channel vectors h and g differ in length");
    if (!finite(feedback) || !std::all_of(tx_to_ris.begin(), tx_to_ris.end(), finite) ||
        !std::all_of(ris_to_rx.begin(), ris_to_rx.end(), finite))
        throw DomainError("channel realization contains non-finite entries");
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (hi < lo)
        throw DomainError("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max())
        return static_cast<std::int64_t>(engine_());
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x = engine_();
    while (x >= limit)
        x = engine_();
    return lo + static_cast<std::int64_t>(x % range);
}

cdouble Rng::complex_normal()
{
    // 1 - u lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::polar(std::sqrt(-std::log(u1)), 2.0 * std::numbers::pi * u2);
}

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t realization_index,
                         std::uint64_t power_index, std::uint64_t stream)
{
    std::uint64_t s = mix64(master_seed);
    s = mix64(s ^ realization_index);
    s = mix64(s ^ (power_index * 0xd1342543de82ef95ULL));
    return mix64(s ^ (stream * 0xa0761d6478bd642fULL));
}

ChannelRealization sample(const SystemParams &params, std::uint64_t seed)
{
    if (params.max_elements < 1)
        throw DomainError("sample: max_elements must be at least 1");

    Rng rng(seed);
    const double los = std::sqrt(params.rice_los_ratio);
    const auto n = static_cast<std::size_t>(params.max_elements);

    ChannelRealization ch;
    ch.tx_to_ris.resize(n);
    ch.ris_to_rx.resize(n);
    for (auto &h : ch.tx_to_ris)
        h = los + rng.complex_normal();
    for (auto &g : ch.ris_to_rx)
        g = los + rng.complex_normal();
    ch.feedback = los + rng.complex_normal();
    return ch;
}

CascadedChannel cascade(const ChannelRealization &ch)
{
    ch.validate();
    const std::size_t n = ch.size();

    std::vector<double> magnitude(n);
    std::vector<double> phase(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cdouble term = std::conj(ch.ris_to_rx[i]) * ch.tx_to_ris[i];
        magnitude[i] = std::abs(ch.tx_to_ris[i]) * std::abs(ch.ris_to_rx[i]);
        // Rotating by -arg(term) lands the summand on the positive real axis.
        double rot = term == cdouble{} ? 0.0 : -std::arg(term);
        if (rot < 0.0)
            rot += 2.0 * std::numbers::pi;
        if (rot >= 2.0 * std::numbers::pi)
            rot = 0.0;
        phase[i] = rot;
    }

    CascadedChannel out;
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return magnitude[a] > magnitude[b]; });

    out.alpha.resize(n);
    out.alignment.resize(n);
    out.prefix.resize(n);
    double running = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = out.order[k];
        out.alpha[k] = magnitude[src];
        out.alignment[k] = phase[src];
        running += out.alpha[k];
        out.prefix[k] = running;
    }
    return out;
}

void write_realization(std::ostream &out, const ChannelRealization &ch)
{
    ch.validate();
    out << kRecordHeader << '\n';
    out << "elements " << ch.size() << '\n';
    out << "feedback " << fmt(ch.feedback.real()) << ' ' << fmt(ch.feedback.imag()) << '\n';
    for (std::size_t i = 0; i < ch.size(); ++i) {
        out << fmt(ch.tx_to_ris[i].real()) << ' ' << fmt(ch.tx_to_ris[i].imag()) << ' '
            << fmt(ch.ris_to_rx[i].real()) << ' ' << fmt(ch.ris_to_rx[i].imag()) << '\n';
    }
}

ChannelRealization read_realization(std::istream &in)
{
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> std::istringstream {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!line.empty() && line.front() != '#')
                return std::istringstream(line);
        }
        throw DomainError("channel record truncated after line " + std::to_string(line_no));
    };

    {
        auto header = next_line();
        if (line != kRecordHeader)
            throw DomainError("not a channel record: expected '" + std::string(kRecordHeader) + "'");
    }

    std::string tag;
    std::size_t n = 0;
    {
        auto ls = next_line();
        if (!(ls >> tag >> n) || tag != "elements" || n == 0)
            throw DomainError("channel record line " + std::to_string(line_no) + ": expected 'elements <n>'");
    }

    ChannelRealization ch;
    {
        auto ls = next_line();
        std::string re, im;
        if (!(ls >> tag >> re >> im) || tag != "feedback")
            throw DomainError("channel record line " + std::to_string(line_no) + ": expected 'feedback <re> <im>'");
        ch.feedback = {parse(re, line_no), parse(im, line_no)};
    }

    ch.tx_to_ris.reserve(n);
    ch.ris_to_rx.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto ls = next_line();
        std::array<std::string, 4> tok;
        if (!(ls >> tok[0] >> tok[1] >> tok[2] >> tok[3]))
            throw DomainError("channel record line " + std::to_string(line_no) + ": expected four numbers");
        ch.tx_to_ris.emplace_back(parse(tok[0], line_no), parse(tok[1], line_no));
        ch.ris_to_rx.emplace_back(parse(tok[2], line_no), parse(tok[3], line_no));
    }
    ch.validate();
    return ch;
}

} // namespace risopt
