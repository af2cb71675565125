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
#include "risopt/harness.hpp"
#include "risopt/units.hpp"

#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

using namespace risopt;

namespace {

ExperimentSpec small_spec(Scheme scheme, std::int64_t n)
{
    ExperimentSpec spec;
    spec.scheme = scheme;
    spec.n_realizations = n;
    spec.power_sweep_dbm = {10.0, 20.0, 30.0, 40.0};
    return spec;
}

} // namespace

TEST_CASE("scheme names")
{
    CHECK(to_string(Scheme::optimal_both) == "a");
    CHECK(to_string(Scheme::random_n_optimal_phase) == "b");
    CHECK(to_string(Scheme::random_both) == "c");
    CHECK(parse_scheme("b") == Scheme::random_n_optimal_phase);
    CHECK_FALSE(parse_scheme("d").has_value());
    CHECK_FALSE(parse_scheme("").has_value());
}

TEST_CASE("one realization reproduces a direct optimization")
{
    ExperimentSpec spec = small_spec(Scheme::optimal_both, 1);
    spec.power_sweep_dbm = {20.0, 30.0};
    const auto agg = run_scheme(spec);
    REQUIRE(agg.rows.size() == 4);
    for (std::size_t pi = 0; pi < 2; ++pi) {
        SystemParams p = reference_params();
        p.tx_power = units::dbm_to_watts(spec.power_sweep_dbm[pi]);
        const auto ch = sample(p, child_seed(42, 0, pi, 0));
        const auto cc = cascade(ch);
        const auto dc = derive_constants(p, ch.feedback, cc.alpha_max());
        const auto r = optimize(cc, dc, Objective::rate(), p.bandwidth);
        const auto e = optimize(cc, dc, Objective::energy_efficiency(), p.bandwidth);
        const auto &rr = agg.rows[2 * pi];
        const auto &er = agg.rows[2 * pi + 1];
        CHECK(rr.objective == ObjectiveKind::rate);
        CHECK(er.objective == ObjectiveKind::energy_efficiency);
        CHECK(rr.mean_rate == r.metrics.rate);
        CHECK(rr.mean_ee == r.metrics.ee);
        CHECK(rr.mean_n_star == static_cast<double>(r.n_star));
        CHECK(er.mean_ee == e.metrics.ee);
        CHECK(er.mean_n_star == static_cast<double>(e.n_star));
        CHECK(rr.se_rate == 0.0);
        CHECK(rr.n_realizations == 1);
        CHECK(rr.n_skipped == 0);
    }
}

TEST_CASE("optimized configuration beats random element counts, which beat random phases")
{
    const auto a = run_scheme(small_spec(Scheme::optimal_both, 500));
    const auto b = run_scheme(small_spec(Scheme::random_n_optimal_phase, 500));
    const auto c = run_scheme(small_spec(Scheme::random_both, 500));
    REQUIRE(a.rows.size() == b.rows.size());
    REQUIRE(a.rows.size() == c.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(b.rows[i].scheme == Scheme::random_n_optimal_phase);
        if (a.rows[i].objective == ObjectiveKind::rate)
            CHECK(a.rows[i].mean_rate > b.rows[i].mean_rate);
        else
            CHECK(a.rows[i].mean_ee > b.rows[i].mean_ee);
        CHECK(b.rows[i].mean_rate > c.rows[i].mean_rate);
        CHECK(b.rows[i].mean_ee > c.rows[i].mean_ee);
        // Random schemes draw the same N for both objective rows.
        CHECK(b.rows[i].mean_n_star == c.rows[i].mean_n_star);
    }
}

TEST_CASE("random phases give mean squared gain equal to the sum of squared magnitudes")
{
    SystemParams p = reference_params();
    const auto ch = sample(p, 77);
    const auto cc = cascade(ch);
    const auto dc = derive_constants(p, ch.feedback, cc.alpha_max());
    Rng rng(5);
    double ratio = 0.0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        const auto o = random_configuration(ch, cc, dc, p, rng, true);
        const double spectral = o.rate / (dc.frame_fraction * p.bandwidth);
        const double gain_sq = (std::exp2(spectral) - 1.0) / dc.snr_scale;
        double incoherent = 0.0;
        for (std::int64_t k = 0; k < o.n; ++k)
            incoherent += std::norm(ch.tx_to_ris[static_cast<std::size_t>(k)]) *
                          std::norm(ch.ris_to_rx[static_cast<std::size_t>(k)]);
        ratio += gain_sq / incoherent;
        CHECK(o.power == doctest::Approx(dc.power_intercept + p.element_power * static_cast<double>(o.n)));
        CHECK(o.ee == doctest::Approx(o.rate / o.power));
    }
    CHECK(ratio / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("random element counts cover the admissible range uniformly")
{
    SystemParams p = reference_params();
    const auto ch = sample(p, 3);
    const auto cc = cascade(ch);
    const auto dc = derive_constants(p, ch.feedback, cc.alpha_max());
    Rng rng(8);
    double sum = 0.0;
    std::int64_t lo = 1000, hi = 0;
    for (int i = 0; i < 20000; ++i) {
        const auto o = random_configuration(ch, cc, dc, p, rng, false);
        lo = std::min(lo, o.n);
        hi = std::max(hi, o.n);
        sum += static_cast<double>(o.n);
        CHECK(o.rate == rate(cc, o.n, dc, p.bandwidth));
    }
    CHECK(lo == 1);
    CHECK(hi == dc.max_active);
    CHECK(sum / 20000.0 == doctest::Approx((1.0 + static_cast<double>(dc.max_active)) / 2.0).epsilon(0.02));
}

TEST_CASE("vanishing overhead makes every element worth switching on")
{
    ExperimentSpec spec = small_spec(Scheme::optimal_both, 100);
    spec.objectives = {ObjectiveKind::rate};
    spec.params.frame_duration = 1e9;
    const auto agg = run_scheme(spec);
    for (const auto &row : agg.rows)
        CHECK(row.mean_n_star == 200.0);
}

TEST_CASE("thread count does not change results")
{
    for (const Scheme s : {Scheme::optimal_both, Scheme::random_both}) {
        ExperimentSpec spec = small_spec(s, 97);
        const auto serial = run_scheme(spec);
        spec.threads = 4;
        const auto parallel = run_scheme(spec);
        std::ostringstream x, y;
        write_scheme_csv(x, serial.rows);
        write_scheme_csv(y, parallel.rows);
        CHECK(x.str() == y.str());
    }
    ExperimentSpec spec = small_spec(Scheme::optimal_both, 7);
    spec.power_sweep_dbm = {30.0};
    spec.weights = {0.2, 0.5, 0.8};
    const auto serial = pareto_experiment(spec);
    spec.threads = 3;
    const auto parallel = pareto_experiment(spec);
    std::ostringstream x, y;
    write_pareto_csv(x, serial);
    write_pareto_csv(y, parallel);
    CHECK(x.str() == y.str());
}

TEST_CASE("too many infeasible draws abort the run")
{
    ExperimentSpec spec = small_spec(Scheme::optimal_both, 20);
    spec.params.feedback_bits = 1e9;
    CHECK_THROWS_AS(run_scheme(spec), InfeasibleRunError);
    CHECK_THROWS_AS(pareto_experiment(spec), InfeasibleRunError);
    spec.max_skip_fraction = 1.0;
    const auto agg = run_scheme(spec);
    CHECK(agg.rows.front().n_skipped == 20);
}

TEST_CASE("experiment spec validation")
{
    ExperimentSpec spec;
    spec.power_sweep_dbm.clear();
    CHECK_THROWS_AS(run_scheme(spec), DomainError);
    spec = ExperimentSpec{};
    spec.n_realizations = 0;
    CHECK_THROWS_AS(run_scheme(spec), DomainError);
    spec = ExperimentSpec{};
    spec.objectives = {ObjectiveKind::trade_off};
    CHECK_THROWS_AS(run_scheme(spec), DomainError);
    spec = ExperimentSpec{};
    spec.weights = {1.5};
    spec.n_realizations = 2;
    CHECK_THROWS_AS(pareto_experiment(spec), DomainError);
}

TEST_CASE("maximizer table keeps the EE optimum at or below the rate optimum")
{
    ExperimentSpec spec = small_spec(Scheme::random_both, 200);
    spec.power_sweep_dbm = {0.0, 10.0, 20.0, 30.0, 40.0};
    const auto rows = table_maximizers(spec);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].mean_n_ee <= rows[i].mean_n_rate);
        if (i > 0)
            CHECK(rows[i].mean_n_rate < rows[i - 1].mean_n_rate);
    }
    std::ostringstream os;
    write_maximizer_csv(os, rows);
    CHECK(os.str().rfind("power_dbm,mean_n_rate,se_n_rate,mean_n_ee,se_n_ee,n_realizations,n_skipped\n", 0) == 0);
}

TEST_CASE("pareto experiment averages the per-weight points")
{
    ExperimentSpec spec;
    spec.n_realizations = 20;
    spec.power_sweep_dbm = {30.0};
    spec.weights = {0.1, 0.5, 0.9};
    const auto rows = pareto_experiment(spec);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].element_power_dbm == 10.0);
    CHECK(rows[3].element_power_dbm == 15.0);
    for (std::size_t k = 0; k < 2; ++k) {
        const auto *r = &rows[3 * k];
        CHECK(r[0].mean_rate <= r[1].mean_rate);
        CHECK(r[1].mean_rate <= r[2].mean_rate);
        CHECK(r[0].mean_ee >= r[1].mean_ee);
        CHECK(r[1].mean_ee >= r[2].mean_ee);
    }

    // Independent average of single-channel curves.
    SystemParams p = reference_params();
    p.tx_power = 1.0;
    double rate_sum = 0.0;
    for (std::uint64_t r = 0; r < 20; ++r) {
        const auto ch = sample(p, child_seed(42, r, 0, 0));
        const auto cc = cascade(ch);
        const auto dc = derive_constants(p, ch.feedback, cc.alpha_max());
        rate_sum += tradeoff_curve(cc, dc, p.bandwidth, spec.weights)[1].rate;
    }
    CHECK(rows[1].mean_rate == doctest::Approx(rate_sum / 20.0).epsilon(1e-14));
}

TEST_CASE("CSV and JSON writers")
{
    SchemeRow row;
    row.power_dbm = 20.0;
    row.scheme = Scheme::random_both;
    row.objective = ObjectiveKind::energy_efficiency;
    row.mean_rate = 1.5e8;
    row.n_realizations = 10;
    row.n_skipped = 1;
    std::ostringstream csv;
    write_scheme_csv(csv, {row});
    CHECK(csv.str() == "power_dbm,scheme,objective,mean_rate_bps,se_rate,mean_ee_bpj,se_ee,mean_n_star,se_n_star,"
                       "n_realizations,n_skipped\n20,c,ee,1.5e+08,0,0,0,0,0,10,1\n");

    std::ostringstream js;
    write_scheme_json(js, {row});
    const auto parsed = nlohmann::json::parse(js.str());
    CHECK(parsed.size() == 1);
    CHECK(parsed[0]["scheme"] == "c");
    CHECK(parsed[0]["mean_rate_bps"].get<double>() == 1.5e8);

    ParetoRow pr{30.0, 15.0, 0.25, 1e8, 2e6};
    std::ostringstream pcsv;
    write_pareto_csv(pcsv, {pr});
    CHECK(pcsv.str() == "power_dbm,p_cn_dbm,w,mean_rate_bps,mean_ee_bpj\n30,15,0.25,1e+08,2e+06\n");
    std::ostringstream pjs;
    write_pareto_json(pjs, {pr});
    CHECK(nlohmann::json::parse(pjs.str())[0]["p_cn_dbm"].get<double>() == 15.0);

    CHECK(format_number(0.1) == "0.1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
