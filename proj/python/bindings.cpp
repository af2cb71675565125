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
#include "risopt/model.hpp"
#include "risopt/objectives.hpp"
#include "risopt/optimizer.hpp"
#include "risopt/validation.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace risopt;

namespace {

ConfigMap to_config_map(const py::dict &raw)
{
    ConfigMap out;
    for (const auto &[key, value] : raw)
        out.emplace(py::str(key).cast<std::string>(), py::str(value).cast<std::string>());
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = R"pbdoc(
        Overhead-aware element-count and phase optimization for RIS-assisted links.

        All quantities are linear SI units (W, Hz, s, bits/s, bits/J).
    )pbdoc";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<ValidationError>(m, "ValidationError", base);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base);
    py::register_exception<DegenerateChannelError>(m, "DegenerateChannelError", base);
    py::register_exception<ContractError>(m, "ContractError", base);
    py::register_exception<OracleCapError>(m, "OracleCapError", base);
    py::register_exception<InfeasibleRunError>(m, "InfeasibleRunError", base);

    py::enum_<PowerSlopeModel>(m, "PowerSlopeModel")
        .value("expanded", PowerSlopeModel::expanded)
        .value("shorthand", PowerSlopeModel::shorthand);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("tx_power", &SystemParams::tx_power)
        .def_readwrite("feedback_power", &SystemParams::feedback_power)
        .def_readwrite("pilot_power", &SystemParams::pilot_power)
        .def_readwrite("bandwidth", &SystemParams::bandwidth)
        .def_readwrite("feedback_bandwidth", &SystemParams::feedback_bandwidth)
        .def_readwrite("noise_psd", &SystemParams::noise_psd)
        .def_readwrite("path_loss", &SystemParams::path_loss)
        .def_readwrite("feedback_path_loss", &SystemParams::feedback_path_loss)
        .def_readwrite("amp_inefficiency", &SystemParams::amp_inefficiency)
        .def_readwrite("feedback_amp_inefficiency", &SystemParams::feedback_amp_inefficiency)
        .def_readwrite("static_power", &SystemParams::static_power)
        .def_readwrite("element_power", &SystemParams::element_power)
        .def_readwrite("feedback_bits", &SystemParams::feedback_bits)
        .def_readwrite("pilot_duration", &SystemParams::pilot_duration)
        .def_readwrite("frame_duration", &SystemParams::frame_duration)
        .def_readwrite("max_elements", &SystemParams::max_elements)
        .def_readwrite("rice_los_ratio", &SystemParams::rice_los_ratio)
        .def_readwrite("slope_model", &SystemParams::slope_model)
        .def("validate", &SystemParams::validate);

    py::class_<DerivedConstants>(m, "DerivedConstants")
        .def(py::init<>())
        .def_readwrite("snr_scale", &DerivedConstants::snr_scale)
        .def_readwrite("frame_fraction", &DerivedConstants::frame_fraction)
        .def_readwrite("overhead_slope", &DerivedConstants::overhead_slope)
        .def_readwrite("feedback_slot_time", &DerivedConstants::feedback_slot_time)
        .def_readwrite("power_intercept", &DerivedConstants::power_intercept)
        .def_readwrite("power_slope", &DerivedConstants::power_slope)
        .def_readwrite("physical_cap", &DerivedConstants::physical_cap)
        .def_readwrite("frame_cap", &DerivedConstants::frame_cap)
        .def_readwrite("max_active", &DerivedConstants::max_active);

    m.def("reference_params", &reference_params, "Parameters of the reference scenario.");
    m.def(
        "from_config", [](const py::dict &raw) { return from_config(to_config_map(raw)); },
        "Build SystemParams from a {key: value} mapping (linear or _db/_dbm keys).");
    m.def(
        "parse_config_text", [](const std::string &text) { return from_config(parse_config_text(text)); },
        "Build SystemParams from `key = value` text.");
    m.def("to_config_text", &to_config_text);
    m.def("compute_beta", &compute_beta);
    m.def("feedback_slot_time", &feedback_slot_time, py::arg("params"), py::arg("feedback_gain"));
    m.def("derive_constants", &derive_constants, py::arg("params"), py::arg("feedback_gain"), py::arg("alpha_max"));

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def(py::init<>())
        .def_readwrite("tx_to_ris", &ChannelRealization::tx_to_ris)
        .def_readwrite("ris_to_rx", &ChannelRealization::ris_to_rx)
        .def_readwrite("feedback", &ChannelRealization::feedback)
        .def("__len__", &ChannelRealization::size)
        .def("to_record",
             [](const ChannelRealization &ch) {
                 std::ostringstream os;
                 write_realization(os, ch);
                 return os.str();
             })
        .def_static("from_record", [](const std::string &text) {
            std::istringstream is(text);
            return read_realization(is);
        });

    py::class_<CascadedChannel>(m, "CascadedChannel")
        .def_readonly("alpha", &CascadedChannel::alpha)
        .def_readonly("prefix", &CascadedChannel::prefix)
        .def_readonly("order", &CascadedChannel::order)
        .def_readonly("alignment", &CascadedChannel::alignment)
        .def("__len__", &CascadedChannel::size)
        .def_property_readonly("alpha_max", &CascadedChannel::alpha_max);

    m.def("sample", &sample, py::arg("params"), py::arg("seed"));
    m.def("cascade", &cascade);
    m.def("child_seed", &child_seed, py::arg("master_seed"), py::arg("realization_index"), py::arg("power_index"),
          py::arg("stream") = 0);

    py::enum_<ObjectiveKind>(m, "ObjectiveKind")
        .value("rate", ObjectiveKind::rate)
        .value("energy_efficiency", ObjectiveKind::energy_efficiency)
        .value("trade_off", ObjectiveKind::trade_off);

    py::class_<Objective>(m, "Objective")
        .def_static("rate", &Objective::rate)
        .def_static("energy_efficiency", &Objective::energy_efficiency)
        .def_static("trade_off", &Objective::trade_off, py::arg("weight"), py::arg("rate_opt"), py::arg("ee_opt"))
        .def_property_readonly("kind", &Objective::kind)
        .def_property_readonly("weight", &Objective::weight)
        .def_property_readonly("rate_opt", &Objective::rate_opt)
        .def_property_readonly("ee_opt", &Objective::ee_opt);

    py::class_<ObjectiveValue>(m, "ObjectiveValue")
        .def_readonly("value", &ObjectiveValue::value)
        .def_readonly("rate", &ObjectiveValue::rate)
        .def_readonly("power", &ObjectiveValue::power)
        .def_readonly("ee", &ObjectiveValue::ee);

    py::class_<PhaseConfig>(m, "PhaseConfig")
        .def(py::init<>())
        .def_readwrite("elements", &PhaseConfig::elements)
        .def_readwrite("phases", &PhaseConfig::phases);

    m.def(
        "optimal_phases",
        [](const ChannelRealization &ch, const std::vector<std::size_t> &active) { return optimal_phases(ch, active); },
        py::arg("channel"), py::arg("active"));
    m.def("strongest_phases", py::overload_cast<const CascadedChannel &, std::int64_t>(&optimal_phases),
          py::arg("cascade"), py::arg("n"));
    m.def("composite_gain", &composite_gain);
    m.def("spectral_gain", &spectral_gain, py::arg("cascade"), py::arg("n"), py::arg("beta"));
    m.def("rate", &rate, py::arg("cascade"), py::arg("n"), py::arg("constants"), py::arg("bandwidth"));
    m.def("total_power", &total_power, py::arg("n"), py::arg("constants"));
    m.def("energy_efficiency", &energy_efficiency, py::arg("cascade"), py::arg("n"), py::arg("constants"),
          py::arg("bandwidth"));
    m.def("scalarized_tradeoff", &scalarized_tradeoff, py::arg("cascade"), py::arg("n"), py::arg("constants"),
          py::arg("bandwidth"), py::arg("objective"));
    m.def("evaluate", &evaluate, py::arg("cascade"), py::arg("n"), py::arg("constants"), py::arg("bandwidth"),
          py::arg("objective"));

    py::enum_<SearchMethod>(m, "SearchMethod")
        .value("greedy", SearchMethod::greedy)
        .value("brute_force", SearchMethod::brute_force);

    py::class_<TracePoint>(m, "TracePoint").def_readonly("n", &TracePoint::n).def_readonly("value", &TracePoint::value);

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("n_star", &OptimizationResult::n_star)
        .def_readonly("value", &OptimizationResult::value)
        .def_readonly("metrics", &OptimizationResult::metrics)
        .def_readonly("phases", &OptimizationResult::phases)
        .def_readonly("assumption_ok", &OptimizationResult::assumption_ok)
        .def_readonly("trace", &OptimizationResult::trace)
        .def_readonly("method", &OptimizationResult::method);

    py::class_<AssumptionCheck>(m, "AssumptionCheck")
        .def_readonly("ok", &AssumptionCheck::ok)
        .def_readonly("peak_snr", &AssumptionCheck::peak_snr)
        .def_readonly("margin", &AssumptionCheck::margin);

    py::class_<OptimizerOptions>(m, "OptimizerOptions")
        .def(py::init<>())
        .def_readwrite("fallback_brute_force_on_assumption_violation",
                       &OptimizerOptions::fallback_brute_force_on_assumption_violation)
        .def_readwrite("oracle_cap", &OptimizerOptions::oracle_cap);

    py::class_<ParetoPoint>(m, "ParetoPoint")
        .def_readonly("w", &ParetoPoint::w)
        .def_readonly("n_star", &ParetoPoint::n_star)
        .def_readonly("rate", &ParetoPoint::rate)
        .def_readonly("ee", &ParetoPoint::ee);

    m.def("check_assumption", &check_assumption);
    m.def("greedy", &greedy, py::arg("cascade"), py::arg("constants"), py::arg("objective"), py::arg("bandwidth"));
    m.def("brute_force", &brute_force, py::arg("cascade"), py::arg("constants"), py::arg("objective"),
          py::arg("bandwidth"), py::arg("cap") = kDefaultOracleCap);
    m.def("optimize", &optimize, py::arg("cascade"), py::arg("constants"), py::arg("objective"), py::arg("bandwidth"),
          py::arg("options") = OptimizerOptions{});
    m.def(
        "pareto_sweep",
        [](const CascadedChannel &cc, const DerivedConstants &dc, double bw, std::vector<double> weights) {
            return pareto_sweep(cc, dc, bw, weights);
        },
        py::arg("cascade"), py::arg("constants"), py::arg("bandwidth"), py::arg("weights") = default_weight_grid());
    m.def("default_weight_grid", &default_weight_grid);

    py::enum_<Scheme>(m, "Scheme")
        .value("optimal_both", Scheme::optimal_both)
        .value("random_n_optimal_phase", Scheme::random_n_optimal_phase)
        .value("random_both", Scheme::random_both);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("params", &ExperimentSpec::params)
        .def_readwrite("power_sweep_dbm", &ExperimentSpec::power_sweep_dbm)
        .def_readwrite("n_realizations", &ExperimentSpec::n_realizations)
        .def_readwrite("scheme", &ExperimentSpec::scheme)
        .def_readwrite("master_seed", &ExperimentSpec::master_seed)
        .def_readwrite("objectives", &ExperimentSpec::objectives)
        .def_readwrite("optimizer", &ExperimentSpec::optimizer)
        .def_readwrite("threads", &ExperimentSpec::threads)
        .def_readwrite("max_skip_fraction", &ExperimentSpec::max_skip_fraction)
        .def_readwrite("element_power_dbm", &ExperimentSpec::element_power_dbm)
        .def_readwrite("weights", &ExperimentSpec::weights);

    py::class_<SchemeRow>(m, "SchemeRow")
        .def_readonly("power_dbm", &SchemeRow::power_dbm)
        .def_readonly("scheme", &SchemeRow::scheme)
        .def_readonly("objective", &SchemeRow::objective)
        .def_readonly("mean_rate", &SchemeRow::mean_rate)
        .def_readonly("se_rate", &SchemeRow::se_rate)
        .def_readonly("mean_ee", &SchemeRow::mean_ee)
        .def_readonly("se_ee", &SchemeRow::se_ee)
        .def_readonly("mean_n_star", &SchemeRow::mean_n_star)
        .def_readonly("se_n_star", &SchemeRow::se_n_star)
        .def_readonly("n_realizations", &SchemeRow::n_realizations)
        .def_readonly("n_skipped", &SchemeRow::n_skipped);

    py::class_<MaximizerRow>(m, "MaximizerRow")
        .def_readonly("power_dbm", &MaximizerRow::power_dbm)
        .def_readonly("mean_n_rate", &MaximizerRow::mean_n_rate)
        .def_readonly("se_n_rate", &MaximizerRow::se_n_rate)
        .def_readonly("mean_n_ee", &MaximizerRow::mean_n_ee)
        .def_readonly("se_n_ee", &MaximizerRow::se_n_ee);

    py::class_<ParetoRow>(m, "ParetoRow")
        .def_readonly("power_dbm", &ParetoRow::power_dbm)
        .def_readonly("element_power_dbm", &ParetoRow::element_power_dbm)
        .def_readonly("w", &ParetoRow::w)
        .def_readonly("mean_rate", &ParetoRow::mean_rate)
        .def_readonly("mean_ee", &ParetoRow::mean_ee);

    m.def("run_scheme", [](const ExperimentSpec &spec) { return run_scheme(spec).rows; });
    m.def("table_maximizers", &table_maximizers);
    m.def("pareto_experiment", &pareto_experiment);
    m.def(
        "scheme_csv",
        [](const std::vector<SchemeRow> &rows) {
            std::ostringstream os;
            write_scheme_csv(os, rows);
            return os.str();
        },
        "Render sweep rows in the CSV schema used by the command-line tool.");

    m.def(
        "run_validation",
        [](std::int64_t n, std::uint64_t seed) {
            const auto report = run_validation(n, seed);
            py::dict out;
            for (const auto &c : report.checks)
                out[py::str(c.name)] = py::make_tuple(c.passed, c.failed);
            return out;
        },
        py::arg("n_instances") = 100, py::arg("seed") = 1);

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
