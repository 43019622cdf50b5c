#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcpoly/check.hpp"
#include "lcpoly/cli.hpp"
#include "lcpoly/error.hpp"
#include "lcpoly/parser.hpp"
#include "lcpoly/pushforward.hpp"
#include "lcpoly/serialize.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
std::string run_config(const std::string& config_json) {
    const auto config = lcpoly::cli::config_from_json(json::parse(config_json));
    const auto result = lcpoly::cli::execute(config);
    json out = result.report;
    out["exit_code"] = result.exit_code;
    out["csv"] = result.csv;
    return out.dump();
}

py::array_t<double> sample_points(const std::string& measure_json, std::size_t n, std::uint64_t seed) {
    const auto m = lcpoly::measure_from_json(json::parse(measure_json));
    const lcpoly::SampleSet s = [&] {
        py::gil_scoped_release release;
        return lcpoly::sample(m, n, seed);
    }();
    py::array_t<double> out({s.size(), s.dim()});
    std::memcpy(out.mutable_data(), s.data().data(), s.data().size() * sizeof(double));
    return out;
}

std::string tv_histogram(const std::vector<double>& a, const std::vector<double>& b, std::size_t bins) {
    return lcpoly::tv_to_json(lcpoly::tv_histogram(a, b, bins)).dump();
}

double skorohod_tv(const std::string& measure_json, const std::vector<double>& e) {
    return lcpoly::skorohod_tv(lcpoly::measure_from_json(json::parse(measure_json)),
                               lcpoly::Direction::normalized(e));
}

std::string density_variance(const std::string& measure_json) {
    return lcpoly::report_to_json(
               lcpoly::check_density_variance(lcpoly::measure_from_json(json::parse(measure_json))))
        .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Polynomial pushforwards of log-concave measures: samplers, TV estimators and inequality checks";
    m.attr("format_version") = lcpoly::kFormatVersion;

    py::register_exception<lcpoly::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<lcpoly::DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
    py::register_exception<lcpoly::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("canonical_polynomial", [](const std::string& text, std::size_t dim) {
        return lcpoly::to_string(lcpoly::parse(text, dim));
    }, py::arg("text"), py::arg("dim"));
    m.def("evaluate", [](const std::string& text, std::size_t dim, const std::vector<double>& x) {
        return lcpoly::parse(text, dim).eval(x);
    }, py::arg("text"), py::arg("dim"), py::arg("x"));
    m.def("run_config", &run_config, py::arg("config_json"), py::call_guard<py::gil_scoped_release>());
    m.def("sample_points", &sample_points, py::arg("measure_json"), py::arg("n"), py::arg("seed"));
    m.def("tv_histogram", &tv_histogram, py::arg("a"), py::arg("b"), py::arg("bins") = 0);
    m.def("skorohod_tv", &skorohod_tv, py::arg("measure_json"), py::arg("e"));
    m.def("density_variance", &density_variance, py::arg("measure_json"));
}
