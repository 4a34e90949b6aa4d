// gradedq._core: JSON-in, JSON-out access to the model commands and the field algebra.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gradedq/examples.hpp"
#include "gradedq/runner.hpp"

namespace py = pybind11;
using namespace gradedq;
using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError({{"", std::string("malformed JSON: ") + e.what()}});
    }
}

ModelFile model_of(const std::string& text) { return parse_model(parse_text(text)); }

// a chart plus fields on it, validated as a qfield document
ChartPtr chart_of(const std::string& chart_text) {
    json doc{{"kind", "qfield"}, {"chart", parse_text(chart_text)}, {"field", json::object()}};
    return std::get<QFieldModel>(parse_model(doc).data).field.chart();
}

GVectorField field_of(const ChartPtr& chart, const std::string& text) { return field_from_json(parse_text(text), chart); }

RunOptions options(std::optional<int> arity, std::uint64_t seed, const std::string& output) {
    if (arity && *arity < 0) throw UsageError("arity must be non-negative");
    return {arity, seed, output};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact checks and constructions for graded Q-manifolds";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    // ModelError carries its issue list; registered last so it is tried first
    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> model_error;
    model_error.call_once_and_store_result(
        [&] { return py::object(py::exception<ModelError>(m, "ModelError", PyExc_ValueError)); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ModelError& e) {
            py::list issues;
            for (const auto& i : e.issues()) {
                py::dict d;
                d["pointer"] = i.pointer;
                d["message"] = i.message;
                issues.append(d);
            }
            py::object type = model_error.get_stored();
            py::object inst = type(e.what());
            inst.attr("issues") = issues;
            PyErr_SetObject(type.ptr(), inst.ptr());
        }
    });

    m.def("model_kinds", &model_kinds);
    m.def("commands", &commands);
    m.def("constructions", &constructions);
    m.def("catalog", [] {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& e : examples::catalog()) out.emplace_back(e.name, e.construction, e.description);
        return out;
    });

    m.def(
        "normalize_model", [](const std::string& text) { return model_to_json(model_of(text)).dump(); },
        py::arg("model_json"), "validate a model document and return it in canonical form");
    m.def(
        "example_model",
        [](const std::string& name, std::uint64_t seed) -> std::optional<std::string> {
            auto mf = example_model(name, seed);
            if (!mf) return std::nullopt;
            return model_to_json(*mf).dump();
        },
        py::arg("name"), py::arg("seed") = 1);
    m.def(
        "run",
        [](const std::string& command, const std::string& model, const std::string& construction,
           std::optional<int> arity, std::uint64_t seed, const std::string& output) {
            ModelFile mf = model_of(model);
            py::gil_scoped_release unlocked;
            return to_json(finalize_report(run_command(command, mf, options(arity, seed, output), construction))).dump();
        },
        py::arg("command"), py::arg("model_json"), py::arg("construction") = "", py::arg("arity") = py::none(),
        py::arg("seed") = 1, py::arg("output") = "");
    m.def(
        "run_example",
        [](const std::string& name, std::optional<int> arity, std::uint64_t seed) {
            py::gil_scoped_release unlocked;
            return to_json(finalize_report(run_example(name, options(arity, seed, "")))).dump();
        },
        py::arg("name"), py::arg("arity") = py::none(), py::arg("seed") = 1);

    m.def("sign_table", &contraction_sign_table, py::arg("up_to"),
          "nested contraction factors sigma(1..up_to)");
    m.def("hamiltonian_constant", [] {
        ConstantOracle c = hamiltonian_constant();
        return py::make_tuple(c.from_homological.get_str(), c.from_poisson.get_str(), c.stable);
    });

    m.def(
        "normalize_poly",
        [](const std::string& chart, const std::string& text) { return parse_poly(text, chart_of(chart)).to_string(); },
        py::arg("chart_json"), py::arg("text"));
    m.def(
        "poly_mul",
        [](const std::string& chart, const std::string& a, const std::string& b) {
            ChartPtr c = chart_of(chart);
            return poly_mul(parse_poly(a, c), parse_poly(b, c)).to_string();
        },
        py::arg("chart_json"), py::arg("a"), py::arg("b"));
    m.def(
        "lie_bracket",
        [](const std::string& chart, const std::string& x, const std::string& y) {
            ChartPtr c = chart_of(chart);
            return field_to_json(lie_bracket(field_of(c, x), field_of(c, y))).dump();
        },
        py::arg("chart_json"), py::arg("x_json"), py::arg("y_json"));
    m.def(
        "apply_field",
        [](const std::string& chart, const std::string& x, const std::string& f) {
            ChartPtr c = chart_of(chart);
            return vf_apply(field_of(c, x), parse_poly(f, c)).to_string();
        },
        py::arg("chart_json"), py::arg("x_json"), py::arg("poly"));
}
