#include "g2t/commands.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace g2t;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
    return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict lift_py(const py::object& input, const Config& cfg, const std::string& s, const std::vector<std::string>& points) {
    auto res = run_lift(from_py(input), cfg, s, points);
    py::dict d;
    d["report"] = to_py(res.report.to_json());
    d["flags"] = to_py(res.flags);
    return d;
}

Vec7<cplx> vec_in(const std::vector<cplx>& v) {
    if (v.size() != 7) throw InputError("expected 7 components");
    return Vec7<cplx>::from(v);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "G2 octonion algebra, twistor lifts and loop-group checks";

    static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
    static py::exception<RejectedMap> rejected(m, "RejectedMap", input_error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const RejectedMap& e) {
            py::object err = py::reinterpret_borrow<py::object>(rejected)(e.what());
            err.attr("kind") = e.kind;
            err.attr("point") = e.point;
            PyErr_SetObject(rejected.ptr(), err.ptr());
        } catch (const InputError& e) {
            py::set_error(input_error, e.what());
        }
    });

    py::class_<Config>(m, "Config")
        .def(py::init([](std::string backend, double tol, int jet_order, std::uint64_t seed, int points, std::string example,
                         double t) {
                 Config c{backend, tol, jet_order, seed, points, example, t};
                 validate(c);
                 return c;
             }),
             py::arg("backend") = "exact", py::arg("tol") = kDefaultTol, py::arg("jet_order") = 3, py::arg("seed") = 42,
             py::arg("points") = 20, py::arg("example") = "all", py::arg("t") = 1.0)
        .def_readwrite("backend", &Config::backend)
        .def_readwrite("tol", &Config::tol)
        .def_readwrite("jet_order", &Config::jet_order)
        .def_readwrite("seed", &Config::seed)
        .def_readwrite("points", &Config::points)
        .def_readwrite("example", &Config::example)
        .def_readwrite("t", &Config::t)
        .def("to_dict", [](const Config& c) { return to_py(config_to_json(c)); })
        .def("__repr__", [](const Config& c) { return "Config(" + config_to_json(c).dump() + ")"; });

    m.def("suite_names", &suite_names);
    m.def(
        "verify", [](const std::string& suite, const Config& cfg) { return to_py(run_suite(suite, cfg).to_json()); },
        py::arg("suite"), py::arg("config") = Config{});
    m.def("lift", &lift_py, py::arg("map"), py::arg("config") = Config{}, py::arg("s") = "auto",
          py::arg("points") = std::vector<std::string>{});
    m.def(
        "build_loop", [](const Config& cfg) { return to_py(build_loop(cfg)); }, py::arg("config"));
    m.def(
        "check_loop", [](const py::object& loop, const Config& cfg) { return to_py(check_loop(from_py(loop), cfg).to_json()); },
        py::arg("loop"), py::arg("config") = Config{});
    m.def(
        "fixtures",
        [](const Config& cfg) {
            py::dict d;
            for (auto& [name, j] : fixture_files(cfg)) d[py::str(name)] = to_py(j);
            return d;
        },
        py::arg("config") = Config{});
    m.def(
        "weight_basis",
        [](const std::string& backend) {
            if (backend == "exact") return to_py(weight_basis_to_json<QI>());
            if (backend == "float") return to_py(weight_basis_to_json<cplx>());
            throw InputError("backend must be exact or float");
        },
        py::arg("backend") = "exact");
    m.def("cross", [](const std::vector<cplx>& u, const std::vector<cplx>& v) { return cross(vec_in(u), vec_in(v)).vec(); });
    m.def("dot", [](const std::vector<cplx>& u, const std::vector<cplx>& v) { return dot(vec_in(u), vec_in(v)); });
    m.def("associator", [](const std::vector<cplx>& u, const std::vector<cplx>& v, const std::vector<cplx>& w) {
        return associator(vec_in(u), vec_in(v), vec_in(w)).vec();
    });
}
