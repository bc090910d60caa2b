#include <pybind11/pybind11.h>

#include "roughiso/api.hpp"
#include "roughiso/errors.hpp"

namespace py = pybind11;
using roughiso::Json;

namespace {

// Requests and responses cross the boundary as JSON text; the Python side
// wraps them with json.loads/json.dumps.
template <class Fn>
py::tuple call(const std::string& request, Fn&& fn) {
  const Json req = Json::parse(request);
  roughiso::api::Outcome out;
  {
    py::gil_scoped_release release;
    out = fn(req);
  }
  return py::make_tuple(out.doc.dump(), out.ok);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rough isometries between Bernoulli percolations (JSON transport)";

  static py::exception<roughiso::Error> error(m, "RoughisoError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const roughiso::Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(roughiso::to_string(e.kind())),
                                                  e.what()).ptr());
    } catch (const Json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("sample", [](const std::string& r) { return call(r, roughiso::api::sample); },
        py::arg("request"));
  m.def("decompose", [](const std::string& r) { return call(r, roughiso::api::decompose); },
        py::arg("request"));
  m.def(
      "construct",
      [](const std::string& r, bool include_mapping) {
        return call(r, [&](const Json& j) { return roughiso::api::construct(j, include_mapping); });
      },
      py::arg("request"), py::arg("include_mapping") = true);
  m.def("verify", [](const std::string& r) { return call(r, roughiso::api::verify); },
        py::arg("request"));
  m.def("oracle", [](const std::string& r) { return call(r, roughiso::api::oracle); },
        py::arg("request"));
  m.def("lattice", [](const std::string& r) { return call(r, roughiso::api::lattice); },
        py::arg("request"));
  m.def(
      "experiment",
      [](const std::string& r, bool wall) {
        return call(r, [&](const Json& j) { return roughiso::api::experiment(j, wall); });
      },
      py::arg("spec"), py::arg("include_wall_time") = false);
}
