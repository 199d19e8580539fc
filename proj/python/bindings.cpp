#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ztower/cli.hpp"
#include "ztower/errors.hpp"
#include "ztower/growth.hpp"
#include "ztower/iwasawa.hpp"
#include "ztower/jacobian.hpp"
#include "ztower/spec_io.hpp"
#include "ztower/tower.hpp"

namespace py = pybind11;
using namespace ztower;

namespace {

py::int_ to_py(const BigInt& x) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(x.get_str().c_str(), nullptr, 10))); }

py::list to_py(const std::vector<BigInt>& xs) {
  py::list out;
  for (const auto& x : xs) out.append(to_py(x));
  return out;
}

py::dict group_dict(const AbelianGroup& g) {
  py::dict d;
  d["invariant_factors"] = to_py(g.invariant_factors);
  d["free_rank"] = g.free_rank;
  return d;
}

py::dict char_dict(const CharElement& c) {
  py::dict d;
  d["poly"] = c.poly.to_string();
  d["mu"] = c.mu;
  d["lambda"] = c.lambda;
  d["warnings"] = c.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact layer, Jacobian and characteristic-element computations for Z_p^d towers of graphs";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<DisconnectedError>(m, "DisconnectedError", PyExc_ValueError);
  py::register_exception<NonTorsionError>(m, "NonTorsionError", PyExc_ArithmeticError);
  py::register_exception<NonPlanarError>(m, "NonPlanarError", PyExc_ValueError);
  py::register_exception<GuardrailError>(m, "GuardrailError", PyExc_RuntimeError);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI command in-process; returns (exit_code, stdout, stderr).");

  m.def(
      "layer",
      [](const std::string& spec, int n) {
        const SpecFile f = parse_spec_text(spec);
        const LayerGraph l = build_layer(f.spec, n);
        py::dict d;
        d["n"] = n;
        d["vertices"] = l.graph.vertex_names();
        d["edges"] = l.graph.edge_count();
        d["sheets"] = l.sheets;
        d["connected"] = is_connected(l.graph);
        return d;
      },
      py::arg("spec"), py::arg("n"));

  m.def(
      "kappa", [](const std::string& spec, int n) { return to_py(kappa(build_layer(parse_spec_text(spec).spec, n).graph)); },
      py::arg("spec"), py::arg("n"));

  m.def(
      "jacobian",
      [](const std::string& spec, int n) {
        return group_dict(jacobian_invariants(build_layer(parse_spec_text(spec).spec, n).graph));
      },
      py::arg("spec"), py::arg("n"));

  m.def(
      "char_element", [](const std::string& spec) { return char_dict(char_element(parse_spec_text(spec).spec)); },
      py::arg("spec"));

  m.def(
      "char_jacobian",
      [](const std::string& spec) {
        const TowerSpec s = parse_spec_text(spec).spec;
        return char_dict(char_of_jacobian(char_element(s), s.group.d, s.group.p));
      },
      py::arg("spec"));

  m.def(
      "ord_series", [](const std::string& spec, int n_max) { return ord_series(parse_spec_text(spec).spec, n_max).values; },
      py::arg("spec"), py::arg("n_max"));

  m.def(
      "mu_lambda",
      [](const std::string& poly, std::uint64_t p, std::size_t d) {
        const MuLambda ml = mu_lambda(IwasawaPoly::parse(poly, d), p);
        return py::make_tuple(ml.mu, ml.lambda);
      },
      py::arg("poly"), py::arg("p"), py::arg("d") = 1);

  m.def(
      "equal_up_to_unit",
      [](const std::string& a, const std::string& b, std::uint64_t p, std::size_t d) {
        return chars_equal_up_to_unit(IwasawaPoly::parse(a, d), IwasawaPoly::parse(b, d), p);
      },
      py::arg("a"), py::arg("b"), py::arg("p"), py::arg("d") = 1);

  m.def(
      "smith_normal_form",
      [](const std::vector<std::vector<long>>& rows) {
        const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        IntMatrix mat(r, c);
        for (std::size_t i = 0; i < r; ++i) {
          if (rows[i].size() != c) throw std::invalid_argument("ragged matrix");
          for (std::size_t j = 0; j < c; ++j) mat(i, j) = rows[i][j];
        }
        return to_py(smith_normal_form(mat));
      },
      py::arg("rows"));
}
