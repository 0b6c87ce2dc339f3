#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "convalg/cli.hpp"
#include "convalg/convcat.hpp"
#include "convalg/equivcore.hpp"
#include "convalg/errors.hpp"
#include "convalg/finitegroupoid.hpp"
#include "convalg/graphtopos.hpp"
#include "convalg/hecke.hpp"
#include "convalg/leavitt.hpp"
#include "convalg/norms.hpp"

namespace py = pybind11;
using namespace convalg;

namespace {

py::dict norm_dict(const NormReport& r) {
  py::dict d;
  d["i_norm"] = r.i_norm.get_str();
  d["reduced_norm"] = r.reduced.value;
  d["residual"] = r.reduced.residual;
  d["depth"] = r.reduced.depth;
  d["max_bound"] = r.max_bound.get_str();
  return d;
}

py::dict equivalence_dict(const EquivalenceResult& r) {
  py::dict d;
  d["ok"] = r.ok;
  d["instances"] = r.instances;
  d["naturality_checks"] = r.naturality_checks;
  d["limit_checks"] = r.limit_checks;
  d["degenerate_rejected"] = r.degenerate_rejected;
  d["failing_instance"] = r.failing_instance ? py::cast(*r.failing_instance) : py::none();
  d["failure"] = r.failure;
  return d;
}

} // namespace

PYBIND11_MODULE(_convalg, m) {
  m.doc() = "Convolution algebras of graph toposes, finite groupoids and the Z/p^k tower";

  auto parse_error = py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_ValueError);
  (void)parse_error;

  py::class_<RingDescriptor>(m, "Ring")
      .def(py::init([](const std::string& text) { return RingDescriptor::parse(text); }), py::arg("text") = "Q")
      .def_property_readonly("name", &RingDescriptor::name)
      .def("__repr__", [](const RingDescriptor& r) { return "Ring('" + r.name() + "')"; });

  py::class_<Graph>(m, "Graph")
      .def_static("parse", &Graph::parse)
      .def_static("load", &Graph::load)
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("to_text", &Graph::to_text);

  py::class_<LpaElement>(m, "LpaElement")
      .def_static("parse", &LpaElement::parse, py::arg("graph"), py::arg("ring"), py::arg("text"), py::keep_alive<0, 1>())
      .def("__mul__", &lpa_mul)
      .def("__add__", &LpaElement::operator+)
      .def("__sub__", &LpaElement::operator-)
      .def("__eq__", &lpa_equal)
      .def("star", &lpa_star)
      .def("is_zero", &LpaElement::is_zero)
      .def("__str__", &LpaElement::to_string)
      .def("__repr__", [](const LpaElement& e) { return "LpaElement('" + e.to_string() + "')"; });

  m.def(
      "conv_product",
      [](const LpaElement& f, const LpaElement& g) { return to_leavitt(conv_mul(from_leavitt(f), from_leavitt(g))); },
      "Product computed by convolution of compactly supported sections, read back as a Leavitt element.",
      py::keep_alive<0, 1>());

  m.def("relation_suite", [](const Graph& g, const RingDescriptor& ring, const std::string& engine) {
    std::vector<RelationResult> rs =
        engine == "convolution" ? relation_suite(g, ConvEngine{g, ring}) : relation_suite(g, LpaEngine{g, ring});
    py::list out;
    for (const auto& r : rs) out.append(py::make_tuple(r.relation, r.instance, r.holds));
    return out;
  }, py::arg("graph"), py::arg("ring"), py::arg("engine") = "leavitt");

  py::class_<FiniteGroupoid>(m, "Groupoid")
      .def_static("parse", &FiniteGroupoid::parse)
      .def_static("load", &FiniteGroupoid::load)
      .def_static("cyclic", &FiniteGroupoid::cyclic)
      .def_static("pair", &FiniteGroupoid::pair)
      .def_static("symmetric_three", &FiniteGroupoid::symmetric_three)
      .def_property_readonly("num_objects", &FiniteGroupoid::num_objects)
      .def_property_readonly("num_arrows", &FiniteGroupoid::num_arrows)
      .def("to_text", &FiniteGroupoid::to_text)
      .def("orbits", [](const FiniteGroupoid& g) {
        py::list out;
        for (const auto& o : decompose(g)) out.append(py::make_tuple(o.objects.size(), o.isotropy.size()));
        return out;
      }, "(number of objects, isotropy order) per orbit");

  py::class_<GpdElement>(m, "GpdElement")
      .def_static("parse", &GpdElement::parse, py::arg("groupoid"), py::arg("ring"), py::arg("text"), py::keep_alive<0, 1>())
      .def("__mul__", &gpd_convolve)
      .def("__add__", &GpdElement::operator+)
      .def("__eq__", [](const GpdElement& a, const GpdElement& b) { return a == b; })
      .def("star", &gpd_star)
      .def("__str__", &GpdElement::to_string);

  py::class_<TowerElement>(m, "TowerElement")
      .def_static("parse", &TowerElement::parse)
      .def_static("delta", &TowerElement::delta)
      .def("__mul__", &hecke_compose)
      .def("__eq__", [](const TowerElement& a, const TowerElement& b) { return a == b; })
      .def("star", &hecke_star)
      .def("__str__", &TowerElement::to_string);

  m.def("groupoid_norms", [](const GpdElement& f) {
    GroupoidFamily fam(f.groupoid(), f.ring());
    return norm_dict(norm_report(fam, fam.from_gpd(f), 0));
  });
  m.def("hecke_norms", [](const TowerElement& f) {
    HeckeFamily fam(f.p(), std::max(f.k_src(), f.k_tgt()), f.ring());
    return norm_dict(norm_report(fam, fam.from_tower(f), 0));
  });

  m.def("verify_groupoid_equivalence", [](const FiniteGroupoid& g, std::size_t count, std::uint64_t seed, std::size_t max_rank) {
    GroupoidEquivFamily fam(g);
    return equivalence_dict(verify_equivalence(fam, count, seed, max_rank));
  }, py::arg("groupoid"), py::arg("count") = 20, py::arg("seed") = 1, py::arg("max_rank") = 4);
  m.def("verify_graph_equivalence", [](const Graph& g, std::size_t count, std::uint64_t seed, std::size_t max_rank) {
    GraphEquivFamily fam(g);
    return equivalence_dict(verify_equivalence(fam, count, seed, max_rank));
  }, py::arg("graph"), py::arg("count") = 20, py::arg("seed") = 1, py::arg("max_rank") = 4);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "Runs the command-line tool in process; returns (exit code, stdout, stderr).");
}
