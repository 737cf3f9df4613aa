#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "poissonlab/report.hpp"

namespace py = pybind11;
namespace pl = poissonlab;

namespace {

py::dict check_to_dict(const pl::CheckRecord& c) {
    py::dict d;
    d["id"] = c.id;
    d["max_defect"] = c.max_defect;
    d["worst_point"] = c.worst_point;
    d["tolerance"] = c.tolerance;
    d["pass"] = c.pass;
    d["status"] = c.status;
    d["points_evaluated"] = c.points_evaluated;
    d["points_skipped"] = c.points_skipped;
    d["note"] = c.note;
    return d;
}

py::dict identity_to_dict(const pl::IdentityResult& r) {
    py::dict d;
    d["id"] = r.id;
    d["max_defect"] = r.max_defect;
    d["worst_point"] = r.worst_point;
    d["tolerance"] = r.tolerance;
    d["pass"] = r.pass;
    d["assertive"] = r.assertive;
    d["note"] = r.note;
    return d;
}

pl::Structure resolve(const std::string& id_or_text) {
    if (id_or_text.find('\n') != std::string::npos) return pl::load_structure(id_or_text);
    return pl::gallery_structure(id_or_text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Poisson/metric compatibility toolkit (C++ core)";

    py::register_exception<pl::Error>(m, "PoissonLabError");

    py::class_<pl::Structure>(m, "Structure")
        .def_readonly("name", &pl::Structure::name)
        .def_readonly("dim", &pl::Structure::n)
        .def_readonly("coords", &pl::Structure::coords)
        .def_readonly("base", &pl::Structure::base)
        .def_readonly("base_rank", &pl::Structure::base_rank)
        .def_property_readonly("signature",
                               [](const pl::Structure& s) {
                                   return py::make_tuple(s.signature.first, s.signature.second);
                               })
        .def("pi", [](const pl::Structure& s, const pl::Point& p) {
            auto m_ = s.pi_value(p);
            std::vector<std::vector<double>> out(static_cast<std::size_t>(s.n),
                                                 std::vector<double>(static_cast<std::size_t>(s.n)));
            for (int i = 0; i < s.n; ++i)
                for (int j = 0; j < s.n; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m_(i, j);
            return out;
        })
        .def("cometric", [](const pl::Structure& s, const pl::Point& p) {
            auto m_ = s.cometric_value(p);
            std::vector<std::vector<double>> out(static_cast<std::size_t>(s.n),
                                                 std::vector<double>(static_cast<std::size_t>(s.n)));
            for (int i = 0; i < s.n; ++i)
                for (int j = 0; j < s.n; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m_(i, j);
            return out;
        })
        .def("to_text", [](const pl::Structure& s) { return pl::structure_to_text(s); });

    m.def("gallery_ids", &pl::gallery_ids);
    m.def("load_structure", [](const std::string& text, bool allow_non_poisson) {
              return pl::load_structure(text, allow_non_poisson);
          },
          py::arg("text"), py::arg("allow_non_poisson") = false);
    m.def("gallery_structure", &pl::gallery_structure, py::arg("id"));

    m.def("eval_jet",
          [](const std::string& expr, const std::vector<std::string>& coords, const pl::Point& p) {
              auto e = pl::parse_expr(expr, coords);
              pl::Jet j = pl::eval_jet(*e, p);
              return py::make_tuple(j.value(), j.partials());
          },
          py::arg("expr"), py::arg("coords"), py::arg("point"),
          "Exact value and first partial derivatives of an expression");

    m.def("classify",
          [](const std::string& id_or_text, int samples, std::uint64_t seed, double tol) {
              pl::Structure S = resolve(id_or_text);
              pl::DefectReport rep = pl::classify(S, samples, seed, tol);
              py::dict d;
              d["structure"] = rep.structure;
              d["seed"] = rep.seed;
              d["samples"] = rep.samples;
              d["tolerance"] = rep.tolerance;
              py::list checks;
              for (const auto& c : rep.checks) checks.append(check_to_dict(c));
              d["checks"] = checks;
              d["conventions"] = rep.conventions;
              return d;
          },
          py::arg("structure"), py::arg("samples") = 200, py::arg("seed") = 1,
          py::arg("tol") = 1e-8);

    m.def("identities",
          [](const std::string& id_or_text, int samples, std::uint64_t seed, double tol) {
              pl::Structure S = resolve(id_or_text);
              auto rs = pl::run_identities(S, samples, seed, tol);
              py::list out;
              for (const auto& r : rs) out.append(identity_to_dict(r));
              return out;
          },
          py::arg("structure"), py::arg("samples") = 100, py::arg("seed") = 1,
          py::arg("tol") = 1e-9);

    m.def("submersion_suite",
          [](const std::string& id, int samples, std::uint64_t seed, double tol) {
              pl::SubmersionSpec sub = pl::gallery_submersion(id);
              auto rep = pl::run_submersion_suite(sub, samples, seed, tol);
              py::list out;
              for (const auto& r : rep.defects) out.append(identity_to_dict(r));
              return out;
          },
          py::arg("id"), py::arg("samples") = 100, py::arg("seed") = 1, py::arg("tol") = 1e-9);

    m.def("trace_leaf",
          [](const std::string& id_or_text, const pl::Point& start,
             const std::vector<std::pair<int, double>>& schedule, double h) {
              pl::Structure S = resolve(id_or_text);
              pl::LeafTrace tr = pl::trace_leaf(S, start, schedule, h);
              py::dict d;
              d["times"] = tr.times;
              d["points"] = tr.points;
              d["max_drift"] = tr.max_drift;
              d["truncated"] = tr.truncated;
              return d;
          },
          py::arg("structure"), py::arg("start"), py::arg("schedule"), py::arg("h") = 1e-3);

    m.def("nabla_pi_max",
          [](const std::string& id_or_text, const pl::Point& p) {
              pl::Structure S = resolve(id_or_text);
              return pl::nabla_pi(S, p).max_abs();
          },
          py::arg("structure"), py::arg("point"),
          "Max component of the contravariant derivative of pi at a point");

    m.def("mean_curvature",
          [](const std::string& id_or_text, const pl::Point& p) {
              pl::Structure S = resolve(id_or_text);
              return pl::mean_curvature(S, p);
          },
          py::arg("structure"), py::arg("point"));
}
