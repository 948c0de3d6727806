#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ncpi/config_io.hpp"
#include "ncpi/derivation.hpp"
#include "ncpi/errors.hpp"
#include "ncpi/expr.hpp"
#include "ncpi/verifier.hpp"

namespace py = pybind11;

namespace {

using PyMat = std::vector<std::vector<ncpi::Cplx>>;

ncpi::CMat to_cmat(const PyMat& rows) {
    if (rows.empty()) throw std::invalid_argument("matrix must be non-empty");
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows[0].size());
    ncpi::CMat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != c)
            throw std::invalid_argument("ragged matrix rows");
        for (Eigen::Index j = 0; j < c; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
}

PyMat from_cmat(const ncpi::CMat& m) {
    PyMat rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
    return rows;
}

py::dict report_dict(const ncpi::CheckReport& r) {
    py::dict d;
    d["check"] = r.check_name;
    d["digest"] = r.inputs_digest;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["margin"] = r.margin;
    d["residual"] = r.residual;
    d["pass"] = r.pass;
    d["representation"] = r.representation_used;
    d["note"] = r.note;
    return d;
}

struct PyModel {
    ncpi::LoadedModel lm;

    static PyModel from_spec(const std::string& type, int dim, std::uint64_t seed, double tolerance,
                             const std::vector<int>& sizes) {
        ncpi::ModelConfig cfg;
        cfg.dim = dim;
        cfg.tolerance = tolerance;
        if (type == "scalars") cfg.b_spec = ncpi::SubalgebraSpec::scalars();
        else if (type == "diagonal") cfg.b_spec = ncpi::SubalgebraSpec::diagonal();
        else if (type == "blocks") cfg.b_spec = ncpi::SubalgebraSpec::blocks(sizes);
        else throw ncpi::parse_error("from_spec: type must be scalars|diagonal|blocks");
        PyModel m{ncpi::instantiate(cfg, seed)};
        m.lm.context.materialize_unknown = true;
        return m;
    }

    static PyModel from_json(const std::string& text, std::uint64_t seed) {
        return PyModel{ncpi::instantiate(ncpi::parse_model_config(text), seed)};
    }

    static PyModel from_file(const std::string& path, std::uint64_t seed) {
        return PyModel{ncpi::instantiate(ncpi::load_model_config(path), seed)};
    }
};

struct PyPoly {
    ncpi::NCPoly p;
};

struct PyTensor {
    ncpi::TensorElem u;
};

ncpi::Rep rep_of(const std::string& s) {
    if (s == "stored") return ncpi::Rep::Stored;
    if (s == "canonical") return ncpi::Rep::Canonical;
    if (s == "best") return ncpi::Rep::Best;
    throw std::invalid_argument("representation must be stored|canonical|best");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "operator-coefficient non-commutative polynomial calculus";

    py::register_exception<ncpi::parse_error>(m, "ParseError");
    py::register_exception<ncpi::cap_error>(m, "CapError");

    py::class_<PyModel>(m, "Model")
        .def_static("from_spec", &PyModel::from_spec, py::arg("b_type"), py::arg("dim"),
                    py::arg("seed") = 0, py::arg("tolerance") = 1e-9,
                    py::arg("sizes") = std::vector<int>{},
                    "Build a model with B of the given type (scalars, diagonal, or blocks with "
                    "explicit sizes) and a seeded random self-adjoint X with unit norm.")
        .def_static("from_json", &PyModel::from_json, py::arg("text"), py::arg("seed") = 0)
        .def_static("from_file", &PyModel::from_file, py::arg("path"), py::arg("seed") = 0)
        .def_property_readonly("dim", [](const PyModel& s) { return s.lm.model.dim(); })
        .def_property_readonly("b_dim", [](const PyModel& s) { return s.lm.model.algebra->dim(); })
        .def_property_readonly("b_type",
                               [](const PyModel& s) { return s.lm.model.algebra->spec_name(); })
        .def_property_readonly("tolerance",
                               [](const PyModel& s) { return s.lm.model.algebra->tolerance(); })
        .def("x", [](const PyModel& s) { return from_cmat(s.lm.model.X); })
        .def("basis_element",
             [](const PyModel& s, int k) { return from_cmat(s.lm.model.algebra->basis_elem(k)); })
        .def("expectation",
             [](const PyModel& s, const PyMat& a) {
                 return from_cmat(s.lm.model.algebra->expectation(to_cmat(a)));
             })
        .def("norms",
             [](const PyModel&, const PyMat& a) {
                 const ncpi::CMat m0 = to_cmat(a);
                 return py::make_tuple(ncpi::l2_norm(m0), ncpi::operator_norm(m0));
             })
        .def("parse",
             [](PyModel& s, const std::string& text) { return PyPoly{ncpi::parse_poly(text, s.lm.context)}; })
        .def("__repr__", [](const PyModel& s) {
            return "<ncpi.Model dim=" + std::to_string(s.lm.model.dim()) + " B=" +
                   s.lm.model.algebra->spec_name() + ">";
        });

    py::class_<PyPoly>(m, "Poly")
        .def_property_readonly("degree", [](const PyPoly& s) { return s.p.max_degree(); })
        .def_property_readonly("term_count", [](const PyPoly& s) { return s.p.term_count(); })
        .def("__add__", [](const PyPoly& a, const PyPoly& b) { return PyPoly{a.p.add(b.p)}; })
        .def("__sub__", [](const PyPoly& a, const PyPoly& b) { return PyPoly{a.p.sub(b.p)}; })
        .def("__mul__", [](const PyPoly& a, const PyPoly& b) { return PyPoly{a.p.mul(b.p)}; })
        .def("scale", [](const PyPoly& a, ncpi::Cplx c) { return PyPoly{a.p.scale(c)}; })
        .def("adjoint", [](const PyPoly& a) { return PyPoly{a.p.adjoint()}; })
        .def("fdq", [](const PyPoly& a) { return PyTensor{ncpi::fdq(a.p)}; })
        .def("evaluate", [](const PyPoly& a, const PyModel& m) { return from_cmat(a.p.evaluate(m.lm.model)); })
        .def("norm_R_upper",
             [](const PyPoly& a, double R, const std::string& rep) { return a.p.norm_R_upper(R, rep_of(rep)); },
             py::arg("R"), py::arg("rep") = "best")
        .def("canonical_str", [](const PyPoly& a) { return ncpi::print_canonical(a.p); })
        .def("canonically_equal",
             [](const PyPoly& a, const PyPoly& b, double tol) { return ncpi::canonical_equal(a.p, b.p, tol); },
             py::arg("other"), py::arg("tol") = 1e-12)
        .def("__repr__", [](const PyPoly& a) { return ncpi::print_stored(a.p); });

    py::class_<PyTensor>(m, "Tensor")
        .def_property_readonly("term_count", [](const PyTensor& s) { return s.u.term_count(); })
        .def("__add__", [](const PyTensor& a, const PyTensor& b) { return PyTensor{a.u.add(b.u)}; })
        .def("__sub__", [](const PyTensor& a, const PyTensor& b) { return PyTensor{a.u.sub(b.u)}; })
        .def("mu", [](const PyTensor& a) { return PyPoly{ncpi::mu(a.u)}; })
        .def("pi_upper",
             [](const PyTensor& a, const PyModel& m, const std::string& rep) {
                 const auto r = ncpi::pi_upper(a.u, m.lm.model, rep_of(rep));
                 return py::make_tuple(r.value, r.representation);
             },
             py::arg("model"), py::arg("rep") = "best")
        .def("spatial_norm",
             [](const PyTensor& a, const PyModel& m) { return ncpi::spatial_norm(a.u, m.lm.model); })
        .def("mu_idE_eval",
             [](const PyTensor& a, const PyModel& m) { return from_cmat(ncpi::mu_idE_eval(a.u, m.lm.model)); })
        .def("canonical_str", [](const PyTensor& a) { return ncpi::print_canonical(a.u); })
        .def("__repr__", [](const PyTensor& a) { return ncpi::print_stored(a.u); });

    m.def("sharp", [](const PyTensor& a, const PyTensor& b) { return PyTensor{ncpi::sharp(a.u, b.u)}; });
    m.def("bimodule_act", [](const PyPoly& p, const PyTensor& u, const PyPoly& q) {
        return PyTensor{ncpi::bimodule_act(p.p, u.u, q.p)};
    });
    m.def("x_commutator_tensor",
          [](const PyModel& m) { return PyTensor{ncpi::x_commutator_tensor(m.lm.model.algebra)}; });

    m.def(
        "check_telescoping",
        [](const PyPoly& p, const PyModel& m, double tol) {
            return report_dict(ncpi::check_telescoping(p.p, m.lm.model, tol));
        },
        py::arg("poly"), py::arg("model"), py::arg("tol") = 1e-9);
    m.def(
        "check_poincare",
        [](const PyPoly& p, const PyModel& m, const std::string& variant, double tol) {
            const auto v = variant == "op" ? ncpi::NormVariant::Op : ncpi::NormVariant::L2;
            return report_dict(ncpi::check_poincare(p.p, m.lm.model, v, tol));
        },
        py::arg("poly"), py::arg("model"), py::arg("variant") = "l2", py::arg("tol") = 1e-9);
    m.def("check_kernel", [](const PyPoly& p) { return report_dict(ncpi::check_kernel(p.p)); });
    m.def(
        "check_lemma4",
        [](const PyPoly& p, double radius, const PyModel& m, double tol) {
            py::list out;
            for (const auto& r : ncpi::check_lemma4_bounds(p.p, radius, m.lm.model, tol))
                out.append(report_dict(r));
            return out;
        },
        py::arg("poly"), py::arg("R"), py::arg("model"), py::arg("tol") = 1e-9);
    m.def("sobolev_norm",
          [](const PyPoly& p, const PyModel& m) { return ncpi::sobolev_norm(p.p, m.lm.model); });
    m.def("growth_constant", &ncpi::growth_constant, py::arg("norm_x"), py::arg("radius"));
    m.def("run_suite_json", [](const std::string& config_json) {
        return ncpi::report_to_json(ncpi::run_suite(ncpi::parse_suite_config(config_json)));
    });

    m.attr("__version__") = "0.1.0";
}
