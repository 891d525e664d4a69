#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "liewn/algebra_io.hpp"
#include "liewn/catalog.hpp"
#include "liewn/propagate.hpp"
#include "liewn/suite.hpp"
#include "liewn/sun.hpp"
#include "liewn/weinorman.hpp"

namespace py = pybind11;
using namespace liewn;
using prop::cplx;
using prop::CMat;

namespace {

sym::Style style_of(const std::string& emit) {
    if (emit == "latex") return sym::Style::Latex;
    if (emit == "text") return sym::Style::Text;
    if (emit == "json") return sym::Style::Json;
    throw Error("emit must be latex, text or json, got '" + emit + "'");
}

lie::Algebra load(const std::string& what, bool validate) {
    if (std::filesystem::exists(what)) return io::load_algebra(what, validate);
    for (const auto& e : catalog::shipped()) {
        if (e.stem == what) return e.make();
    }
    throw Error("no algebra file or shipped algebra named '" + what + "'");
}

sun::GeneratorSet basis(const std::string& name, std::size_t n) {
    if (name == "cwb") return sun::sun_generators(n);
    if (name == "gellmann") return sun::gellmann_generators();
    if (name == "pauli") return sun::pauli_generators();
    if (name == "qubit") return sun::qubit_generators();
    throw Error("basis must be cwb, gellmann, pauli or qubit, got '" + name + "'");
}

prop::EtaBinding eta_of(const py::object& eta) {
    if (py::isinstance<py::str>(eta)) return prop::EtaBinding::parse(eta.cast<std::string>());
    return prop::EtaBinding::constant(eta.cast<std::vector<cplx>>());
}

CMat gate_of(const py::object& target) {
    if (py::isinstance<py::str>(target)) return prop::gate(target.cast<std::string>());
    return target.cast<CMat>();
}

prop::IntegrateOptions options(double rtol, double atol, std::size_t samples, const std::map<std::string, cplx>& params) {
    prop::IntegrateOptions o;
    o.rtol = rtol;
    o.atol = atol;
    o.samples = samples;
    o.parameters = params;
    return o;
}

Eigen::MatrixXcd states_of(const prop::Trajectory& t) {
    const auto rows = static_cast<Eigen::Index>(t.states.size());
    const auto cols = static_cast<Eigen::Index>(t.states.empty() ? 0 : t.states.front().size());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = t.states[r][c];
    }
    return m;
}

py::dict system_dict(const wn::ODESystem& s, sym::Style style) {
    py::list rhs;
    for (const auto& r : s.rhs) {
        rhs.append(py::make_tuple(sym::render(r.num(), style), sym::render(r.den(), style)));
    }
    py::dict d;
    d["rhs"] = rhs;
    d["det"] = sym::render(s.coupling.det, style);
    d["locally_valid"] = s.locally_valid;
    d["note"] = s.singular_locus_note;
    d["rendered"] = wn::render_system(s, style);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wei-Norman factorization engine";
    static py::exception<Error> base(m, "LiewnError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    py::class_<prop::Trajectory>(m, "Trajectory")
        .def_property_readonly("grid", [](const prop::Trajectory& t) { return t.grid; })
        .def_property_readonly("states", &states_of)
        .def_property_readonly("det", [](const prop::Trajectory& t) { return t.det; })
        .def_property_readonly("events",
                               [](const prop::Trajectory& t) {
                                   py::list out;
                                   for (const auto& e : t.events) {
                                       out.append(py::make_tuple(e.t,
                                                                 e.kind == prop::Event::Kind::SingularityWarning
                                                                     ? "singularity-warning"
                                                                     : "step-failure",
                                                                 e.detail));
                                   }
                                   return out;
                               })
        .def("final_state", &prop::Trajectory::final_state)
        .def("to_json", [](const prop::Trajectory& t) { return t.to_json().dump(); });

    py::class_<lie::Algebra>(m, "Algebra")
        .def_readonly("name", &lie::Algebra::name)
        .def_readonly("parameters", &lie::Algebra::parameters)
        .def_property_readonly("order", &lie::Algebra::order)
        .def_property_readonly("generators",
                               [](const lie::Algebra& a) {
                                   return a.has_generators() ? prop::numeric_generators(a) : std::vector<CMat>{};
                               })
        .def("validate",
             [](const lie::Algebra& a, bool jacobi) {
                 const lie::ValidationReport r = lie::validate(a, jacobi);
                 return r.empty() ? std::string() : r.summary();
             },
             py::arg("jacobi") = true, "Empty string when valid, else the report.")
        .def("to_json", [](const lie::Algebra& a) { return io::algebra_to_json(a).dump(); })
        .def("reorder", &lie::reorder, py::arg("perm"))
        .def("similarity_transform",
             [](const lie::Algebra& a, std::size_t i, std::size_t j, const std::string& emit) {
                 return wn::render_lie_vector(wn::similarity_transform(a, i, j), style_of(emit));
             },
             py::arg("i"), py::arg("j"), py::arg("emit") = "text")
        .def("coupling",
             [](const lie::Algebra& a, const std::string& emit) {
                 const wn::CouplingMatrix c = wn::coupling_matrix(a);
                 const sym::Style s = style_of(emit);
                 return py::make_tuple(wn::render_matrix(c.xi, s), sym::render(c.det, s));
             },
             py::arg("emit") = "text", "(xi, det) rendered.")
        .def("decouple", [](const lie::Algebra& a, const std::string& emit) { return system_dict(wn::decoupled_odes(a), style_of(emit)); },
             py::arg("emit") = "text")
        .def("factorize", [](const lie::Algebra& a, const std::string& emit) { return system_dict(wn::factorization_odes(a), style_of(emit)); },
             py::arg("emit") = "text")
        .def("integrate",
             [](const lie::Algebra& a, const py::object& eta, double t0, double t1, std::size_t samples, double rtol,
                double atol, const std::map<std::string, cplx>& params, bool factorize) {
                 const prop::EtaBinding b = eta_of(eta);
                 const wn::ODESystem s = factorize ? wn::factorization_odes(a) : wn::decoupled_odes(a);
                 py::gil_scoped_release release;
                 return prop::integrate(s, b, t0, t1, options(rtol, atol, samples, params));
             },
             py::arg("eta"), py::arg("t0") = 0.0, py::arg("t1") = 1.0, py::arg("samples") = 201,
             py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12, py::arg("params") = std::map<std::string, cplx>{},
             py::arg("factorize") = false,
             "eta: list of constants or a time-function spec (const:..., JSON text or file path).")
        .def("residual",
             [](const lie::Algebra& a, const prop::Trajectory& t, const py::object& eta,
                const std::map<std::string, cplx>& params) { return prop::residual_check(a, t, eta_of(eta), params); },
             py::arg("trajectory"), py::arg("eta"), py::arg("params") = std::map<std::string, cplx>{});

    m.def("load_algebra", &load, py::arg("path_or_stem"), py::arg("validate") = true);
    m.def("shipped_algebras", [] {
        std::vector<std::string> out;
        for (const auto& e : catalog::shipped()) out.push_back(e.stem);
        return out;
    });
    m.def("sun_algebra", [](std::size_t n, const std::string& b) { return sun::algebra(basis(b, n)); }, py::arg("n"),
          py::arg("basis") = "cwb");
    m.def("sun_generators", [](std::size_t n, const std::string& b) { return prop::numeric_generators(basis(b, n)); },
          py::arg("n"), py::arg("basis") = "cwb");
    m.def("assemble_teo",
          [](const std::vector<CMat>& g, const std::vector<cplx>& lambdas) { return prop::assemble_teo_numeric(g, lambdas); },
          py::arg("generators"), py::arg("lambdas"));
    m.def("matrix_oracle",
          [](const std::vector<CMat>& g, const py::object& eta, double t0, double t1) {
              return prop::matrix_oracle(g, eta_of(eta), t0, t1);
          },
          py::arg("generators"), py::arg("eta"), py::arg("t0") = 0.0, py::arg("t1") = 1.0);
    m.def("direct_exponential", &prop::direct_exponential, py::arg("generators"), py::arg("eta"), py::arg("t"));
    m.def("gate", &prop::gate, py::arg("name"));
    m.def("verify_gate",
          [](const CMat& u, const py::object& target, double tol) {
              const prop::GateCheck c = prop::verify_gate(u, gate_of(target), tol);
              return py::make_tuple(c.pass, c.phase, c.residual);
          },
          py::arg("U"), py::arg("target"), py::arg("tol") = 1e-8, "(pass, phase, residual)");
    m.def("bch_closed_form_3gen",
          [](cplx l1, cplx l2, cplx l3, cplx upsilon, cplx epsilon) {
              const wn::BCH3 r = wn::bch_closed_form_3gen(l1, l2, l3, upsilon, epsilon);
              return py::make_tuple(r.L1, r.L2, r.L3);
          },
          py::arg("lambda1"), py::arg("lambda2"), py::arg("lambda3"), py::arg("upsilon"), py::arg("epsilon"));
    m.def("unitarity_check_su2",
          [](cplx l1, cplx l2, cplx l3, double tol) {
              const wn::UnitarityReport r = wn::unitarity_check_su2(l1, l2, l3, tol);
              py::dict d;
              d["pass"] = r.pass();
              d["modulus"] = r.residual_modulus;
              d["real"] = r.residual_real;
              d["phase"] = r.residual_phase;
              d["phase_degenerate"] = r.phase_degenerate;
              return d;
          },
          py::arg("L1"), py::arg("L2"), py::arg("L3"), py::arg("tol") = 1e-8);
    m.def("run_fixtures",
          [](const std::string& prefix, unsigned threads) {
              std::vector<fixtures::CheckResult> r;
              {
                  py::gil_scoped_release release;
                  r = fixtures::run_checks(prefix, threads);
              }
              py::list out;
              for (const auto& c : r) out.append(py::make_tuple(c.id, c.pass, c.detail));
              return out;
          },
          py::arg("prefix") = "", py::arg("threads") = 0);
}
