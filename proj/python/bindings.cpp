#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schro/dilation.hpp"
#include "schro/experiment.hpp"
#include "schro/fourier.hpp"
#include "schro/models.hpp"
#include "schro/ode.hpp"
#include "schro/resources.hpp"

namespace py = pybind11;
using namespace schro;

namespace {

Recovery make_recovery(const std::string& kind, std::optional<double> p_star) {
    if (kind == "IntegrateP") return Recovery::integrate();
    if (kind == "PointP") return Recovery::point(p_star);
    throw SchemaError("recovery must be IntegrateP or PointP, got '" + kind + "'");
}

py::dict run_result(const RunResult& r) {
    py::dict d;
    d["exit_code"] = r.exit_code;
    d["message"] = r.message;
    d["files"] = r.files;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Schrodingerisation emulator";

    // translators run newest first, so the base class goes first
    auto base = py::register_exception<SchroError>(m, "SchroError", PyExc_RuntimeError);
    py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
    py::register_exception<CflError>(m, "CflError", base.ptr());

    py::class_<Grid>(m, "Grid")
        .def(py::init([](double a, double b, int M, int d) {
                 Grid g{a, b, M, d};
                 g.validate();
                 return g;
             }),
             py::arg("a"), py::arg("b"), py::arg("M"), py::arg("d") = 1)
        .def_readonly("a", &Grid::a)
        .def_readonly("b", &Grid::b)
        .def_readonly("M", &Grid::M)
        .def_readonly("d", &Grid::d)
        .def_property_readonly("dx", &Grid::dx)
        .def("points", &Grid::points)
        .def("mu", &Grid::mu);

    py::class_<PGrid>(m, "PGrid")
        .def(py::init([](double L, double R, int N, double alpha_neg, double L0) {
                 PGrid p{L, R, N, alpha_neg, L0};
                 p.validate();
                 return p;
             }),
             py::arg("L"), py::arg("R"), py::arg("N"), py::arg("alpha_neg") = 10.0, py::arg("L0") = -1.0)
        .def_readonly("L", &PGrid::L)
        .def_readonly("R", &PGrid::R)
        .def_readonly("N", &PGrid::N)
        .def_property_readonly("dp", &PGrid::dp)
        .def("points", &PGrid::points)
        .def("eta", &PGrid::eta);

    m.def("fourier_matrix", &fourier_matrix, py::arg("M"));
    m.def("dense_expm", &dense_expm, py::arg("A"), py::arg("t") = 1.0);
    m.def(
        "hermitian_split",
        [](const CMat& A) {
            HermitianSplit s = hermitian_split(A);
            return py::make_tuple(s.H1, s.H2);
        },
        py::arg("A"));
    m.def("estimate_domain", &estimate_domain, py::arg("T"), py::arg("s_max"), py::arg("L0") = -1.0);

    m.def(
        "ode_evolve",
        [](const CMat& A, const CVec& u0, const PGrid& pg, double T, const std::string& recovery,
           std::optional<double> p_star) {
            LinearSystem sys{A, CVec(), u0};
            sys.validate();
            SchrodingerisedSystem S = assemble_schrodingerised(hermitian_split(A), pg, u0);
            return CVec(recover(evolve_schrodingerised(S, T), make_recovery(recovery, p_star)));
        },
        py::arg("A"), py::arg("u0"), py::arg("pgrid"), py::arg("T"), py::arg("recovery") = "IntegrateP",
        py::arg("p_star") = py::none(),
        "Schrodingerised evolution of du/dt = A u, recovered at time T.");

    m.def(
        "heat_evolve",
        [](const Grid& g, const PGrid& pg, const CVec& u0, double T, const std::string& recovery,
           std::optional<double> p_star, std::function<double(std::vector<double>)> V) {
            ScalarField f = V ? ScalarField([V](const std::vector<double>& x) { return V(x); })
                              : ScalarField([](const std::vector<double>&) { return 0.0; });
            HeatModel hm = build_heat(f, g, pg);
            WarpedState w = heat_evolve_exact(hm, extend_initial(u0, pg, g), T);
            return CVec(recover(w, make_recovery(recovery, p_star)));
        },
        py::arg("grid"), py::arg("pgrid"), py::arg("u0"), py::arg("T"), py::arg("recovery") = "PointP",
        py::arg("p_star") = py::none(), py::arg("V") = py::none(),
        "Heat equation u_t = Laplacian u + V u through the Schrodingerised lattice.");

    m.def(
        "dilation_step",
        [](const CMat& H1, const CMat& H2, double dt, const std::string& variant) {
            DilationVariant v = variant == "TheoremArccos" ? DilationVariant::TheoremArccos : DilationVariant::ExactExp;
            if (variant != "TheoremArccos" && variant != "ExactExp")
                throw SchemaError("variant must be ExactExp or TheoremArccos");
            DilationStep st = build_dilation_step(H1, H2, dt, v);
            py::dict d;
            d["top"] = st.Hdt;
            d["S"] = st.S;
            d["U"] = st.Utilde;
            d["phase"] = st.phase;
            return d;
        },
        py::arg("H1"), py::arg("H2"), py::arg("dt"), py::arg("variant") = "ExactExp");
    m.def(
        "ladder_evolve",
        [](const CMat& H1, const CMat& H2, double dt, int n_steps, const CVec& psi0) {
            LadderResult r = ladder_evolve(H1, H2, dt, n_steps, psi0);
            return py::make_tuple(r.final_top, r.success_prob);
        },
        py::arg("H1"), py::arg("H2"), py::arg("dt"), py::arg("n_steps"), py::arg("psi0"));

    m.def(
        "estimate_json",
        [](const std::string& query) {
            CostEstimate e = estimate(parse_cost_query(json::parse(query)));
            py::dict d;
            d["count"] = e.count;
            d["polylog"] = e.polylog;
            d["total"] = e.total();
            d["tau"] = e.tau;
            d["formula"] = e.formula;
            return d;
        },
        py::arg("query"));
    m.def(
        "heat_cost_ratio",
        [](double dx, double ell, int d, double eps) { return heat_cost_ratio(dx, ell, d, eps).value; }, py::arg("dx"),
        py::arg("ell"), py::arg("d"), py::arg("eps"));

    m.def(
        "validate_json", [](const std::string& config) { parse_config(json::parse(config)); }, py::arg("config"));
    m.def(
        "run_json",
        [](const std::string& config, const std::string& out_dir) {
            ExperimentConfig c = parse_config(json::parse(config));
            py::gil_scoped_release nogil;
            RunResult r = run_experiment(c, out_dir);
            py::gil_scoped_acquire gil;
            return run_result(r);
        },
        py::arg("config"), py::arg("out_dir") = "");
}
