// Python bindings for the laboratory's main operations: loops and linking
// numbers, mollifiers, spectral models, shell grids, smeared commutators,
// and scene running.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linklab/commutator.hpp"
#include "linklab/scene.hpp"

namespace py = pybind11;
using namespace linklab;

namespace {

FourVector vec(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
std::array<double, 4> arr(const FourVector& v) { return {v.t, v.x, v.y, v.z}; }

}  // namespace

PYBIND11_MODULE(_linklab, m) {
    m.doc() = "smeared commutators of closed two-form fields";

    py::register_exception<GridUnresolved>(m, "GridUnresolvedError", PyExc_ArithmeticError);

    py::class_<ParamLoop>(m, "Loop")
        .def("position", [](const ParamLoop& l, double u) { return arr(l.position(u)); })
        .def("tangent", [](const ParamLoop& l, double u) { return arr(l.tangent(u)); })
        .def("centroid", [](const ParamLoop& l) { return arr(l.centroid()); })
        .def("reversed", &ParamLoop::reversed)
        .def("time_scaled", &ParamLoop::time_scaled)
        .def("to_polyline", &ParamLoop::to_polyline, py::arg("n"));

    m.def(
        "circle",
        [](const std::array<double, 4>& center, const std::array<double, 4>& e1,
           const std::array<double, 4>& e2, double radius) {
            return make_circle(vec(center), vec(e1), vec(e2), radius);
        },
        py::arg("center"), py::arg("e1"), py::arg("e2"), py::arg("radius"));
    m.def("polyline", [](const std::vector<std::array<double, 4>>& verts) {
        std::vector<FourVector> vs;
        vs.reserve(verts.size());
        for (const auto& v : verts) vs.push_back(vec(v));
        return make_polyline(std::move(vs));
    });
    m.def(
        "torus_link_pair",
        [](int lam) {
            const LinkedPair p = make_torus_link_pair(lam);
            return py::make_tuple(p.first, p.second);
        },
        py::arg("linking"));
    m.def(
        "reference_link_pair",
        []() {
            const LinkedPair p = reference_link_pair();
            return py::make_tuple(p.first, p.second);
        },
        "unit circles in orthogonal planes, linking number +1");
    m.def("is_spatial", [](const ParamLoop& l) { return is_spatial(l); });

    m.def(
        "gauss_linking",
        [](const ParamLoop& a, const ParamLoop& b, int panels) {
            LinkingEstimate e;
            {
                py::gil_scoped_release rel;
                e = gauss_linking(a, b, panels);
            }
            return py::make_tuple(e.value, e.error);
        },
        py::arg("a"), py::arg("b"), py::arg("panels") = 48);
    m.def(
        "crossing_sign_linking",
        [](const ParamLoop& a, const ParamLoop& b) { return crossing_sign_linking(a, b); },
        py::arg("a"), py::arg("b"));
    m.def("causal_linking_number", &causal_linking_number, py::arg("a"), py::arg("b"),
          py::arg("segments") = 512, py::arg("panels") = 48,
          py::call_guard<py::gil_scoped_release>());

    py::class_<Mollifier>(m, "Mollifier")
        .def_static("gaussian", &Mollifier::gaussian, py::arg("width"))
        .def_static("bump", &Mollifier::bump, py::arg("radius"))
        .def("scaled", &Mollifier::scaled)
        .def("mixed_with", &Mollifier::mixed_with)
        .def("__call__", [](const Mollifier& s, const std::array<double, 4>& x) { return s(vec(x)); })
        .def("hat", [](const Mollifier& s, const std::array<double, 4>& p) { return s.hat(vec(p)); })
        .def("integral", &Mollifier::integral)
        .def("effective_radius", &Mollifier::effective_radius);

    py::class_<ShellGrid>(m, "ShellGrid")
        .def(py::init<>())
        .def_readwrite("radial_nodes", &ShellGrid::radial_nodes)
        .def_readwrite("radial_scale", &ShellGrid::radial_scale)
        .def_readwrite("polar_nodes", &ShellGrid::polar_nodes)
        .def_readwrite("azimuthal_nodes", &ShellGrid::azimuthal_nodes)
        .def_readwrite("refinement", &ShellGrid::refinement)
        .def("k_max", &ShellGrid::k_max)
        .def("scaled", &ShellGrid::scaled, py::arg("factor"));
    m.def("suggest_shell_grid", &suggest_shell_grid, py::arg("min_width"), py::arg("extent"),
          py::arg("transverse"));

    py::class_<FieldPairModel>(m, "FieldPairModel");
    m.def("massless_model", &massless_model, py::arg("c1"), py::arg("c2"),
          py::arg("weight") = 1.0);
    m.def("massive_atom_model", &massive_atom_model, py::arg("m"), py::arg("weight") = 1.0,
          py::arg("c1") = 1.0);

    py::class_<CommutatorReport>(m, "CommutatorReport")
        .def_readonly("value", &CommutatorReport::value)
        .def_readonly("error_estimate", &CommutatorReport::error_estimate)
        .def_readonly("l1_scale", &CommutatorReport::l1_scale);

    m.def(
        "intrinsic_commutator",
        [](const FieldPairModel& model, const Mollifier& s1, const ParamLoop& l1,
           const Mollifier& s2, const ParamLoop& l2, const ShellGrid& grid, int workers) {
            IntrinsicOptions opt;
            opt.workers = workers;
            return intrinsic_commutator(model, s1, l1, s2, l2, grid, opt);
        },
        py::arg("model"), py::arg("s1"), py::arg("loop1"), py::arg("s2"), py::arg("loop2"),
        py::arg("grid"), py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

    py::class_<ZReport>(m, "ZReport")
        .def_readonly("z", &ZReport::z)
        .def_readonly("imag_residual", &ZReport::imag_residual)
        .def_readonly("error", &ZReport::error);
    m.def("extract_Z", &extract_Z, py::arg("model"), py::arg("s"), py::arg("grid"),
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

    py::class_<ProportionalityRow>(m, "ProportionalityRow")
        .def_readonly("linking", &ProportionalityRow::lambda)
        .def_readonly("value", &ProportionalityRow::value)
        .def_readonly("ratio", &ProportionalityRow::ratio)
        .def_readonly("error", &ProportionalityRow::error);
    py::class_<ProportionalityReport>(m, "ProportionalityReport")
        .def_readonly("z", &ProportionalityReport::z)
        .def_readonly("rows", &ProportionalityReport::rows);
    m.def("verify_linking_proportionality", &verify_linking_proportionality, py::arg("model"),
          py::arg("s"), py::arg("linkings"), py::arg("grid"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<MassRow>(m, "MassRow")
        .def_readonly("m", &MassRow::m)
        .def_readonly("value", &MassRow::value)
        .def_readonly("error", &MassRow::error)
        .def_readonly("l1_scale", &MassRow::l1_scale);
    m.def("mass_gap_sweep", &mass_gap_sweep, py::arg("masses"), py::arg("s"), py::arg("grid"),
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

    m.def("validate_scene_text", [](const std::string& text) {
        return validate_scene(parse_scene_text(text));
    });
    m.def(
        "run_scene_text",
        [](const std::string& text, int refine, int workers, std::uint64_t seed,
           const std::string& experiment) {
            RunOptions opt;
            opt.refine = refine;
            opt.workers = workers;
            opt.seed = seed;
            opt.experiment_override = experiment;
            opt.scene_hash = fnv1a_hash(text);
            opt.scene_label = "(python)";
            SceneOutcome out;
            {
                py::gil_scoped_release rel;
                out = run_scene(parse_scene_text(text), opt);
            }
            return py::make_tuple(out.exit_code, out.report, out.table);
        },
        py::arg("text"), py::arg("refine") = 0, py::arg("workers") = 1, py::arg("seed") = 7,
        py::arg("experiment") = "");
}
