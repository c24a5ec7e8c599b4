#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diskdens/errors.hpp"
#include "diskdens/orbits.hpp"
#include "diskdens/profiles.hpp"
#include "diskdens/quantum.hpp"
#include "diskdens/semiclassical.hpp"
#include "diskdens/specfun.hpp"

namespace py = pybind11;
using namespace diskdens;

namespace {

Channel to_channel(const py::object& o) {
    if (py::isinstance<py::str>(o)) return parse_channel(o.cast<std::string>());
    return o.cast<Channel>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum and semiclassical local densities of fermions in a disk billiard";

    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
    static py::exception<OpenShellError> open_shell(m, "OpenShellError", PyExc_ValueError);
    static py::exception<CriticalStartError> critical(m, "CriticalStartError", PyExc_ArithmeticError);
    static py::exception<DivergentAmplitude> divergent(m, "DivergentAmplitude", PyExc_ArithmeticError);
    static py::exception<GhostUnavailable> ghost(m, "GhostUnavailable", PyExc_RuntimeError);
    static py::exception<OverlapError> overlap(m, "OverlapError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr ep) {
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const OpenShellError& e) {
            py::object exc = py::reinterpret_borrow<py::object>(open_shell.ptr())(e.what());
            exc.attr("lower") = e.lower();
            exc.attr("upper") = e.upper();
            exc.attr("requested") = e.requested();
            PyErr_SetObject(open_shell.ptr(), exc.ptr());
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const CriticalStartError& e) {
            py::set_error(critical, e.what());
        } catch (const DivergentAmplitude& e) {
            py::set_error(divergent, e.what());
        } catch (const GhostUnavailable& e) {
            py::set_error(ghost, e.what());
        } catch (const OverlapError& e) {
            py::set_error(overlap, e.what());
        }
    });

    m.attr("R") = units::R;
    m.attr("HBAR") = units::hbar;
    m.attr("MASS") = units::mass;

    py::enum_<Channel>(m, "Channel")
        .value("rho", Channel::rho)
        .value("tau", Channel::tau)
        .value("tau1", Channel::tau1)
        .value("xi", Channel::xi);

    // special functions
    m.def("bessel_j", py::overload_cast<int, double>(&bessel_j), py::arg("l"), py::arg("x"));
    m.def("bessel_j_quarter", [](int q, double x) { return bessel_j(BesselOrder::quarter(q), x); }, py::arg("q"),
          py::arg("x"), "J of order q/4 for q in {-3, -1, 1, 3}");
    m.def("bessel_j_prime", &bessel_j_prime, py::arg("l"), py::arg("x"));
    m.def("bessel_zero", &bessel_zero, py::arg("l"), py::arg("n"));
    m.def("gamma_quarter", &gamma_quarter);

    // quantum
    py::class_<Level>(m, "Level")
        .def_readonly("energy", &Level::energy)
        .def_readonly("z", &Level::z)
        .def_readonly("l", &Level::l)
        .def_readonly("n", &Level::n)
        .def_readonly("degeneracy", &Level::degeneracy)
        .def("__repr__", [](const Level& lv) {
            return "Level(l=" + std::to_string(lv.l) + ", n=" + std::to_string(lv.n) +
                   ", energy=" + std::to_string(lv.energy) + ")";
        });
    m.def("build_spectrum", [](double e_max) { return build_spectrum(e_max).levels; }, py::arg("e_max"));
    m.def("fermi_energy", [](int N) { return fermi_energy(N).lambda; }, py::arg("N"));
    m.def("filled_levels", [](int N) { return fermi_energy(N).filled; }, py::arg("N"));
    m.def("counting_weyl", &counting_weyl, py::arg("E"));
    m.def("counting_exact", py::overload_cast<double>(&counting_exact), py::arg("E"));
    m.def("smooth_fermi_energy", &smooth_fermi_energy, py::arg("N"));
    m.def("closed_shell_numbers", &closed_shell_numbers, py::arg("n_max"));
    m.def("shell_correction_exact", &shell_correction_exact, py::arg("N"));

    py::class_<LocalDensities>(m, "LocalDensities")
        .def_readonly("rho", &LocalDensities::rho)
        .def_readonly("tau", &LocalDensities::tau)
        .def_readonly("tau1", &LocalDensities::tau1)
        .def_readonly("xi", &LocalDensities::xi)
        .def_readonly("laplacian_rho", &LocalDensities::laplacian_rho);

    py::class_<QuantumSystem>(m, "QuantumSystem")
        .def(py::init<int>(), py::arg("N"))
        .def_property_readonly("N", &QuantumSystem::N)
        .def_property_readonly("lambda_", &QuantumSystem::lambda)
        .def_property_readonly("filled", &QuantumSystem::filled)
        .def("at", &QuantumSystem::at, py::arg("r"))
        .def(
            "density", [](const QuantumSystem& s, const py::object& ch, double r) { return s.density(to_channel(ch), r); },
            py::arg("channel"), py::arg("r"))
        .def(
            "profile",
            [](const QuantumSystem& s, const py::object& ch, const std::vector<double>& grid, bool delta) {
                return quantum_profile(s, to_channel(ch), grid, delta).values;
            },
            py::arg("channel"), py::arg("grid"), py::arg("delta") = false);

    // orbits
    py::enum_<OrbitKind>(m, "OrbitKind")
        .value("RadialPlus", OrbitKind::RadialPlus)
        .value("RadialMinus", OrbitKind::RadialMinus)
        .value("NonRadialNPO", OrbitKind::NonRadialNPO)
        .value("PeriodicOrbit", OrbitKind::PeriodicOrbit);

    py::class_<OrbitInstance>(m, "OrbitInstance")
        .def_property_readonly("label", [](const OrbitInstance& o) { return o.cls.label(); })
        .def_property_readonly("kind", [](const OrbitInstance& o) { return o.cls.kind; })
        .def_property_readonly("v", [](const OrbitInstance& o) { return o.cls.v; })
        .def_property_readonly("w", [](const OrbitInstance& o) { return o.cls.w; })
        .def_readonly("r", &OrbitInstance::r)
        .def_readonly("p", &OrbitInstance::p)
        .def_readonly("alpha", &OrbitInstance::alpha)
        .def_readonly("beta", &OrbitInstance::beta)
        .def_readonly("length", &OrbitInstance::length)
        .def_readonly("action", &OrbitInstance::action)
        .def_readonly("jacobian", &OrbitInstance::jacobian)
        .def_readonly("q_mismatch", &OrbitInstance::q_mismatch)
        .def_readonly("morse", &OrbitInstance::morse)
        .def_readonly("period", &OrbitInstance::period)
        .def_readonly("degeneracy", &OrbitInstance::degeneracy)
        .def_readonly("ghost", &OrbitInstance::ghost)
        .def("__repr__", [](const OrbitInstance& o) {
            return "OrbitInstance(" + o.cls.label() + ", r=" + std::to_string(o.r) + ")";
        });

    m.def("solve_npo", &solve_npo, py::arg("v"), py::arg("w"), py::arg("r"), py::arg("p"));
    m.def("radial_orbit", &radial_orbit, py::arg("k"), py::arg("sign"), py::arg("r"), py::arg("p"));
    m.def("po_properties", &po_properties, py::arg("v"), py::arg("w"), py::arg("r"), py::arg("p"));
    m.def("odd_npo_continued", &odd_npo_continued, py::arg("k"), py::arg("r"), py::arg("p"));
    m.def("closure_radius", &closure_radius, py::arg("v"), py::arg("w"), py::arg("alpha"));
    m.def("tangent_bifurcation_radius", &tangent_bifurcation_radius, py::arg("v"), py::arg("w"));
    m.def("morse_index", &morse_index, py::arg("orbit"));
    m.def("enumerate_orbits", &enumerate_orbits, py::arg("r"), py::arg("l_max"), py::arg("p"), py::arg("v_max") = 64);
    m.def(
        "bifurcations",
        [](int v, int w) {
            py::list out;
            for (const auto& e : bifurcations(v, w)) {
                py::list children;
                for (const auto& c : e.children) children.append(c.label());
                out.append(py::dict(py::arg("radius") = e.radius, py::arg("type") = bifurcation_type_name(e.type),
                                    py::arg("parent") = e.parent.label(), py::arg("children") = children));
            }
            return out;
        },
        py::arg("v"), py::arg("w"));
    m.def(
        "oracle_appendix",
        [](const std::string& name, double r, double p) { return oracle_appendix(parse_appendix_class(name), r, p); },
        py::arg("name"), py::arg("r"), py::arg("p"));

    // semiclassical
    py::class_<TruncationConfig>(m, "TruncationConfig")
        .def(py::init<>())
        .def_readwrite("k_max_radial", &TruncationConfig::k_max_radial)
        .def_readwrite("k_max_diameter", &TruncationConfig::k_max_diameter)
        .def_readwrite("include_tangent_pairs", &TruncationConfig::include_tangent_pairs)
        .def_readwrite("pitchfork_classes", &TruncationConfig::pitchfork_classes)
        .def_readwrite("switch_fraction", &TruncationConfig::switch_fraction)
        .def_readwrite("overlap_threshold", &TruncationConfig::overlap_threshold)
        .def_readwrite("tangent_guard", &TruncationConfig::tangent_guard)
        .def_readwrite("v_max_tangent", &TruncationConfig::v_max_tangent);

    m.def("amplitude", &amplitude, py::arg("orbit"));
    m.def(
        "isolated_contribution",
        [](const OrbitInstance& o, const py::object& ch) { return isolated_contribution(o, to_channel(ch)); },
        py::arg("orbit"), py::arg("channel") = "rho");
    m.def("friedel_boundary", &friedel_boundary, py::arg("r"), py::arg("p"));

    py::class_<SemiclassicalDensity>(m, "SemiclassicalDensity")
        .def(py::init<int, TruncationConfig>(), py::arg("N"), py::arg("config") = TruncationConfig{})
        .def_static("from_momentum", &SemiclassicalDensity::from_momentum, py::arg("p"),
                    py::arg("config") = TruncationConfig{})
        .def_property_readonly("p", &SemiclassicalDensity::p)
        .def_property_readonly("lambda_tilde", &SemiclassicalDensity::lambda_tilde)
        .def_property_readonly("kinetic_truncation_radius", &SemiclassicalDensity::kinetic_truncation_radius)
        .def(
            "critical_radii",
            [](const SemiclassicalDensity& s) {
                py::list out;
                for (const auto& c : s.plan().critical_radii)
                    out.append(py::make_tuple(c.radius, c.type, c.label));
                return out;
            })
        .def(
            "__call__",
            [](const SemiclassicalDensity& s, double r, const py::object& ch) { return s(r, to_channel(ch)); },
            py::arg("r"), py::arg("channel") = "rho")
        .def(
            "parts",
            [](const SemiclassicalDensity& s, double r, const py::object& ch) {
                auto d = s.parts(r, to_channel(ch));
                return py::dict(py::arg("radial") = d.radial, py::arg("diameter") = d.diameter,
                                py::arg("pitchfork") = d.pitchfork, py::arg("tangent") = d.tangent);
            },
            py::arg("r"), py::arg("channel") = "rho")
        .def(
            "profile",
            [](const SemiclassicalDensity& s, int N, const py::object& ch, const std::vector<double>& grid) {
                return semiclassical_profile(s, N, to_channel(ch), grid).values;
            },
            py::arg("N"), py::arg("channel"), py::arg("grid"));

    m.def("tf_density", [](int N) { auto t = tf_densities(N); return py::make_tuple(t.rho, t.tau); }, py::arg("N"));
    m.def("shell_correction_semiclassical", &shell_correction_semiclassical, py::arg("N"), py::arg("v_max") = 10,
          py::arg("w_max") = 3);
    m.def("linear_grid", &linear_grid, py::arg("n"), py::arg("lo") = 0.0, py::arg("hi") = units::R);
}
