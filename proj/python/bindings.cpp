#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "turbilink/epr.hpp"
#include "turbilink/errors.hpp"
#include "turbilink/oam.hpp"
#include "turbilink/propagation.hpp"
#include "turbilink/statistics.hpp"
#include "turbilink/turbulence.hpp"

namespace py = pybind11;
using namespace turbilink;

namespace {

BiphotonCoords coords(std::pair<double, double> s1, std::pair<double, double> i1, std::pair<double, double> s2,
                      std::pair<double, double> i2) {
    auto v = [](std::pair<double, double> p) { return Vec2(p.first, p.second); };
    return {v(s1), v(i1), v(s2), v(i2)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Biphoton spatial entanglement through weak atmospheric turbulence";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<TruncationError>(m, "TruncationError", PyExc_ArithmeticError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

    py::class_<PhysicalSetup>(m, "PhysicalSetup")
        .def_property_readonly("pump_wavelength", &PhysicalSetup::pump_wavelength)
        .def_property_readonly("downconverted_wavelength", &PhysicalSetup::downconverted_wavelength)
        .def_property_readonly("wavenumber", &PhysicalSetup::wavenumber)
        .def_property_readonly("pump_waist", &PhysicalSetup::pump_waist)
        .def_property_readonly("crystal_length", &PhysicalSetup::crystal_length)
        .def_property_readonly("correlation_length", &PhysicalSetup::correlation_length)
        .def_property_readonly("focal_length", &PhysicalSetup::focal_length)
        .def_property_readonly("collimated_sum_waist", &PhysicalSetup::collimated_sum_waist)
        .def_property_readonly("collimated_diff_waist", &PhysicalSetup::collimated_diff_waist);
    m.def("derive_setup", &derive_setup, py::arg("pump_wavelength"), py::arg("pump_waist"),
          py::arg("crystal_length"), py::arg("focal_length"), "All lengths in metres.");

    py::class_<TurbulenceChannel>(m, "TurbulenceChannel")
        .def(py::init<double>(), py::arg("cn2"))
        .def_property_readonly("cn2", &TurbulenceChannel::structure_constant)
        .def_property_readonly("free_space", &TurbulenceChannel::free_space);
    m.def("coherence_length",
          [](const TurbulenceChannel& c, const PhysicalSetup& s, double z) { return coherence_length(c, s, z).value(); },
          py::arg("channel"), py::arg("setup"), py::arg("z"), "Infinite without turbulence or at z = 0.");

    py::class_<PropagatedMoments>(m, "PropagatedMoments")
        .def_readonly("z", &PropagatedMoments::z)
        .def_readonly("w", &PropagatedMoments::w)
        .def_readonly("sigma", &PropagatedMoments::sigma)
        .def_property_readonly("r_plus_sq", [](const PropagatedMoments& p) { return p.r_plus_sq.value(); })
        .def_property_readonly("r_minus_sq", [](const PropagatedMoments& p) { return p.r_minus_sq.value(); })
        .def_property_readonly("c_plus", [](const PropagatedMoments& p) { return p.c_plus.value(); })
        .def_property_readonly("c_minus", [](const PropagatedMoments& p) { return p.c_minus.value(); })
        .def_readonly("is_free_space", &PropagatedMoments::is_free_space);
    m.def("propagated_moments", &propagated_moments, py::arg("setup"), py::arg("channel"), py::arg("z"));
    m.def(
        "cross_spectral_density",
        [](const PropagatedMoments& p, std::pair<double, double> s1, std::pair<double, double> i1,
           std::pair<double, double> s2, std::pair<double, double> i2) {
            return cross_spectral_density(p, coords(s1, i1, s2, i2));
        },
        py::arg("moments"), py::arg("signal1"), py::arg("idler1"), py::arg("signal2"), py::arg("idler2"));

    m.def("purity", &purity, py::arg("moments"));
    m.def("spatial_correlation", &spatial_correlation, py::arg("moments"));

    py::class_<AngleDistribution>(m, "AngleDistribution")
        .def_readonly("theta", &AngleDistribution::theta)
        .def_readonly("density", &AngleDistribution::density)
        .def_readonly("window_center", &AngleDistribution::window_center)
        .def_readonly("boundary_density", &AngleDistribution::boundary_density)
        .def_readonly("circular_std", &AngleDistribution::circular_std);
    m.def("conditional_angle_stats", &conditional_angle_stats, py::arg("moments"), py::arg("grid_size") = 256,
          py::arg("rel_tol") = 1e-9);

    py::class_<OamSpectrum>(m, "OamSpectrum")
        .def_readonly("l_max", &OamSpectrum::l_max)
        .def_readonly("probabilities", &OamSpectrum::probabilities)
        .def_readonly("tail_mass", &OamSpectrum::tail_mass)
        .def_readonly("idler_zero", &OamSpectrum::idler_zero)
        .def("at", &OamSpectrum::at, py::arg("l"))
        .def("total", &OamSpectrum::total);
    m.def(
        "conditional_oam_distribution",
        [](const PropagatedMoments& p, const PhysicalSetup& s, int l_max, bool grow_l_max) {
            OamOptions o;
            o.grow_l_max = grow_l_max;
            return conditional_oam_distribution(p, s, l_max, s.collimated_diff_waist(), o);
        },
        py::arg("moments"), py::arg("setup"), py::arg("l_max") = 15, py::arg("grow_l_max") = true);
    m.def("conditional_oam_uncertainty", &conditional_oam_uncertainty, py::arg("spectrum"));
    m.def("laguerre_poly", &laguerre_poly, py::arg("p"), py::arg("alpha"), py::arg("x"));

    py::class_<EprReport>(m, "EprReport")
        .def_readonly("z", &EprReport::z)
        .def_readonly("delta_theta", &EprReport::delta_theta)
        .def_readonly("delta_oam", &EprReport::delta_oam)
        .def_readonly("lhs", &EprReport::lhs)
        .def_readonly("rhs", &EprReport::rhs)
        .def_readonly("boundary_density", &EprReport::boundary_density)
        .def_readonly("violation", &EprReport::violation)
        .def_readonly("entangled", &EprReport::entangled);
    m.def(
        "epr_report",
        [](const PhysicalSetup& s, const TurbulenceChannel& c, double z, double oam_offset) {
            EprOptions o;
            o.oam_offset = oam_offset;
            return epr_report(s, c, z, o);
        },
        py::arg("setup"), py::arg("channel"), py::arg("z"), py::arg("oam_offset") = 1.0);

    py::class_<ZInterval>(m, "ZInterval")
        .def_readonly("lo", &ZInterval::lo)
        .def_readonly("hi", &ZInterval::hi)
        .def_readonly("lo_clipped", &ZInterval::lo_clipped)
        .def_readonly("hi_clipped", &ZInterval::hi_clipped);
    py::class_<EntanglementScan>(m, "EntanglementScan")
        .def_readonly("z_grid", &EntanglementScan::z_grid)
        .def_readonly("reports", &EntanglementScan::reports)
        .def_readonly("intervals", &EntanglementScan::intervals)
        .def_readonly("z_max_violation", &EntanglementScan::z_max_violation)
        .def_readonly("max_violation", &EntanglementScan::max_violation)
        .def_readonly("maximal_window", &EntanglementScan::maximal_window);
    m.def(
        "scan_entanglement",
        [](const PhysicalSetup& s, const TurbulenceChannel& c, const std::vector<double>& z, double window_fraction,
           int threads) {
            EprOptions o;
            o.window_fraction = window_fraction;
            o.threads = threads;
            py::gil_scoped_release release;
            return scan_entanglement(s, c, z, o);
        },
        py::arg("setup"), py::arg("channel"), py::arg("z_grid"), py::arg("window_fraction") = 0.9,
        py::arg("threads") = 1);
}
