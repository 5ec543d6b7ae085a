#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latticeguide/core.hpp"
#include "latticeguide/errors.hpp"
#include "latticeguide/modes.hpp"
#include "latticeguide/oracle.hpp"
#include "latticeguide/spectrum.hpp"

namespace py = pybind11;
using namespace latticeguide;

PYBIND11_MODULE(latticeguide, m) {
  m.doc() = "Spectral toolkit for the weighted periodic lattice graph operator: "
            "essential-spectrum bands and gaps, guided-mode eigenvalues, lattice "
            "mode profiles, and a truncated-lattice verification oracle.";

  py::register_exception<SpectralError>(m, "SpectralError");

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("sin_singular", &Tolerances::sin_singular)
      .def_readwrite("removable", &Tolerances::removable)
      .def_readwrite("point_match", &Tolerances::point_match)
      .def_readwrite("sigma_match", &Tolerances::sigma_match)
      .def_readwrite("edge_bisect", &Tolerances::edge_bisect)
      .def_readwrite("root_bisect", &Tolerances::root_bisect)
      .def_readwrite("quad_rel", &Tolerances::quad_rel);

  py::class_<LatticeParams>(m, "LatticeParams")
      .def(py::init([](double a1, double a2, double a3, double mu, double beta) {
             return normalize_params({a1, a2, a3, mu, beta});
           }),
           py::arg("a1") = 1.0, py::arg("a2") = 1.0, py::arg("a3") = 1.0,
           py::arg("mu") = 1.0, py::arg("beta") = 0.0)
      .def_readonly("a1", &LatticeParams::a1)
      .def_readonly("a2", &LatticeParams::a2)
      .def_readonly("a3", &LatticeParams::a3)
      .def_readonly("mu", &LatticeParams::mu)
      .def_readonly("beta", &LatticeParams::beta)
      .def("__repr__", [](const LatticeParams& p) {
        return "LatticeParams(a1=" + std::to_string(p.a1) + ", a2=" + std::to_string(p.a2) +
               ", a3=" + std::to_string(p.a3) + ", mu=" + std::to_string(p.mu) +
               ", beta=" + std::to_string(p.beta) + ")";
      });

  py::class_<FrequencyWindow>(m, "FrequencyWindow")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &FrequencyWindow::lo)
      .def_readwrite("hi", &FrequencyWindow::hi);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi)
      .def("width", &Interval::width);

  py::class_<PhiValue>(m, "PhiValue")
      .def_readonly("value", &PhiValue::value)
      .def_readonly("pole", &PhiValue::pole);

  py::enum_<GapType>(m, "GapType")
      .value("TypeI", GapType::TypeI)
      .value("TypeII", GapType::TypeII)
      .value("TypeIII", GapType::TypeIII);

  py::class_<SpectralGap>(m, "SpectralGap")
      .def_readonly("omega_b", &SpectralGap::omega_b)
      .def_readonly("omega_t", &SpectralGap::omega_t)
      .def_readonly("type", &SpectralGap::type)
      .def_readonly("w_inside", &SpectralGap::w_inside)
      .def_readonly("edge_b_sigma", &SpectralGap::edge_b_sigma)
      .def_readonly("edge_t_sigma", &SpectralGap::edge_t_sigma);

  py::class_<BandScan>(m, "BandScan")
      .def_readonly("bands", &BandScan::bands)
      .def_readonly("gaps", &BandScan::gaps)
      .def_readonly("embedded_points", &BandScan::embedded_points)
      .def_readonly("unresolved", &BandScan::unresolved)
      .def_readonly("resolution", &BandScan::resolution);

  py::class_<SigmaPoints>(m, "SigmaPoints")
      .def_readonly("s1", &SigmaPoints::s1)
      .def_readonly("s2", &SigmaPoints::s2)
      .def_readonly("s3", &SigmaPoints::s3);

  py::class_<GuidedMode>(m, "GuidedMode")
      .def_readonly("omega", &GuidedMode::omega)
      .def_readonly("lambda_", &GuidedMode::lambda)
      .def_readonly("F_value", &GuidedMode::F_value)
      .def_readonly("gap_index", &GuidedMode::gap_index)
      .def_readonly("mu", &GuidedMode::mu)
      .def_readonly("beta", &GuidedMode::beta)
      .def_readonly("residual", &GuidedMode::residual)
      .def_readonly("decay", &GuidedMode::decay)
      .def_readonly("near_coincident", &GuidedMode::near_coincident);

  py::class_<LatticeField>(m, "LatticeField")
      .def_readonly("K", &LatticeField::K)
      .def_readonly("values", &LatticeField::values)
      .def("at", [](const LatticeField& f, int k, int l) { return f.at(k, l); },
           py::arg("k"), py::arg("l"));

  py::class_<DispersionRoot>(m, "DispersionRoot")
      .def_readonly("omega", &DispersionRoot::omega)
      .def_readonly("degenerate", &DispersionRoot::degenerate);

  m.def("phi_beta", &phi_beta, py::arg("omega"), py::arg("params"),
        py::arg("tol") = Tolerances{},
        "Vertical-edge symbol (cos(omega a3) - cos(beta)) / sin(omega a3).");
  m.def("f_value", &f_value, py::arg("xi"), py::arg("eta"), py::arg("omega"),
        py::arg("params"), py::arg("tol") = Tolerances{});
  m.def("f_range", &f_range, py::arg("omega"), py::arg("params"),
        py::arg("tol") = Tolerances{});
  m.def("g_beta", &g_beta, py::arg("omega"), py::arg("params"), py::arg("tol") = Tolerances{});
  m.def("sigma_points", &sigma_points, py::arg("params"), py::arg("window"));
  m.def("w_points", &w_points, py::arg("params"), py::arg("window"),
        py::arg("tol") = Tolerances{});

  m.def("in_essential_spectrum", &in_essential_spectrum, py::arg("omega"), py::arg("params"),
        py::arg("tol") = Tolerances{});
  m.def("find_gaps", &find_gaps, py::arg("params"), py::arg("window"),
        py::arg("resolution") = 0.0, py::arg("tol") = Tolerances{},
        "Scan the window for bands, gaps and isolated spectrum points.");
  m.def("classify_gap", &classify_gap, py::arg("gap"), py::arg("params"),
        py::arg("tol") = Tolerances{});
  m.def("dispersion_roots", &dispersion_roots, py::arg("xi"), py::arg("eta"),
        py::arg("params"), py::arg("window"), py::arg("resolution") = 0.0,
        py::arg("tol") = Tolerances{});

  m.def("F_beta", &F_beta, py::arg("omega"), py::arg("params"), py::arg("tol") = Tolerances{},
        "Eigenvalue criterion: mu = 1 - F_beta(omega) at a guided mode.");
  m.def("F_beta_2d", &F_beta_2d, py::arg("omega"), py::arg("params"),
        py::arg("rel_tol") = 1e-10, py::arg("tol") = Tolerances{});
  m.def(
      "find_guided_modes",
      [](const LatticeParams& p, const SpectralGap& gap, int gap_index, const Tolerances& tol) {
        ModeSearchOptions opts;
        opts.gap_index = gap_index;
        return find_guided_modes(p, gap, opts, tol);
      },
      py::arg("params"), py::arg("gap"), py::arg("gap_index") = -1,
      py::arg("tol") = Tolerances{});
  m.def("mode_profile", &mode_profile, py::arg("mode"), py::arg("params"), py::arg("K"),
        py::arg("tol") = Tolerances{});
  m.def("decay_rate", &decay_rate, py::arg("field"));

  m.def("fd_residual", &fd_residual, py::arg("field"), py::arg("omega"), py::arg("params"),
        py::arg("tol") = Tolerances{},
        "Max residual of the vertex difference equations over interior nodes.");
  m.def(
      "smallest_singular_indicator",
      [](double omega, const LatticeParams& p, int K, const Tolerances& tol) {
        return smallest_singular_indicator(omega, p, K, {}, tol);
      },
      py::arg("omega"), py::arg("params"), py::arg("K"), py::arg("tol") = Tolerances{});
  m.def(
      "oracle_eigenfrequencies",
      [](const LatticeParams& p, const SpectralGap& gap, int K, int grid,
         const Tolerances& tol) { return oracle_eigenfrequencies(p, gap, K, grid, {}, tol); },
      py::arg("params"), py::arg("gap"), py::arg("K") = 40, py::arg("grid") = 200,
      py::arg("tol") = Tolerances{});
  m.def(
      "oracle_mode_field",
      [](double omega, const LatticeParams& p, int K, const Tolerances& tol) {
        return oracle_mode_field(omega, p, K, {}, tol);
      },
      py::arg("omega"), py::arg("params"), py::arg("K"), py::arg("tol") = Tolerances{});
}
