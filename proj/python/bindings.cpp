#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ggwpd/error.hpp"
#include "ggwpd/experiment.hpp"
#include "ggwpd/free_particle.hpp"
#include "ggwpd/quantum.hpp"

namespace py = pybind11;
using namespace ggwpd;

namespace {

ComplexPhasePoint point(Complex p, Complex q) { return {CVec::Constant(1, p), CVec::Constant(1, q)}; }

py::dict trajectory_dict(const ComplexTrajectory& tr) {
  std::vector<Complex> p, q;
  for (const ComplexPhasePoint& z : tr.points) {
    p.push_back(z.P(0));
    q.push_back(z.Q(0));
  }
  py::dict d;
  d["p"] = p;
  d["q"] = q;
  d["action"] = tr.action;
  d["stability"] = tr.stability();
  return d;
}

ExperimentConfig config_of(const std::string& preset_or_json) {
  if (!preset_or_json.empty() && preset_or_json.front() == '{') return config_from_json(preset_or_json);
  return preset(preset_or_json);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized Gaussian wave packet dynamics on the kicked rotor";

  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericalError& e) {
      py::set_error(numerical, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<GaussianPacket>(m, "GaussianPacket")
      .def_static("rotor", &GaussianPacket::rotor, py::arg("p"), py::arg("q"), py::arg("N"))
      .def_static("one_d", &GaussianPacket::one_d, py::arg("p"), py::arg("q"), py::arg("b"), py::arg("hbar"))
      .def_property_readonly("p", [](const GaussianPacket& g) { return g.center_p()(0); })
      .def_property_readonly("q", [](const GaussianPacket& g) { return g.center_q()(0); })
      .def_property_readonly("b", [](const GaussianPacket& g) { return g.b()(0, 0); })
      .def_property_readonly("hbar", &GaussianPacket::hbar)
      .def_property_readonly("sigma", &GaussianPacket::sigma)
      .def("shifted", py::overload_cast<int, int>(&GaussianPacket::shifted, py::const_), py::arg("n_p"), py::arg("n_q"))
      .def("__call__", [](const GaussianPacket& g, double x) { return packet_evaluate(g, RVec::Constant(1, x)); })
      .def("__repr__", [](const GaussianPacket& g) {
        return "GaussianPacket(p=" + std::to_string(g.center_p()(0)) + ", q=" + std::to_string(g.center_q()(0)) +
               ", b=" + std::to_string(g.b()(0, 0)) + ", hbar=" + std::to_string(g.hbar()) + ")";
      });

  m.def("gaussian_overlap", &gaussian_overlap, py::arg("alpha"), py::arg("beta"));

  m.def(
      "map_step", [](double p, double q, double K) {
        RealPoint x = map_step(RealPoint{p, q}, K);
        return std::make_pair(x.p, x.q);
      },
      py::arg("p"), py::arg("q"), py::arg("K"));
  m.def(
      "inverse_map_step", [](double p, double q, double K) {
        RealPoint x = inverse_map_step(RealPoint{p, q}, K);
        return std::make_pair(x.p, x.q);
      },
      py::arg("p"), py::arg("q"), py::arg("K"));
  m.def(
      "propagate", [](Complex p, Complex q, int t, double K) { return trajectory_dict(propagate(point(p, q), t, RotorParams{K})); },
      py::arg("p"), py::arg("q"), py::arg("t"), py::arg("K"));

  m.def("floquet_matrix", [](int N, double K) { return floquet_matrix(N, K).entries; }, py::arg("N"), py::arg("K"));
  m.def(
      "quantum_correlation",
      [](const GaussianPacket& a, const GaussianPacket& b, int t, int N, double K) {
        return quantum_correlation(a, b, t, N, K);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("N"), py::arg("K"));

  py::enum_<Regime>(m, "Regime").value("integrable", Regime::integrable).value("chaotic", Regime::chaotic);

  py::class_<SeedTrajectory>(m, "Seed")
      .def_property_readonly("p", [](const SeedTrajectory& s) { return s.ic.p; })
      .def_property_readonly("q", [](const SeedTrajectory& s) { return s.ic.q; })
      .def_readonly("t", &SeedTrajectory::t)
      .def_readonly("winding", &SeedTrajectory::winding);

  py::class_<SaddleTrajectory>(m, "Saddle")
      .def_property_readonly("P0", [](const SaddleTrajectory& s) { return s.trajectory.initial().P(0); })
      .def_property_readonly("Q0", [](const SaddleTrajectory& s) { return s.trajectory.initial().Q(0); })
      .def_property_readonly("trajectory", [](const SaddleTrajectory& s) { return trajectory_dict(s.trajectory); })
      .def_readonly("seed", &SaddleTrajectory::seed)
      .def_readonly("iterations", &SaddleTrajectory::iterations)
      .def_readonly("residual_norm", &SaddleTrajectory::residual_norm);

  m.def(
      "find_seeds",
      [](const GaussianPacket& a, const GaussianPacket& b, int t, double K, Regime regime, int image_range) {
        return find_seeds(a, b, t, RotorParams{K}, regime, image_range);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("K"), py::arg("regime"), py::arg("image_range") = 1);
  m.def(
      "find_saddle",
      [](const GaussianPacket& a, const GaussianPacket& b, const SeedTrajectory& s, double K, double tol, int max_iter) {
        SaddleSearchOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        return find_saddle(a, b, s, RotorParams{K}, o);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("seed"), py::arg("K"), py::arg("tol") = 1e-12, py::arg("max_iter") = 25);

  m.def(
      "ggwpd_correlation",
      [](const GaussianPacket& a, const GaussianPacket& b, const std::vector<SaddleTrajectory>& s) {
        return ggwpd_correlation(a, b, s).value;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("saddles"));
  m.def(
      "offcenter_correlation",
      [](const GaussianPacket& a, const GaussianPacket& b, const std::vector<SeedTrajectory>& s, double K, int t) {
        return offcenter_correlation(a, b, s, RotorParams{K}, t).value;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("seeds"), py::arg("K"), py::arg("t"));
  m.def(
      "linearized_correlation",
      [](const GaussianPacket& a, const GaussianPacket& b, double K, int t) {
        return linearized_correlation(a, b, RotorParams{K}, t);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("K"), py::arg("t"));

  m.def("free_particle_exact", &free_particle_exact, py::arg("alpha"), py::arg("x"), py::arg("t"), py::arg("mass") = 1.0);
  m.def(
      "free_particle_ggwpd",
      [](const GaussianPacket& a, double x, double t, double mass) {
        ComplexTrajectory tr = free_particle_trajectory(free_particle_saddle(a, x, t, mass), t, mass);
        return ggwpd_wavefunction_term(a, tr);
      },
      py::arg("alpha"), py::arg("x"), py::arg("t"), py::arg("mass") = 1.0);

  m.def("preset_names", &preset_names);
  m.def(
      "run_sweep",
      [](const std::string& config) {
        SweepResult r = run_sweep(config_of(config));
        std::vector<py::dict> rows;
        for (const SweepRow& row : r.rows) {
          py::dict d;
          d["N"] = row.N;
          d["qm"] = row.qm;
          d["oc"] = row.oc;
          d["ggwpd"] = row.ggwpd;
          d["abs_err_oc"] = row.abs_err_oc;
          d["abs_err_ggwpd"] = row.abs_err_ggwpd;
          d["ratio_oc"] = row.ratio_oc;
          d["ratio_ggwpd"] = row.ratio_ggwpd;
          d["phase_err_oc"] = row.phase_err_oc;
          d["phase_err_ggwpd"] = row.phase_err_ggwpd;
          d["error"] = row.error;
          rows.push_back(d);
        }
        return rows;
      },
      py::arg("preset_or_json"), "Runs a sweep for a preset name or a JSON configuration document.");
  m.def(
      "sweep_csv", [](const std::string& config) { return csv_text(run_sweep(config_of(config)).rows); },
      py::arg("preset_or_json"));
}
