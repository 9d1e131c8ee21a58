#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sqjcm/cli.hpp"
#include "sqjcm/dynamics.hpp"
#include "sqjcm/entanglement.hpp"
#include "sqjcm/errors.hpp"
#include "sqjcm/io.hpp"
#include "sqjcm/photon_stats.hpp"
#include "sqjcm/special_fn.hpp"
#include "sqjcm/sweep.hpp"

namespace py = pybind11;
using namespace sqjcm;

namespace {

SqueezedField make_field(std::complex<double> theta, double r, double squeeze_phase) {
  SqueezedField f{theta, r, squeeze_phase};
  f.validate();
  return f;
}

TruncationPolicy make_policy(double tail_eps, int max_cutoff) {
  TruncationPolicy p{tail_eps, max_cutoff};
  p.validate();
  return p;
}

py::dict row_dict(const SweepRow& row) {
  py::dict d;
  d["lambda1"] = row.lambda1;
  d["r"] = row.r;
  d["t"] = row.t;
  d["mode"] = std::string(to_string(row.mode));
  d["dem"] = row.dem;
  d["s_atom"] = row.s_atom;
  d["s_field"] = row.s_field;
  d["s_joint"] = row.s_joint;
  d["kappa_plus"] = row.kappa_plus;
  d["kappa_minus"] = row.kappa_minus;
  d["tail_mass"] = row.tail_mass;
  d["cutoff"] = row.cutoff;
  d["error"] = row.error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sqjcm, m) {
  m.doc() = "Squeezed-field Jaynes-Cummings dynamics and atom-field mutual entropy";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);

  m.def("hermite", [](int n, std::complex<double> x) { return hermite(n, x).value(); }, py::arg("n"), py::arg("x"));
  m.def("log_factorial", &log_factorial, py::arg("n"));

  py::class_<PhotonDistribution>(m, "PhotonDistribution")
      .def_readonly("probs", &PhotonDistribution::probs)
      .def_readonly("cutoff", &PhotonDistribution::cutoff)
      .def_readonly("tail_mass", &PhotonDistribution::tail_mass)
      .def("at", &PhotonDistribution::at)
      .def("total", &PhotonDistribution::total)
      .def("__len__", [](const PhotonDistribution& d) { return d.probs.size(); });

  m.def(
      "photon_distribution",
      [](std::complex<double> theta, double r, double squeeze_phase, double tail_eps, int max_cutoff) {
        return photon_distribution(make_field(theta, r, squeeze_phase), make_policy(tail_eps, max_cutoff));
      },
      py::arg("theta") = std::sqrt(5.0), py::arg("r") = 0.0, py::arg("squeeze_phase") = 0.0,
      py::arg("tail_eps") = 1e-12, py::arg("max_cutoff") = TruncationPolicy{}.max_cutoff);

  m.def(
      "moments",
      [](const PhotonDistribution& d) {
        const auto mo = distribution_moments(d);
        return py::make_tuple(mo.mean, mo.variance);
      },
      py::arg("distribution"));

  m.def(
      "transition",
      [](const PhotonDistribution& d, const std::vector<double>& times, double g, double omega0) {
        const ModelParams params{g, omega0};
        params.validate();
        std::vector<double> c, s;
        for (const auto& p : transition_series(d, params, times)) {
          c.push_back(p.c);
          s.push_back(p.s);
        }
        return py::make_tuple(c, s);
      },
      py::arg("distribution"), py::arg("times"), py::arg("g") = 1.0, py::arg("omega0") = 1.0);

  m.def("revival_time", &revival_time, py::arg("theta"), py::arg("g") = 1.0);

  py::class_<DemResult>(m, "DemResult")
      .def_property_readonly("mode", [](const DemResult& r) { return std::string(to_string(r.mode)); })
      .def_readonly("t", &DemResult::t)
      .def_readonly("dem", &DemResult::dem)
      .def_readonly("s_atom", &DemResult::s_atom)
      .def_readonly("s_field", &DemResult::s_field)
      .def_readonly("s_joint", &DemResult::s_joint)
      .def_readonly("kappa_plus", &DemResult::kappa_plus)
      .def_readonly("kappa_minus", &DemResult::kappa_minus)
      .def("__repr__", [](const DemResult& r) {
        std::ostringstream os;
        os << "DemResult(mode=" << to_string(r.mode) << ", t=" << r.t << ", dem=" << r.dem << ")";
        return os.str();
      });

  m.def(
      "dem",
      [](double lambda1, double t, std::complex<double> theta, double r, double squeeze_phase, const std::string& mode,
         double g, double omega0, const std::string& base, double tail_eps, int max_cutoff) {
        const auto field = make_field(theta, r, squeeze_phase);
        const auto atom = AtomMixture::from_excited_weight(lambda1);
        const ModelParams params{g, omega0};
        params.validate();
        const auto log_base = parse_log_base(base);
        const auto policy = make_policy(tail_eps, max_cutoff);
        if (parse_dem_mode(mode) == DemMode::paper)
          return dem_paper(photon_distribution(field, policy), atom, params, t, log_base);
        return dem_exact(field, atom, params, t, log_base, policy);
      },
      py::arg("lambda1"), py::arg("t"), py::arg("theta") = std::sqrt(5.0), py::arg("r") = 0.0,
      py::arg("squeeze_phase") = 0.0, py::arg("mode") = "exact", py::arg("g") = 1.0, py::arg("omega0") = 1.0,
      py::arg("base") = "e", py::arg("tail_eps") = 1e-12, py::arg("max_cutoff") = TruncationPolicy{}.max_cutoff);

  m.def(
      "sweep",
      [](std::vector<double> lambda1_grid, std::vector<double> r_grid, std::optional<double> t, double theta,
         const std::string& mode, int workers) {
        SweepSpec spec;
        spec.lambda1_grid = std::move(lambda1_grid);
        spec.r_grid = std::move(r_grid);
        if (t) spec.time = FixedTime{*t};
        spec.theta = theta;
        spec.mode = parse_mode_selection(mode);
        spec.workers = workers;
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(spec);
        }
        py::list rows;
        for (const auto& row : result.rows) rows.append(row_dict(row));
        return rows;
      },
      py::arg("lambda1_grid"), py::arg("r_grid"), py::arg("t") = py::none(), py::arg("theta") = std::sqrt(5.0),
      py::arg("mode") = "paper", py::arg("workers") = 1,
      "Rows ordered by lambda1, then r, then time, then mode. The default time is the revival time.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
