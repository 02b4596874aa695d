#include "geomean/errors.hpp"
#include "geomean/experiments.hpp"
#include "geomean/frechet.hpp"
#include "geomean/geocheck.hpp"
#include "geomean/kernels.hpp"
#include "geomean/manifold.hpp"
#include "geomean/solver.hpp"
#include "geomean/stepsize.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace geomean;

namespace {

StepPolicy policy_from(const std::string &name, std::optional<double> t,
                       std::optional<double> rho_prime) {
  return parse_policy(name, t, rho_prime);
}

py::dict trace_to_dict(const Manifold &m, const Trace &tr) {
  std::vector<Vector> points;
  std::vector<double> costs;
  std::vector<double> grad_norms;
  for (const Iterate &it : tr.iterates) {
    points.push_back(it.point);
    costs.push_back(it.cost);
    grad_norms.push_back(it.grad_norm);
  }
  py::dict d;
  d["status"] = status_name(tr.status);
  d["final_point"] = tr.final_point;
  d["points"] = points;
  d["costs"] = costs;
  d["grad_norms"] = grad_norms;
  d["t"] = tr.step.t;
  d["monotone_cost"] = tr.verdicts.monotone_cost;
  d["stayed_in_ball"] = tr.verdicts.stayed_in_ball;
  d["continuously_stayed"] = tr.verdicts.continuously_stayed;
  d["converged"] = tr.verdicts.converged;
  d["descent_violations"] = tr.descent_violations;
  d["space"] = m.name();
  return d;
}

} // namespace

PYBIND11_MODULE(_geomean, mod) {
  mod.doc() = "Riemannian L^p centers of mass by constant step-size gradient descent";

  auto base = py::register_exception<Error>(mod, "Error");
  py::register_exception<DomainError>(mod, "DomainError", base.ptr());
  py::register_exception<InvalidPoint>(mod, "InvalidPoint", base.ptr());
  py::register_exception<CutLocusError>(mod, "CutLocusError", base.ptr());
  py::register_exception<PreconditionError>(mod, "PreconditionError", base.ptr());

  mod.def("sn", [](double kappa, double l) { return sn(Curvature(kappa), l); });
  mod.def("ct", [](double kappa, double l) { return ct(Curvature(kappa), l); });
  mod.def("b_lower", [](double kappa, double l) { return b_lower(Curvature(kappa), l); });
  mod.def("c_upper", [](double kappa, double l) { return c_upper(Curvature(kappa), l); });
  mod.def("secant_sphere", [](double b, double c, double a1, double a2, double kappa) {
    return secant_sphere({b, c, a1, a2}, Curvature(kappa));
  });
  mod.def("secant_euclid",
          [](double b, double c, double a1, double a2) { return secant_euclid({b, c, a1, a2}); });

  py::class_<Manifold>(mod, "Manifold")
      .def_static("euclidean", &Manifold::euclidean, py::arg("n"))
      .def_static("sphere", &Manifold::sphere, py::arg("n"), py::arg("kappa") = 1.0)
      .def_static("hyperbolic", &Manifold::hyperbolic, py::arg("n"), py::arg("kappa") = -1.0)
      .def_static("circle", &Manifold::circle, py::arg("kappa") = 1.0)
      .def_static("so3", &Manifold::so3)
      .def_static("real_projective", &Manifold::real_projective, py::arg("n"),
                  py::arg("kappa") = 1.0)
      .def_property_readonly("name", &Manifold::name)
      .def_property_readonly("dim", &Manifold::dim)
      .def_property_readonly("kappa", &Manifold::kappa)
      .def_property_readonly("inj", [](const Manifold &m) { return m.constants().inj; })
      .def_property_readonly("r_cx", [](const Manifold &m) { return m.constants().r_cx; })
      .def("base_point", &Manifold::base_point)
      .def("distance", &Manifold::distance)
      .def("exp", &Manifold::exp_map)
      .def("log", &Manifold::log_map)
      .def("circle_point", &Manifold::circle_point)
      .def("circle_angle", &Manifold::circle_angle)
      .def("__repr__", [](const Manifold &m) {
        return "Manifold(" + m.name() + ", dim=" + std::to_string(m.dim()) + ")";
      });

  py::class_<WeightedDataset>(mod, "Dataset")
      .def(py::init(&make_dataset), py::arg("space"), py::arg("points"), py::arg("weights"),
           py::arg("center"), py::arg("radius"))
      .def_readonly("points", &WeightedDataset::points)
      .def_readonly("weights", &WeightedDataset::weights)
      .def_readonly("center", &WeightedDataset::center)
      .def_readonly("radius", &WeightedDataset::radius)
      .def_readonly("uniqueness_certified", &WeightedDataset::uniqueness_certified);

  mod.def("cost", [](const WeightedDataset &ds, double p, const Vector &x) {
    return cost(ds, PExponent(p), x);
  }, py::arg("dataset"), py::arg("p"), py::arg("x"));
  mod.def("gradient", [](const WeightedDataset &ds, double p, const Vector &x) {
    return gradient(ds, PExponent(p), x);
  }, py::arg("dataset"), py::arg("p"), py::arg("x"));
  mod.def("uniform_hessian_bound", [](const Manifold &m, double rho, double p) {
    return uniform_hessian_bound(m, rho, PExponent(p));
  });

  mod.def("resolve_step",
          [](const std::string &policy, const Manifold &m, double rho, double p,
             std::optional<double> t, std::optional<double> rho_prime) {
            const ResolvedStep r = resolve(policy_from(policy, t, rho_prime), m, rho, PExponent(p));
            py::dict d;
            d["t"] = r.t;
            d["t_max_exclusive"] = r.t_max_exclusive;
            d["stay_ball_radius"] = r.stay_ball_radius;
            d["preconditions"] = r.preconditions;
            return d;
          },
          py::arg("policy"), py::arg("space"), py::arg("rho"), py::arg("p") = 2.0,
          py::arg("t") = py::none(), py::arg("rho_prime") = py::none());
  mod.def("exit_time", [](double delta, double Delta, double rho, double rho_prime) {
    return exit_time({delta, Delta}, rho, rho_prime);
  });

  mod.def("descend",
          [](const WeightedDataset &ds, double p, const std::string &policy,
             std::optional<double> t, std::optional<double> rho_prime, std::optional<Vector> x0,
             double grad_tol, int max_iters) {
            SolverConfig cfg;
            cfg.p = p;
            cfg.policy = policy_from(policy, t, rho_prime);
            cfg.x0 = x0;
            cfg.grad_tol = grad_tol;
            cfg.max_iters = max_iters;
            Trace tr;
            {
              py::gil_scoped_release release;
              tr = descend(ds, cfg);
            }
            return trace_to_dict(ds.space, tr);
          },
          py::arg("dataset"), py::arg("p") = 2.0, py::arg("policy") = "conjecture",
          py::arg("t") = py::none(), py::arg("rho_prime") = py::none(),
          py::arg("x0") = py::none(), py::arg("grad_tol") = 1e-10, py::arg("max_iters") = 10000);

  mod.def("minimal_ball", [](const Manifold &m, const std::vector<Vector> &points) {
    const Ball b = minimal_ball_estimate(m, points);
    return py::make_tuple(b.center, b.radius);
  });

  mod.def("comparison_check", [](const Manifold &m, int trials, std::uint64_t seed) {
    ComparisonReport r;
    {
      py::gil_scoped_release release;
      r = comparison_check(m, trials, seed);
    }
    py::dict d;
    d["trials"] = r.trials;
    d["violations"] = r.violations;
    d["min_margin"] = r.min_margin;
    d["exploratory"] = r.exploratory;
    return d;
  });

  mod.def("circle_example", []() {
    const CircleReport rep = run_circle_example();
    py::list out;
    for (const CircleScenario &s : rep.scenarios) {
      py::dict d;
      d["name"] = s.name;
      d["final_theta"] = s.final_theta;
      d["expected_theta"] = s.expected_theta;
      d["status"] = status_name(s.trace.status);
      d["pass"] = s.pass;
      out.append(d);
    }
    return out;
  });
}
