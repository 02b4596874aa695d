#include "geomean/experiments.hpp"

#include "geomean/errors.hpp"
#include "geomean/kernels.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

namespace geomean {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryPad = 1e-9;

std::string join(const std::string &dir, const std::string &file) {
  return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error("cannot create output directory '" + dir + "': " + ec.message());
  }
}

std::string trace_csv(const Manifold &m, const Trace &tr) {
  validate_trace(tr);
  std::ostringstream os;
  write_trace_csv(os, m, tr);
  return os.str();
}

Vector sphere_point(double rho, double phi) {
  Vector x(3);
  x << std::cos(rho), std::sin(rho) * std::cos(phi), std::sin(rho) * std::sin(phi);
  return x;
}

WeightedDataset sphere_config(double rho, bool cross) {
  if (!(rho > 0.0) || !(rho + kBoundaryPad < kPi / 2)) {
    throw PreconditionError("configuration radius must lie in (0, pi/2)");
  }
  const Manifold s2 = Manifold::sphere(2);
  std::vector<Vector> pts{sphere_point(rho, 0.0), sphere_point(rho, kPi)};
  if (cross) {
    pts.push_back(sphere_point(rho, kPi / 2));
    pts.push_back(sphere_point(rho, -kPi / 2));
  } else {
    pts.push_back(pts[0]);
    pts.push_back(pts[1]);
  }
  return make_dataset(s2, pts, uniform_weights(4), s2.base_point(), rho + kBoundaryPad);
}

// Contraction factor of the cost gap fitted on the tail of a trace.
std::optional<double> fitted_q(const Manifold &m, const Trace &tr) {
  std::vector<double> d;
  for (const Iterate &it : tr.iterates) {
    d.push_back(m.distance(it.point, tr.final_point));
  }
  if (d.size() < 3 || d.front() == 0.0) {
    return std::nullopt;
  }
  int first = -1;
  int last = -1;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (first < 0 && d[k] < 1e-2 * d.front()) {
      first = static_cast<int>(k);
    }
    if (d[k] > 1e-9) {
      last = static_cast<int>(k);
    }
  }
  if (first < 0 || last <= first) {
    return std::nullopt;
  }
  return std::pow(d[last] / d[first], 2.0 / (last - first));
}

} // namespace

// ---------------------------------------------------------------- circle

WeightedDataset circle_dataset(double w1, double w2) {
  const Manifold c = Manifold::circle();
  return make_dataset(c, {c.circle_point(2 * kPi / 5), c.circle_point(-2 * kPi / 5)},
                      {w1, w2}, c.circle_point(0.0), kPi / 2);
}

json CircleReport::to_json() const {
  json arr = json::array();
  for (const CircleScenario &s : scenarios) {
    arr.push_back({{"name", s.name},
                   {"weights", {s.w1, s.w2}},
                   {"t", s.t},
                   {"status", status_name(s.trace.status)},
                   {"expected_status", status_name(s.expected_status)},
                   {"final_theta", s.final_theta},
                   {"expected_theta", s.expected_theta},
                   {"iterations", s.trace.iterates.size() - 1},
                   {"verdicts", verdicts_to_json(s.trace.verdicts)},
                   {"pass", s.pass}});
  }
  return {{"experiment", "circle_example"},
          {"scenarios", arr},
          {"pass", pass},
          {"note", "cost curves are evaluated from the geodesic distance on the circle, "
                   "so each branch wraps by +2 pi where the printed piecewise formula "
                   "uses -2 pi"}};
}

CircleReport run_circle_example(const std::optional<std::string> &out_dir) {
  struct Script {
    const char *name;
    double w1, w2, t, theta;
    Status status;
  };
  const Script scripts[] = {
      {"global_center", 0.1, 0.9, 1.0, -8 * kPi / 25, Status::Converged},
      {"antipode_abort", 0.1, 0.9, 25.0 / 18.0, -3 * kPi / 5, Status::CutLocusAbort},
      {"global_center_quarter", 0.25, 0.75, 1.0, -kPi / 5, Status::Converged},
      {"local_center", 0.25, 0.75, 11.0 / 6.0, -7 * kPi / 10, Status::Converged},
  };
  CircleReport rep;
  rep.pass = true;
  for (const Script &sc : scripts) {
    const WeightedDataset ds = circle_dataset(sc.w1, sc.w2);
    SolverConfig cfg;
    cfg.policy = UserConstant{sc.t};
    cfg.x0 = ds.points[0];
    cfg.max_iters = 1000;
    CircleScenario s;
    s.name = sc.name;
    s.w1 = sc.w1;
    s.w2 = sc.w2;
    s.t = sc.t;
    s.expected_theta = sc.theta;
    s.expected_status = sc.status;
    s.trace = descend(ds, cfg);
    s.final_theta = ds.space.circle_angle(s.trace.final_point);
    const double err = std::abs(std::remainder(s.final_theta - sc.theta, 2 * kPi));
    s.pass = s.trace.status == sc.status && err <= 1e-10;
    rep.pass = rep.pass && s.pass;
    rep.scenarios.push_back(std::move(s));
  }

  if (out_dir) {
    ensure_dir(*out_dir);
    for (std::size_t i = 0; i < rep.scenarios.size(); ++i) {
      const CircleScenario &s = rep.scenarios[i];
      write_text_file(join(*out_dir, "circle_" + s.name + ".csv"),
                      trace_csv(Manifold::circle(), s.trace));
    }
    std::vector<PlotSeries> curves;
    std::ostringstream csv;
    csv << "theta,f2_w01_09,f2_w025_075\n";
    const WeightedDataset a = circle_dataset(0.1, 0.9);
    const WeightedDataset b = circle_dataset(0.25, 0.75);
    PlotSeries sa{"w = (0.1, 0.9)", {}, {}};
    PlotSeries sb{"w = (1/4, 3/4)", {}, {}};
    constexpr int kSamples = 720;
    for (int i = 1; i <= kSamples; ++i) {
      const double theta = -kPi + 2 * kPi * i / kSamples;
      const Vector x = a.space.circle_point(theta);
      const double fa = cost(a, PExponent(2.0), x);
      const double fb = cost(b, PExponent(2.0), x);
      sa.xs.push_back(theta);
      sa.ys.push_back(fa);
      sb.xs.push_back(theta);
      sb.ys.push_back(fb);
      csv << format_double(theta) << ',' << format_double(fa) << ',' << format_double(fb)
          << '\n';
    }
    curves.push_back(std::move(sa));
    curves.push_back(std::move(sb));
    write_text_file(join(*out_dir, "circle_cost.csv"), csv.str());
    write_text_file(join(*out_dir, "circle_cost.svg"),
                    render_svg(curves, "f2 on the circle", "theta", "f2(theta)", false));
    write_text_file(join(*out_dir, "circle_example.json"), rep.to_json().dump(2) + "\n");
  }
  return rep;
}

// ---------------------------------------------------------------- sphere

WeightedDataset cross_configuration(double rho) { return sphere_config(rho, true); }
WeightedDataset pair_configuration(double rho) { return sphere_config(rho, false); }

json SphereConfigReport::to_json() const {
  json arr = json::array();
  for (const ConfigRun &r : runs) {
    arr.push_back({{"config", r.config},
                   {"rho", r.rho},
                   {"iterations_to_1e-6", r.iterations_to_tol},
                   {"hessian_at_o",
                    {{"predicted_radial", r.predicted_radial},
                     {"predicted_perpendicular", r.predicted_perpendicular},
                     {"fd_radial", r.fd_radial},
                     {"fd_perpendicular", r.fd_perpendicular}}},
                   {"descent_violations", r.descent_violations}});
  }
  return {{"experiment", "sphere_configs"}, {"runs", arr}};
}

SphereConfigReport run_sphere_configs(const std::vector<double> &rhos, double t,
                                      std::uint64_t seed,
                                      const std::optional<std::string> &out_dir) {
  SphereConfigReport rep;
  std::vector<PlotSeries> curves;
  if (out_dir) {
    ensure_dir(*out_dir);
  }
  for (double rho : rhos) {
    for (const bool cross : {true, false}) {
      const WeightedDataset ds = sphere_config(rho, cross);
      const Manifold &m = ds.space;
      ConfigRun run;
      run.config = cross ? "cross" : "pair";
      run.rho = rho;
      const double rcot = b_lower(Curvature(1.0), rho);
      run.predicted_radial = cross ? 0.5 * (rcot + 1.0) : 1.0;
      run.predicted_perpendicular = cross ? 0.5 * (rcot + 1.0) : rcot;
      const Vector o = ds.center;
      Vector e1 = Vector::Zero(3);
      e1(1) = 1.0;
      Vector e2 = Vector::Zero(3);
      e2(2) = 1.0;
      run.fd_radial = fd_hessian_quadratic_form(ds, PExponent(2.0), o, e1);
      run.fd_perpendicular = fd_hessian_quadratic_form(ds, PExponent(2.0), o, e2);

      Rng rng = trial_rng(seed, 0);
      SolverConfig cfg;
      cfg.policy = UserConstant{t};
      cfg.grad_tol = 1e-13;
      cfg.max_iters = 20000;
      cfg.x0 = m.random_point_in_ball(o, rho, rng);
      const Trace tr = descend(ds, cfg);
      run.descent_violations = tr.descent_violations;
      PlotSeries series{run.config + " rho=" + format_double(rho / kPi).substr(0, 6) + "pi",
                        {}, {}};
      for (const Iterate &it : tr.iterates) {
        const double d = m.distance(it.point, o);
        run.distances.push_back(d);
        if (run.iterations_to_tol < 0 && d < kConfigDistanceTol) {
          run.iterations_to_tol = it.k;
        }
        series.xs.push_back(it.k);
        series.ys.push_back(d);
      }
      if (out_dir) {
        std::ostringstream csv;
        csv << "k,dist_to_mean\n";
        for (std::size_t k = 0; k < run.distances.size(); ++k) {
          csv << k << ',' << format_double(run.distances[k]) << '\n';
        }
        char name[64];
        std::snprintf(name, sizeof name, "sphere_%s_rho%.4f.csv", run.config.c_str(),
                      rho / kPi);
        write_text_file(join(*out_dir, name), csv.str());
      }
      curves.push_back(std::move(series));
      rep.runs.push_back(std::move(run));
    }
  }
  if (out_dir) {
    write_text_file(join(*out_dir, "sphere_configs.svg"),
                    render_svg(curves, "distance to the mean, t = " + format_double(t),
                               "iteration k", "d(x^k, mean)", true));
    write_text_file(join(*out_dir, "sphere_configs.json"), rep.to_json().dump(2) + "\n");
  }
  return rep;
}

// ---------------------------------------------------------------- table

json StepsizeTable::to_json() const {
  json arr = json::array();
  for (const TableRow &r : rows) {
    arr.push_back({{"name", r.name},
                   {"inputs", r.inputs},
                   {"value", r.value},
                   {"reference_value", r.reference_value},
                   {"tolerance", r.tolerance},
                   {"abs_error", r.abs_error},
                   {"pass", r.pass}});
  }
  return {{"experiment", "stepsize_table"}, {"rows", arr}};
}

std::string StepsizeTable::to_csv() const {
  std::ostringstream os;
  os << "name,inputs,value,reference_value,tolerance,abs_error,pass\n";
  for (const TableRow &r : rows) {
    os << r.name << ",\"" << r.inputs << "\"," << format_double(r.value) << ','
       << format_double(r.reference_value) << ',' << format_double(r.tolerance) << ','
       << format_double(r.abs_error) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

double boundary_radius_sphere() {
  const CurvatureBounds k{0.0, 1.0, kPi};
  const double rho_prime = kPi / 2;
  const double rho = largest_true(
      [&](double r) { return resolve_exit_compromise(k, r, rho_prime) >= 1.0; }, 1e-6,
      rho_prime * (1.0 - 1e-9));
  return rho / k.r_cx();
}

double boundary_radius_hyperbolic() {
  const CurvatureBounds k{-1.0, 0.0};
  const double rho_prime = kPi / 2;
  const double rho = largest_true(
      [&](double r) {
        return exit_time(k, r, rho_prime) >=
               1.0 / c_upper(Curvature(k.delta), r + rho_prime);
      },
      1e-6, rho_prime * (1.0 - 1e-9));
  return rho / rho_prime;
}

StepsizeTable run_stepsize_table() {
  StepsizeTable table;
  auto add = [&](std::string name, std::string inputs, double value, double reference,
                 double tol) {
    TableRow r{std::move(name), std::move(inputs), value, reference, tol,
               std::abs(value - reference), false};
    r.pass = r.abs_error <= tol;
    table.rows.push_back(std::move(r));
  };
  const CurvatureBounds sphere{0.0, 1.0, kPi};
  const CurvatureBounds hyper{-1.0, 0.0};
  const double rp = kPi / 2;

  add("r1_over_rcx", "delta=0 Delta=1 rho'=pi/2; largest rho with t* >= 1",
      boundary_radius_sphere(), 0.0303, 1e-3);
  add("t_star_rcx_over_3", "delta=0 Delta=1 rho'=pi/2 rho=pi/6",
      resolve_exit_compromise(sphere, kPi / 6, rp), 0.3965, 1e-3);
  add("t_star_0.9_rcx", "delta=0 Delta=1 rho'=pi/2 rho=0.9 pi/2",
      resolve_exit_compromise(sphere, 0.9 * rp, rp), 0.0353, 1e-3);
  add("t_star_0.99_rcx", "delta=0 Delta=1 rho'=pi/2 rho=0.99 pi/2",
      resolve_exit_compromise(sphere, 0.99 * rp, rp), 0.0033, 5e-4);
  add("r2_over_rho_prime", "delta=-1 Delta=0 rho'=pi/2; largest rho with t_exit >= 1/c",
      boundary_radius_hyperbolic(), 0.1950, 1e-3);
  add("t_star_rho_prime_over_3", "delta=-1 Delta=0 rho'=pi/2 rho=pi/6",
      resolve_exit_compromise(hyper, rp / 3, rp), 0.3022, 1e-3);
  add("t_spread", "delta=-1 p=2 rho=pi/6 (data spread rule)",
      resolve_spread_compromise(hyper, kPi / 6, PExponent(2.0), false).t, 0.4632, 1e-3);
  return table;
}

// ---------------------------------------------------------------- mean

StepPolicy parse_policy(const std::string &name, std::optional<double> t,
                        std::optional<double> rho_prime) {
  if (name == "constant") {
    if (!t) {
      throw PreconditionError("policy 'constant' needs --t");
    }
    return UserConstant{*t};
  }
  if (name == "conjecture") {
    return ConjectureOptimal{};
  }
  if (name == "constant-curvature") {
    return ConstantCurvatureOptimal{};
  }
  if (name == "spread") {
    return SpreadCompromise{false};
  }
  if (name == "spread-at-o") {
    return SpreadCompromise{true};
  }
  if (name == "exit-time") {
    if (!rho_prime) {
      throw PreconditionError("policy 'exit-time' needs --rho-prime");
    }
    return ExitTimeCompromise{*rho_prime};
  }
  throw ParseError("unknown policy '" + name + "'");
}

namespace {

MeanResult run_mean(const MeanOptions &opts) {
  MeanResult res;
  DatasetFile file = [&]() -> DatasetFile {
    try {
      return load_dataset(opts.dataset_path);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(e.what());
    }
  }();

  Ball ball;
  if (file.ball) {
    ball = *file.ball;
  } else {
    ball = minimal_ball_estimate(file.space, file.points);
    ball.radius = ball.radius * (1.0 + 1e-9) + 1e-12;
  }
  const WeightedDataset ds =
      make_dataset(file.space, file.points, file.weights, ball.center, ball.radius);

  SolverConfig cfg;
  cfg.p = opts.p;
  cfg.policy = parse_policy(opts.policy, opts.t, opts.rho_prime);
  cfg.grad_tol = opts.grad_tol;
  cfg.max_iters = opts.max_iters;
  const Trace tr = descend(ds, cfg);
  validate_trace(tr);

  const PExponent p(opts.p);
  json summary;
  summary["space"] = space_to_json(ds.space);
  summary["ball"] = {{"center", vector_to_json(ds.center)}, {"radius", ds.radius}};
  summary["uniqueness_certified"] = ds.uniqueness_certified;
  summary["policy"] = policy_name(cfg.policy);
  summary["step"] = {{"t", tr.step.t},
                     {"t_max_exclusive", tr.step.t_max_exclusive},
                     {"stay_ball_radius", tr.step.stay_ball_radius},
                     {"preconditions", tr.step.preconditions}};
  summary["status"] = status_name(tr.status);
  summary["iterations"] = tr.iterates.back().k;
  summary["final_point"] = vector_to_json(tr.final_point);
  summary["final_cost"] = tr.iterates.back().cost;
  summary["final_grad_norm"] = tr.iterates.back().grad_norm;
  summary["verdicts"] = verdicts_to_json(tr.verdicts);
  summary["descent_checks"] = tr.descent_checks;
  summary["descent_violations"] = tr.descent_violations;
  if (tr.iterates.size() == 2 && tr.status == Status::Converged) {
    summary["note"] = "converged in one iteration";
  }
  try {
    const HessianBounds hb = ball_hessian_bounds(ds, p, tr.final_point, 0.0);
    const RateEstimate est = rate_estimate(hb.lower, hb.upper, tr.step.t, 0.0);
    summary["predicted_q"] = est.q;
  } catch (const Error &) {
    summary["predicted_q"] = nullptr;
  }
  const std::optional<double> q_fit = fitted_q(ds.space, tr);
  summary["fitted_q"] = q_fit ? json(*q_fit) : json(nullptr);
  if (tr.cut) {
    summary["cut_locus"] = {{"k", tr.cut->k},
                            {"point", vector_to_json(tr.cut->point)},
                            {"data_index", tr.cut->data_index},
                            {"message", tr.cut->message}};
  }

  if (opts.out_dir) {
    ensure_dir(*opts.out_dir);
    write_text_file(join(*opts.out_dir, "trace.csv"), trace_csv(ds.space, tr));
    write_text_file(join(*opts.out_dir, "summary.json"), summary.dump(2) + "\n");
  }
  res.summary = summary;
  switch (tr.status) {
  case Status::Converged:
    res.exit_code = kExitConverged;
    res.message = "converged";
    break;
  case Status::CutLocusAbort:
    res.exit_code = kExitCutLocus;
    res.message = tr.cut ? tr.cut->message : "cut locus";
    break;
  case Status::MaxIters:
    res.exit_code = kExitNoConvergence;
    res.message = "iteration limit reached";
    break;
  }
  return res;
}

} // namespace

MeanResult mean_command(const MeanOptions &opts) {
  try {
    return run_mean(opts);
  } catch (const ParseError &e) {
    return {kExitParse, std::string("parse error: ") + e.what(), {}};
  } catch (const InvalidPoint &e) {
    return {kExitParse, std::string("invalid point: ") + e.what(), {}};
  } catch (const PreconditionError &e) {
    return {kExitPrecondition, std::string("precondition violated: ") + e.what(), {}};
  } catch (const CutLocusError &e) {
    return {kExitCutLocus, std::string("cut locus: ") + e.what(), {}};
  }
}

} // namespace geomean
