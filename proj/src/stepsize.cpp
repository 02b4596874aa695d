#include "geomean/stepsize.hpp"

#include "geomean/errors.hpp"
#include "geomean/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace geomean {

namespace {

constexpr int kExitGrid = 4096;
constexpr double kGoldenTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double power(double d, double e) { return e == 0.0 ? 1.0 : std::pow(d, e); }

// (reach)^{p-2} max{p-1, c_delta(reach)}.
double hessian_at_reach(const CurvatureBounds &k, double reach, PExponent p) {
  return power(reach, p.value() - 2.0) *
         std::max(p.value() - 1.0, c_upper(Curvature(k.delta), reach));
}

void require_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw PreconditionError("rho must be positive and finite, got " + num(rho));
  }
}

void require_exit_domain(const CurvatureBounds &k, double rho, double rho_prime) {
  require_rho(rho);
  if (!(rho < rho_prime)) {
    throw PreconditionError("exit-time rule needs rho < rho' (rho = " + num(rho) +
                            ", rho' = " + num(rho_prime) + ")");
  }
  if (rho_prime > k.r_cx()) {
    throw PreconditionError("exit-time rule needs rho' <= r_cx = " + num(k.r_cx()) +
                            ", got rho' = " + num(rho_prime));
  }
}

double exit_objective(const CurvatureBounds &k, double rho, double rho_prime, double r) {
  return std::max(t_out1(k, rho, rho_prime, r), t_out2(rho, rho_prime, r));
}

} // namespace

CurvatureBounds CurvatureBounds::of(const Manifold &space) {
  const SpaceConstants c = space.constants();
  return {c.delta, c.Delta, c.inj};
}

std::string policy_name(const StepPolicy &policy) {
  struct Visitor {
    std::string operator()(const UserConstant &) const { return "constant"; }
    std::string operator()(const ConjectureOptimal &) const { return "conjecture"; }
    std::string operator()(const ConstantCurvatureOptimal &) const {
      return "constant-curvature";
    }
    std::string operator()(const SpreadCompromise &) const { return "spread"; }
    std::string operator()(const ExitTimeCompromise &) const { return "exit-time"; }
  };
  return std::visit(Visitor{}, policy);
}

double resolve_conjecture(const CurvatureBounds &k, double rho, PExponent p) {
  require_rho(rho);
  if (rho > k.r_cx()) {
    throw PreconditionError("conjecture step needs rho <= r_cx = " + num(k.r_cx()) +
                            ", got rho = " + num(rho));
  }
  return 1.0 / hessian_at_reach(k, 2.0 * rho, p);
}

double resolve_constant_curvature(const CurvatureBounds &k, double rho, PExponent p) {
  require_rho(rho);
  if (k.delta != k.Delta || k.delta < 0.0) {
    throw PreconditionError("constant-curvature step needs delta = Delta >= 0");
  }
  if (rho > k.r_cx()) {
    throw PreconditionError("constant-curvature step needs rho <= r_cx = " +
                            num(k.r_cx()) + ", got rho = " + num(rho));
  }
  return 1.0 / ((p.value() - 1.0) * power(2.0 * rho, p.value() - 2.0));
}

SpreadStep resolve_spread_compromise(const CurvatureBounds &k, double rho, PExponent p,
                                     bool start_at_o) {
  require_rho(rho);
  const double factor = start_at_o ? 2.0 : 3.0;
  if (rho > k.r_cx() / factor) {
    throw PreconditionError(std::string("spread rule needs rho <= r_cx/") +
                            (start_at_o ? "2" : "3") + " = " + num(k.r_cx() / factor) +
                            ", got rho = " + num(rho));
  }
  const double H = hessian_at_reach(k, (factor + 1.0) * rho, p);
  return {1.0 / H, 2.0 / H, factor * rho};
}

double t_in(double rho, double rho_prime) { return (rho_prime - rho) / (2.0 * rho); }

double t_out1(const CurvatureBounds &k, double rho, double rho_prime, double r) {
  const Curvature upper(k.Delta);
  return (2.0 / c_upper(Curvature(k.delta), rho_prime)) * r * (r - rho) *
         sn(upper, r - rho) / sn(upper, r + rho);
}

double t_out2(double rho, double rho_prime, double r) {
  return (rho_prime - r) / (rho + r);
}

double exit_time(const CurvatureBounds &k, double rho, double rho_prime) {
  require_exit_domain(k, rho, rho_prime);
  const double width = rho_prime - rho;
  const double step = width / kExitGrid;
  int best = 0;
  double best_val = kInf;
  for (int i = 0; i < kExitGrid; ++i) {
    const double v = exit_objective(k, rho, rho_prime, rho + i * step);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section refinement on the bracketing grid cells.
  double a = rho + std::max(0, best - 1) * step;
  double b = std::min(rho_prime, rho + (best + 1) * step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = exit_objective(k, rho, rho_prime, c);
  double fd = exit_objective(k, rho, rho_prime, d);
  while (b - a > kGoldenTol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = exit_objective(k, rho, rho_prime, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = exit_objective(k, rho, rho_prime, d);
    }
  }
  const double inf_out = std::min({best_val, fc, fd});
  return std::min(t_in(rho, rho_prime), inf_out);
}

double resolve_exit_compromise(const CurvatureBounds &k, double rho, double rho_prime) {
  const double te = exit_time(k, rho, rho_prime);
  return std::min(te, 1.0 / c_upper(Curvature(k.delta), rho_prime + rho));
}

ResolvedStep resolve(const StepPolicy &policy, const CurvatureBounds &k, double rho,
                     PExponent p) {
  struct Visitor {
    const CurvatureBounds &k;
    double rho;
    PExponent p;

    ResolvedStep operator()(const UserConstant &u) const {
      if (!(u.t > 0.0) || !std::isfinite(u.t)) {
        throw PreconditionError("step-size must be positive and finite, got " +
                                num(u.t));
      }
      return {u.t, kInf, 0.0, 0.0, "none"};
    }
    ResolvedStep operator()(const ConjectureOptimal &) const {
      const double t = resolve_conjecture(k, rho, p);
      return {t, 2.0 * t, rho, 1.0 / t, "rho <= r_cx"};
    }
    ResolvedStep operator()(const ConstantCurvatureOptimal &) const {
      const double t = resolve_constant_curvature(k, rho, p);
      return {t, 2.0 * t, rho, 1.0 / t, "delta = Delta >= 0; rho <= r_cx"};
    }
    ResolvedStep operator()(const SpreadCompromise &s) const {
      const SpreadStep r = resolve_spread_compromise(k, rho, p, s.start_at_o);
      return {r.t, r.t_max_exclusive, r.stay_ball_radius, 1.0 / r.t,
              s.start_at_o ? "x0 = o; rho <= r_cx/2" : "rho <= r_cx/3"};
    }
    ResolvedStep operator()(const ExitTimeCompromise &e) const {
      if (p.value() != 2.0) {
        throw PreconditionError("exit-time rule is defined for p = 2 only");
      }
      const double te = exit_time(k, rho, e.rho_prime);
      const double t = resolve_exit_compromise(k, rho, e.rho_prime);
      // (0, 2t*) intersected with (0, t_exit].
      const double t_max = std::min(2.0 * t, std::nextafter(te, kInf));
      return {t, t_max, e.rho_prime,
              c_upper(Curvature(k.delta), e.rho_prime + rho), "rho < rho' <= r_cx; p = 2"};
    }
  };
  return std::visit(Visitor{k, rho, p}, policy);
}

ResolvedStep resolve(const StepPolicy &policy, const Manifold &space, double rho,
                     PExponent p) {
  return resolve(policy, CurvatureBounds::of(space), rho, p);
}

RateEstimate rate_estimate(double h_S, double H_S, double t, double f_gap) {
  if (!(h_S > 0.0)) {
    throw PreconditionError("rate estimate needs h_S > 0; shrink the region");
  }
  if (!(h_S <= H_S)) {
    throw PreconditionError("rate estimate needs h_S <= H_S");
  }
  if (!(t > 0.0) || !(t < 2.0 / H_S)) {
    throw PreconditionError("rate estimate needs 0 < t < 2/H_S = " + num(2.0 / H_S));
  }
  if (!(f_gap >= 0.0)) {
    throw PreconditionError("rate estimate needs a nonnegative cost gap");
  }
  RateEstimate r;
  r.h_S = h_S;
  r.H_S = H_S;
  r.alpha = t * H_S;
  const double ratio = h_S / H_S;
  r.q = std::max(0.0, 1.0 - r.alpha * (1.0 - r.alpha / 2.0) * ratio * (1.0 + ratio));
  r.K = std::sqrt(2.0 * f_gap / h_S);
  return r;
}

} // namespace geomean
