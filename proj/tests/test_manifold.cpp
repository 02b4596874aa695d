#include "geomean/errors.hpp"
#include "geomean/manifold.hpp"

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace geomean;

namespace {

constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) {
    v(i++) = x;
  }
  return v;
}

std::vector<Manifold> all_spaces() {
  return {Manifold::euclidean(3),         Manifold::sphere(2),
          Manifold::sphere(3, 2.5),       Manifold::hyperbolic(2),
          Manifold::hyperbolic(3, -0.3),  Manifold::circle(),
          Manifold::so3(),                Manifold::real_projective(2),
          Manifold::real_projective(3, 4.0)};
}

Eigen::Matrix3d rotation(const Vector &q) {
  return Eigen::Quaterniond(q(0), q(1), q(2), q(3)).toRotationMatrix();
}

double rotation_angle(const Eigen::Matrix3d &R) {
  return Eigen::AngleAxisd(R).angle();
}

} // namespace

TEST(Distance, Examples) {
  const Manifold s2 = Manifold::sphere(2);
  EXPECT_NEAR(s2.distance(vec({1, 0, 0}), vec({0, 1, 0})), kPi / 2, 1e-15);
  const Manifold so3 = Manifold::so3();
  EXPECT_NEAR(so3.distance(vec({1, 0, 0, 0}), vec({0, 0, 0, 1})), kPi, 1e-15);
  const Manifold h2 = Manifold::hyperbolic(2);
  const Vector x = h2.project_point(vec({0, 0.3, -0.7}));
  EXPECT_DOUBLE_EQ(h2.distance(x, x), 0.0);
  EXPECT_NEAR(h2.distance(h2.base_point(), h2.project_point(vec({0, std::sinh(1.5), 0}))), 1.5,
              1e-14);
}

TEST(Distance, RejectsInvalidPoints) {
  const Manifold s2 = Manifold::sphere(2);
  EXPECT_THROW(s2.distance(vec({1, 0, 0}), vec({1, 1, 0})), InvalidPoint);
  EXPECT_THROW(s2.distance(vec({1, 0}), vec({1, 0, 0})), InvalidPoint);
  EXPECT_THROW(s2.distance(vec({NAN, 0, 0}), vec({1, 0, 0})), InvalidPoint);
  const Manifold h2 = Manifold::hyperbolic(2);
  EXPECT_THROW(h2.distance(vec({-1, 0, 0}), h2.base_point()), InvalidPoint);
}

TEST(ExpMap, Examples) {
  const Manifold s2 = Manifold::sphere(2);
  EXPECT_LT((s2.exp_map(vec({1, 0, 0}), vec({0, kPi / 2, 0})) - vec({0, 1, 0})).norm(), 1e-15);
  const Manifold e3 = Manifold::euclidean(3);
  EXPECT_EQ(e3.exp_map(vec({1, 2, 3}), vec({0.5, -1, 2})), vec({1.5, 1, 5}));
  const Manifold so3 = Manifold::so3();
  const Vector q = so3.exp_map(so3.base_point(), vec({0, 0, 0, kPi / 2}));
  EXPECT_LT((q - vec({std::cos(kPi / 4), 0, 0, std::sin(kPi / 4)})).norm(), 1e-15);
}

TEST(ExpMap, RejectsNonTangentVectors) {
  const Manifold s2 = Manifold::sphere(2);
  EXPECT_THROW(s2.exp_map(vec({1, 0, 0}), vec({0.1, 0, 0})), InvalidPoint);
}

TEST(LogMap, Examples) {
  const Manifold s2 = Manifold::sphere(2);
  EXPECT_LT((s2.log_map(vec({1, 0, 0}), vec({0, 1, 0})) - vec({0, kPi / 2, 0})).norm(), 1e-15);
  EXPECT_THROW(s2.log_map(vec({1, 0, 0}), vec({-1, 0, 0})), CutLocusError);
  // Inside the tolerance band below inj.
  const Vector near = s2.exp_map(vec({1, 0, 0}), vec({0, kPi - 1e-10, 0}));
  EXPECT_THROW(s2.log_map(vec({1, 0, 0}), near), CutLocusError);
  const Vector outside = s2.exp_map(vec({1, 0, 0}), vec({0, kPi - 1e-7, 0}));
  EXPECT_NO_THROW(s2.log_map(vec({1, 0, 0}), outside));
}

TEST(Geodesic, Examples) {
  const Manifold s1 = Manifold::sphere(1);
  const Vector x = vec({1, 0});
  const Vector v = vec({0, 1});
  EXPECT_EQ(s1.geodesic(x, v, 0.0), x);
  EXPECT_EQ(s1.geodesic(x, v, 1.0), s1.exp_map(x, v));
  const Vector y = s1.geodesic(x, v, 2 * kPi / 5);
  EXPECT_NEAR(std::atan2(y(1), y(0)), 2 * kPi / 5, 1e-15);
}

TEST(Constants, PerKind) {
  const SpaceConstants s2 = Manifold::sphere(2).constants();
  EXPECT_DOUBLE_EQ(s2.inj, kPi);
  EXPECT_DOUBLE_EQ(s2.r_cx, kPi / 2);
  const SpaceConstants s4 = Manifold::sphere(2, 4.0).constants();
  EXPECT_DOUBLE_EQ(s4.inj, kPi / 2);
  EXPECT_DOUBLE_EQ(s4.r_cx, kPi / 4);
  const SpaceConstants so3 = Manifold::so3().constants();
  EXPECT_DOUBLE_EQ(so3.delta, 0.25);
  EXPECT_DOUBLE_EQ(so3.Delta, 0.25);
  EXPECT_DOUBLE_EQ(so3.inj, kPi);
  EXPECT_DOUBLE_EQ(so3.r_cx, kPi / 2);
  const SpaceConstants rp = Manifold::real_projective(2).constants();
  EXPECT_DOUBLE_EQ(rp.inj, kPi / 2);
  EXPECT_DOUBLE_EQ(rp.r_cx, kPi / 4);
  const SpaceConstants c = Manifold::circle().constants();
  EXPECT_DOUBLE_EQ(c.inj, kPi);
  EXPECT_DOUBLE_EQ(c.Delta, 0.0);
  EXPECT_DOUBLE_EQ(c.delta, 0.0);
  EXPECT_DOUBLE_EQ(c.r_cx, kPi / 2);
  EXPECT_TRUE(std::isinf(Manifold::hyperbolic(2).constants().r_cx));
  EXPECT_TRUE(std::isinf(Manifold::euclidean(2).constants().inj));
}

TEST(Constants, So3CurvatureFromRotationMatrices) {
  // Right geodesic triangle at the identity with legs s: for constant
  // curvature K, cos(sqrt(K) d) = cos^2(sqrt(K) s). Distances come from
  // rotation matrices, independent of the quaternion model.
  const Manifold so3 = Manifold::so3();
  for (double s : {0.3, 0.6, 1.0}) {
    const Vector p = so3.exp_map(so3.base_point(), vec({0, s, 0, 0}));
    const Vector q = so3.exp_map(so3.base_point(), vec({0, 0, s, 0}));
    EXPECT_NEAR(rotation_angle(rotation(p)), s, 1e-14);
    const double d = rotation_angle(rotation(p).transpose() * rotation(q));
    double lo = 0.01;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double K = 0.5 * (lo + hi);
      const double lhs = std::cos(std::sqrt(K) * d);
      const double rhs = std::pow(std::cos(std::sqrt(K) * s), 2);
      (lhs > rhs ? lo : hi) = K;
    }
    EXPECT_NEAR(0.5 * (lo + hi), 0.25, 1e-10) << "s = " << s;
  }
}

TEST(Metric, AxiomsOnRandomTriples) {
  for (const Manifold &m : all_spaces()) {
    Rng rng = trial_rng(17, static_cast<std::uint64_t>(m.kind()));
    for (int i = 0; i < 10000; ++i) {
      const Vector x = m.random_point(rng);
      const Vector y = m.random_point(rng);
      const Vector z = m.random_point(rng);
      const double dxy = m.distance(x, y);
      ASSERT_NEAR(dxy, m.distance(y, x), 1e-12) << m.name();
      ASSERT_GE(dxy, 0.0);
      ASSERT_LE(m.distance(x, z), dxy + m.distance(y, z) + 1e-10) << m.name();
      ASSERT_LT(m.distance(x, x), 1e-7) << m.name();
    }
  }
}

TEST(Metric, ExpLogInversion) {
  for (const Manifold &m : all_spaces()) {
    Rng rng = trial_rng(23, static_cast<std::uint64_t>(m.kind()));
    const double inj = std::min(m.constants().inj, 3.0);
    for (int i = 0; i < 2000; ++i) {
      const Vector x = m.random_point(rng);
      const Vector y = m.random_point_in_ball(x, 0.9 * inj, rng);
      const Vector v = m.log_map(x, y);
      const Vector y2 = m.exp_map(x, v);
      ASSERT_LT((m.log_map(x, y2) - v).norm(), 1e-9) << m.name();
      ASSERT_LT(m.distance(y, y2), 1e-10) << m.name();
      ASSERT_NEAR(m.norm(x, v), m.distance(x, y), 1e-10) << m.name();
    }
  }
}

TEST(Metric, DistanceAlongExp) {
  for (const Manifold &m : all_spaces()) {
    Rng rng = trial_rng(29, static_cast<std::uint64_t>(m.kind()));
    const double inj = std::min(m.constants().inj, 3.0);
    for (int i = 0; i < 2000; ++i) {
      const Vector x = m.random_point(rng);
      const double len = uniform(rng, 0.0, 0.999 * inj);
      const Vector v = len * m.random_unit_tangent(x, rng);
      ASSERT_NEAR(m.distance(x, m.exp_map(x, v)), len, 1e-10) << m.name();
    }
  }
}

TEST(Metric, CircleIsIsometricToOneSphere) {
  const Manifold c = Manifold::circle();
  const Manifold s1 = Manifold::sphere(1);
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const double a = uniform(rng, -kPi, kPi);
    const double b = uniform(rng, -kPi, kPi);
    const double expected = std::abs(std::remainder(a - b, 2 * kPi));
    EXPECT_NEAR(c.distance(c.circle_point(a), c.circle_point(b)),
                s1.distance(c.circle_point(a), c.circle_point(b)), 1e-15);
    EXPECT_NEAR(c.distance(c.circle_point(a), c.circle_point(b)), expected, 1e-12);
  }
}

TEST(Quotients, DoubleCover) {
  const Manifold so3 = Manifold::so3();
  Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    const Vector q = so3.random_point(rng);
    EXPECT_EQ(so3.distance(q, -q), 0.0);
    EXPECT_EQ(so3.project_point(-q), so3.project_point(q));
    EXPECT_GT(so3.project_point(q)(0), 0.0);
  }
  const Manifold rp2 = Manifold::real_projective(2);
  EXPECT_EQ(rp2.distance(vec({0, 1, 0}), vec({0, -1, 0})), 0.0);
}

TEST(Sampling, BallMembershipAndRadialLaw) {
  // Uniform on a spherical cap of radius R: P(d <= r) = (1 - cos r)/(1 - cos R).
  const Manifold s2 = Manifold::sphere(2);
  Rng rng(41);
  const double R = 1.2;
  const double r = 0.7;
  int below = 0;
  constexpr int kN = 40000;
  for (int i = 0; i < kN; ++i) {
    const Vector x = s2.random_point_in_ball(s2.base_point(), R, rng);
    const double d = s2.distance(s2.base_point(), x);
    ASSERT_LT(d, R + 1e-12);
    below += d <= r ? 1 : 0;
  }
  const double expected = (1 - std::cos(r)) / (1 - std::cos(R));
  EXPECT_NEAR(static_cast<double>(below) / kN, expected, 0.01);

  // Hyperbolic disc: P(d <= r) = (cosh r - 1)/(cosh R - 1).
  const Manifold h2 = Manifold::hyperbolic(2);
  below = 0;
  for (int i = 0; i < kN; ++i) {
    const double d = h2.distance(h2.base_point(), h2.random_point_in_ball(h2.base_point(), R, rng));
    below += d <= r ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(below) / kN, (std::cosh(r) - 1) / (std::cosh(R) - 1), 0.01);
}

TEST(Sampling, TrialRngIsDeterministic) {
  const Manifold s2 = Manifold::sphere(2);
  Rng a = trial_rng(5, 9);
  Rng b = trial_rng(5, 9);
  Rng c = trial_rng(5, 10);
  const Vector pa = s2.random_point(a);
  EXPECT_EQ(pa, s2.random_point(b));
  EXPECT_NE(pa, s2.random_point(c));
}

TEST(Construction, RejectsBadParameters) {
  EXPECT_THROW(Manifold::sphere(2, -1.0), PreconditionError);
  EXPECT_THROW(Manifold::hyperbolic(2, 1.0), PreconditionError);
  EXPECT_THROW(Manifold::euclidean(0), PreconditionError);
  EXPECT_THROW(Manifold::circle(0.0), PreconditionError);
}
