#include "certhom/projective.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "certhom/errors.hpp"
#include "certhom/oracle.hpp"
#include "test_util.hpp"

namespace certhom {
namespace {

using testing::random_system;
using testing::random_unit;
using testing::vec;

const double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

PolySystem quadric_minus() {
  return PolySystem({HomoPoly(2, 2, {{{0, 2}, 1.0}, {{2, 0}, -1.0}})});
}

TEST(ProjectivePoint, NormalizesAndRejectsZero) {
  const ProjectivePoint z(vec({3, 4}));
  EXPECT_NEAR(z.coords().norm(), 1.0, 1e-15);
  EXPECT_THROW(ProjectivePoint(vec({0, 0})), std::invalid_argument);
  EXPECT_THROW(ProjectivePoint(vec({NAN, 1})), std::invalid_argument);
}

TEST(RiemannDistance, Examples) {
  const auto e0 = ProjectivePoint::basis(2, 0);
  const auto e1 = ProjectivePoint::basis(2, 1);
  EXPECT_DOUBLE_EQ(riemann_distance(e0, e0), 0.0);
  EXPECT_NEAR(riemann_distance(e0, e1), kPi / 2, 1e-15);
  EXPECT_NEAR(riemann_distance(e0, ProjectivePoint(vec({1, 1}))), kPi / 4,
              1e-15);
}

TEST(RiemannDistance, PhaseInvariantSymmetricTriangle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ProjectivePoint a(random_unit(3, seed));
    const ProjectivePoint b(random_unit(3, 1000 + seed));
    const ProjectivePoint c(random_unit(3, 2000 + seed));
    const ProjectivePoint a_phase(std::polar(1.0, 0.9 + seed) * a.coords());
    EXPECT_NEAR(riemann_distance(a, b), riemann_distance(b, a), 1e-15);
    EXPECT_NEAR(riemann_distance(a_phase, b), riemann_distance(a, b), 1e-14);
    EXPECT_LE(riemann_distance(a, c),
              riemann_distance(a, b) + riemann_distance(b, c) + 1e-12);
    EXPECT_GE(riemann_distance(a, b), 0.0);
    EXPECT_LE(riemann_distance(a, b), kPi / 2);
  }
}

TEST(RiemannDistance, AccurateForNearbyPoints) {
  const ProjectivePoint a(vec({1, 0}));
  const ProjectivePoint b(vec({1, 1e-12}));
  EXPECT_NEAR(riemann_distance(a, b), 1e-12, 1e-20);
}

TEST(AugmentedSolve, Examples) {
  const PolySystem good({HomoPoly(2, 2, {{{1, 1}, kSqrt2}})});
  const auto e0 = ProjectivePoint::basis(2, 0);
  const CVector y = augmented_solve(good, e0, vec({kSqrt2}));
  EXPECT_LE((y - vec({0, 1})).norm(), 1e-15);
  const PolySystem x0x1({HomoPoly(2, 2, {{{1, 1}, 1.0}})});
  EXPECT_LE(augmented_solve(x0x1, e0, vec({0})).norm(), 0.0);
}

TEST(AugmentedSolve, SatisfiesDefiningEquations) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PolySystem h = random_system({2, 3}, seed);
    const ProjectivePoint z(random_unit(3, 300 + seed));
    const CVector b = random_unit(2, 600 + seed);
    const CVector y = augmented_solve(h, z, b);
    EXPECT_LE((jacobian(h, z.coords()) * y - b).norm(), 1e-10 * b.norm());
    EXPECT_LE(std::abs(z.coords().dot(y)), 1e-12 * y.norm());
  }
}

TEST(AugmentedSolve, SingularThrows) {
  // X0 X1 at e0 + e1 direction: Jacobian (X1, X0) at (1,0) is (0,1); stack
  // with z* = (1,0) is regular. A double root makes it singular.
  const PolySystem square({HomoPoly(2, 2, {{{0, 2}, 1.0}})});
  EXPECT_THROW(augmented_solve(square, ProjectivePoint::basis(2, 0), vec({1})),
               SingularJacobianError);
}

TEST(ProjectiveNewton, FixedPointAndContraction) {
  const ProjectivePoint root(vec({1, 1}));
  EXPECT_LE(
      riemann_distance(projective_newton_step(quadric_minus(), root), root),
      1e-12);
  const ProjectivePoint z(vec({1, 0.9}));
  EXPECT_LT(riemann_distance(projective_newton_step(quadric_minus(), z), root),
            riemann_distance(z, root));
}

TEST(ProjectiveNewton, QuadraticConvergenceToOracleRoot) {
  const PolySystem h = random_system({5}, 3);
  const OracleRootSet oracle = univariate_roots(h[0]);
  const ProjectivePoint& root = oracle.roots[0];
  // Perturb to distance ~1e-2.
  const CVector u = random_unit(2, 9);
  const CVector w = u - root.coords().dot(u) * root.coords();
  ProjectivePoint z(root.coords() + 1e-2 * w.normalized());
  EXPECT_NEAR(riemann_distance(z, root), 1e-2, 2e-3);
  for (int k = 0; k < 3; ++k) z = projective_newton_step(h, z);
  EXPECT_LE(riemann_distance(z, root), 1e-8);
}

TEST(ProjectiveNewton, InvariantUnderPhaseAndScale) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PolySystem h = random_system({2, 2}, seed);
    const ProjectivePoint z(random_unit(3, 50 + seed));
    const ProjectivePoint zp(std::polar(1.0, 2.1) * z.coords());
    const ProjectivePoint a = projective_newton_step(h, z);
    EXPECT_LE(riemann_distance(a, projective_newton_step(h, zp)), 1e-10);
    EXPECT_LE(riemann_distance(a, projective_newton_step(h * Complex(4.0), z)),
              1e-10);
  }
}

TEST(NewtonRefine, TraceFromRootAndDecay) {
  const ProjectivePoint root(vec({1, 1}));
  const auto exact = newton_refine(quadric_minus(), root, 3);
  ASSERT_EQ(exact.iterates.size(), 4u);
  ASSERT_EQ(exact.distances.size(), 3u);
  for (double d : exact.distances) EXPECT_LE(d, 1e-12);

  const PolySystem h = random_system({3}, 5);
  const OracleRootSet oracle = univariate_roots(h[0]);
  const CVector u = random_unit(2, 6);
  ProjectivePoint start(oracle.roots[1].coords() + 1e-3 * u);
  const auto trace = newton_refine(h, start, 4);
  for (std::size_t k = 0; k + 1 < trace.distances.size(); ++k)
    if (trace.distances[k] <= 1e-3 && trace.distances[k + 1] > 1e-15)
      EXPECT_LE(trace.distances[k + 1],
                10.0 * trace.distances[k] * trace.distances[k]);
  EXPECT_THROW(newton_refine(h, start, 0), std::invalid_argument);
}

TEST(ConditionMu, HandComputedValues) {
  const PolySystem good({HomoPoly(2, 2, {{{1, 1}, kSqrt2}})});
  EXPECT_NEAR(condition_mu(good, ProjectivePoint::basis(2, 0)), 1.0, 1e-14);

  const InitialPair quartic = total_degree({4}, 1.0);
  for (const auto& z : quartic.starts)
    EXPECT_NEAR(condition_mu(quartic.g, z), 1.41421356237, 1e-10);

  const InitialPair quadrics = total_degree({2, 2}, 1.0);
  EXPECT_NEAR(condition_mu(quadrics.g, ProjectivePoint(vec({1, 1, 1}))),
              std::sqrt(6.0), 1e-12);
}

TEST(ConditionMu, ScaleInvariantAndSingularIsInfinite) {
  const PolySystem h = random_system({3, 2}, 8);
  const ProjectivePoint z(random_unit(3, 9));
  const double mu = condition_mu(h, z);
  EXPECT_NEAR(condition_mu(h * Complex(7.0), z), mu, 1e-12 * mu);
  const PolySystem square({HomoPoly(2, 2, {{{0, 2}, 1.0}})});
  EXPECT_TRUE(std::isinf(condition_mu(square, ProjectivePoint::basis(2, 0))));
}

TEST(ConditionMu, TotalDegreeClosedForm) {
  for (int d = 2; d <= 10; ++d) {
    const InitialPair pair = total_degree({d}, 1.0);
    const double closed = std::pow(2.0, (d - 1) / 2.0) / std::sqrt(d);
    EXPECT_NEAR(mu_system(pair.g, pair.starts) / closed, 1.0, 1e-10)
        << "d = " << d;
  }
}

TEST(MuSystem, Examples) {
  const InitialPair fekete = fekete_quartic();
  EXPECT_NEAR(mu_system(fekete.g, fekete.starts), 1.22475, 1e-4);
  const InitialPair ten = total_degree({10}, 1.0);
  EXPECT_NEAR(mu_system(ten.g, ten.starts), 7.15542, 1e-3);
  EXPECT_DOUBLE_EQ(mu_system(fekete.g, {fekete.starts[2]}),
                   condition_mu(fekete.g, fekete.starts[2]));
  EXPECT_THROW(mu_system(fekete.g, {}), std::invalid_argument);
}

}  // namespace
}  // namespace certhom
