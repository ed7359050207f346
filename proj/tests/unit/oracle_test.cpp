#include "certhom/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "certhom/errors.hpp"
#include "certhom/search.hpp"
#include "test_util.hpp"

namespace certhom {
namespace {

using testing::random_system;
using testing::vec;

// Greedy matching; true when every point of a has a partner in b within tol.
bool same_roots(const std::vector<ProjectivePoint>& a,
                const std::vector<ProjectivePoint>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& z : a) {
    bool found = false;
    for (std::size_t k = 0; k < b.size() && !found; ++k)
      if (!used[k] && riemann_distance(z, b[k]) <= tol) used[k] = found = true;
    if (!found) return false;
  }
  return true;
}

TEST(UnivariateRoots, RootsOfUnity) {
  const HomoPoly p(4, 2, {{{0, 4}, 1.0}, {{4, 0}, -1.0}});
  const OracleRootSet r = univariate_roots(p);
  EXPECT_EQ(r.method, OracleMethod::companion);
  std::vector<ProjectivePoint> expected;
  Complex w = 1.0;
  for (int k = 0; k < 4; ++k, w *= Complex(0, 1))
    expected.emplace_back(vec({1, w}));
  EXPECT_TRUE(same_roots(r.roots, expected, 1e-12));
  for (const auto& z : r.roots) EXPECT_NEAR(z.coords().norm(), 1.0, 1e-15);
}

TEST(UnivariateRoots, Quadric) {
  const OracleRootSet r =
      univariate_roots(HomoPoly(2, 2, {{{0, 2}, 1.0}, {{2, 0}, -1.0}}));
  EXPECT_TRUE(same_roots(
      r.roots, {ProjectivePoint(vec({1, 1})), ProjectivePoint(vec({1, -1}))},
      1e-14));
}

TEST(UnivariateRoots, FeketeQuartic) {
  const HomoPoly p(4, 2, {{{0, 4}, 1.0}, {{3, 1}, -2.0 * std::numbers::sqrt2}});
  const OracleRootSet r = univariate_roots(p);
  std::vector<ProjectivePoint> expected = {ProjectivePoint(vec({1, 0}))};
  for (int k = 0; k < 3; ++k)
    expected.emplace_back(
        vec({1, std::numbers::sqrt2 *
                    std::polar(1.0, 2 * std::numbers::pi * k / 3)}));
  EXPECT_TRUE(same_roots(r.roots, expected, 1e-12));
  for (double res : r.residuals) EXPECT_LE(res, 1e-10);
}

TEST(UnivariateRoots, RootAtInfinity) {
  const OracleRootSet r =
      univariate_roots(HomoPoly(2, 2, {{{1, 1}, 1.0}, {{2, 0}, 0.5}}));
  EXPECT_TRUE(same_roots(
      r.roots, {ProjectivePoint(vec({0, 1})), ProjectivePoint(vec({1, -0.5}))},
      1e-14));
}

TEST(UnivariateRoots, RejectsRepeatedRootsAndBadInput) {
  EXPECT_THROW(univariate_roots(HomoPoly(2, 2, {{{0, 2}, 1.0}})), OracleError);
  EXPECT_THROW(univariate_roots(HomoPoly(3, 2, {{{2, 1}, 1.0}})), OracleError);
  EXPECT_THROW(univariate_roots(HomoPoly(2, 2)), std::invalid_argument);
  EXPECT_THROW(univariate_roots(HomoPoly(2, 3, {{{2, 0, 0}, 1.0}})),
               std::invalid_argument);
}

TEST(UnivariateRoots, ResidualsOnRandomDegreeTen) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PolySystem h = random_system({10}, seed);
    const OracleRootSet r = univariate_roots(h[0]);
    ASSERT_EQ(r.roots.size(), 10u);
    for (double res : r.residuals) EXPECT_LE(res, 1e-10) << "seed " << seed;
  }
}

TEST(MultistartRoots, TotalDegreeQuadrics) {
  const InitialPair pair = total_degree({2, 2}, 1.0);
  const OracleRootSet r = multistart_roots(pair.g, 200, 1);
  EXPECT_EQ(r.method, OracleMethod::multistart);
  EXPECT_TRUE(same_roots(r.roots, pair.starts, 1e-10));
}

TEST(MultistartRoots, AgreesWithHomotopySolve) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PolySystem h = random_system({2, 2}, 40 + seed);
    const OracleRootSet r = multistart_roots(h, 500, seed);
    ASSERT_EQ(r.roots.size(), 4u);
    for (double res : r.residuals) EXPECT_LE(res, 1e-10);
    const SolveOutcome solved =
        solve_from(h, total_degree({2, 2}, 1.0), TrackerKind::certified, seed);
    EXPECT_TRUE(same_roots(r.roots, solved.roots, 1e-8)) << "seed " << seed;
  }
}

TEST(MultistartRoots, RecoversPlantedRoot) {
  // Gaussian system projected to vanish at e0.
  const PolySystem raw = random_system({2, 2}, 77);
  std::vector<HomoPoly> polys;
  const CVector e0 = vec({1, 0, 0});
  for (const auto& p : raw.polys())
    polys.push_back(p - kernel_poly(e0, p.degree()) * p(e0));
  const PolySystem h(std::move(polys));
  const OracleRootSet r = multistart_roots(h, 400, 3);
  bool found = false;
  for (const auto& z : r.roots)
    found = found || riemann_distance(z, ProjectivePoint(e0)) <= 1e-12;
  EXPECT_TRUE(found);
}

TEST(MultistartRoots, ScopeGuardAndUndercount) {
  EXPECT_THROW(multistart_roots(total_degree({2, 2, 2, 2}, 1.0).g, 10, 0),
               std::invalid_argument);
  EXPECT_THROW(multistart_roots(random_system({3, 3}, 2), 1, 0), OracleError);
}

}  // namespace
}  // namespace certhom
