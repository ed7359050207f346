#include "certhom/homotopy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "certhom/start_systems.hpp"
#include "test_util.hpp"

namespace certhom {
namespace {

using testing::random_system;

struct Fixture {
  PolySystem f;
  InitialPair pair;
};

// Random (2,2) target and a random pair, as in the two-quadric listing.
Fixture quadric_fixture(std::uint64_t seed) {
  Rng rng(seed);
  PolySystem f = sample_sphere({2, 2}, rng);
  InitialPair pair = random_initial_pair({2, 2}, rng);
  return {std::move(f), std::move(pair)};
}

TEST(LinearHomotopy, OrthogonalPairHasQuarterLength) {
  const PolySystem g = normalize_to_sphere(
      PolySystem({HomoPoly(4, 2, {{{0, 4}, 1.0}, {{4, 0}, -1.0}})}));
  const PolySystem f = normalize_to_sphere(
      PolySystem({HomoPoly(4, 2, {{{0, 4}, 1.0}, {{4, 0}, 1.0}})}));
  const GeodesicHomotopy H = make_linear_homotopy(f, g);
  EXPECT_NEAR(H.length(), std::numbers::pi / 2, 1e-15);
}

TEST(LinearHomotopy, EndpointsUnitNormAndTangent) {
  const PolySystem f = random_system({2, 3}, 1);
  const PolySystem g = random_system({2, 3}, 2);
  const GeodesicHomotopy H = make_linear_homotopy(f, g);
  const double T = H.length();
  EXPECT_GT(T, 0.0);
  EXPECT_LT(T, std::numbers::pi);
  EXPECT_EQ(homotopy_at(H, 0.0), g);
  EXPECT_LE(bw_norm(homotopy_at(H, T) - f), 1e-12);
  EXPECT_NEAR(bw_norm(H.tangent()), 1.0, 1e-12);
  EXPECT_LE(std::abs(H.start_tangent_re()), 1e-12);
  for (double t : {0.0, T / 3, T / 2, T})
    EXPECT_NEAR(bw_norm(homotopy_at(H, t)), 1.0, 1e-12) << "t = " << t;
}

TEST(LinearHomotopy, Derivative) {
  const GeodesicHomotopy H =
      make_linear_homotopy(random_system({4}, 3), random_system({4}, 4));
  EXPECT_LE(bw_norm(homotopy_derivative_at(H, 0.0) - H.tangent()), 1e-15);
  for (double t : {0.1, 0.5, H.length()}) {
    const PolySystem hdot = homotopy_derivative_at(H, t);
    EXPECT_NEAR(bw_norm(hdot), 1.0, 1e-12);
    EXPECT_LE(std::abs(bw_inner(homotopy_at(H, t), hdot).real()), 1e-12);
  }
}

TEST(LinearHomotopy, RejectsBadInput) {
  const PolySystem f = random_system({2, 2}, 5);
  EXPECT_THROW(make_linear_homotopy(f, f), std::invalid_argument);
  EXPECT_THROW(make_linear_homotopy(f, f * Complex(-1.0)),
               std::invalid_argument);
  EXPECT_THROW(make_linear_homotopy(f * Complex(2.0), random_system({2, 2}, 6)),
               std::invalid_argument);
  EXPECT_THROW(make_linear_homotopy(f, random_system({2, 3}, 6)),
               std::invalid_argument);
  const GeodesicHomotopy H = make_linear_homotopy(f, random_system({2, 2}, 6));
  EXPECT_THROW(homotopy_at(H, -0.1), std::out_of_range);
  EXPECT_THROW(homotopy_derivative_at(H, H.length() + 0.1), std::out_of_range);
}

TEST(TrackCertified, QuadricPairStepCountOrderOfMagnitude) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Fixture fx = quadric_fixture(seed);
    const GeodesicHomotopy H = make_linear_homotopy(fx.f, fx.pair.g);
    const TrackResult r = track_certified(H, fx.pair.starts[0]);
    ASSERT_TRUE(r.converged()) << to_string(r.status);
    EXPECT_GE(r.num_steps, 300u) << "seed " << seed;
    EXPECT_LE(r.num_steps, 3000u) << "seed " << seed;
    EXPECT_LE(evaluate(fx.f, r.endpoint.coords()).norm(), 1e-3);
  }
}

TEST(TrackCertified, StepRuleAndSum) {
  const Fixture fx = quadric_fixture(11);
  const GeodesicHomotopy H = make_linear_homotopy(fx.f, fx.pair.g);
  const TrackResult r = track_certified(H, fx.pair.starts[0]);
  ASSERT_TRUE(r.converged());
  ASSERT_EQ(r.step_sizes.size(), r.num_steps);
  ASSERT_EQ(r.phi_trace.size(), r.num_steps);
  ASSERT_EQ(r.node_z.size(), r.num_steps + 1);
  const double d32 = std::pow(2.0, 1.5);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.num_steps; ++i) {
    const double upper = kStepConstant / (d32 * r.phi_trace[i]);
    EXPECT_LE(r.step_sizes[i], upper * (1 + 1e-15));
    if (i + 1 < r.num_steps) {
      EXPECT_GE(r.step_sizes[i], upper / 2);
      EXPECT_NEAR(r.step_sizes[i] * d32 * r.phi_trace[i], kStepConstant, 1e-12);
    }
    EXPECT_GE(r.phi_trace[i], 1.0);  // phi >= chi_2 >= |hdot| = 1
    sum += r.step_sizes[i];
  }
  EXPECT_NEAR(sum, H.length(), 1e-12);
}

TEST(TrackCertified, HalfStepsDoubleCount) {
  const Fixture fx = quadric_fixture(12);
  const GeodesicHomotopy H = make_linear_homotopy(fx.f, fx.pair.g);
  CertifiedSettings half;
  half.step_fraction = 0.5;
  const TrackResult full = track_certified(H, fx.pair.starts[0]);
  const TrackResult halved = track_certified(H, fx.pair.starts[0], half);
  ASSERT_TRUE(halved.converged());
  const double ratio = static_cast<double>(halved.num_steps) / full.num_steps;
  EXPECT_GT(ratio, 1.8);
  EXPECT_LT(ratio, 2.2);
  CertifiedSettings bad;
  bad.step_fraction = 0.4;
  EXPECT_THROW(track_certified(H, fx.pair.starts[0], bad),
               std::invalid_argument);
}

TEST(TrackCertified, TraceOffKeepsCounts) {
  const Fixture fx = quadric_fixture(13);
  const GeodesicHomotopy H = make_linear_homotopy(fx.f, fx.pair.g);
  CertifiedSettings quiet;
  quiet.retain_trace = false;
  const TrackResult a = track_certified(H, fx.pair.starts[0]);
  const TrackResult b = track_certified(H, fx.pair.starts[0], quiet);
  EXPECT_EQ(a.num_steps, b.num_steps);
  EXPECT_TRUE(b.step_sizes.empty());
  EXPECT_EQ(a.endpoint.coords(), b.endpoint.coords());
}

TEST(TrackHeuristic, FewerStepsSameEndpoint) {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const Fixture fx = quadric_fixture(seed);
    const GeodesicHomotopy H = make_linear_homotopy(fx.f, fx.pair.g);
    const TrackResult c = track_certified(H, fx.pair.starts[0]);
    const TrackResult h = track_heuristic(H, fx.pair.starts[0]);
    ASSERT_TRUE(c.converged());
    ASSERT_TRUE(h.converged()) << to_string(h.status);
    EXPECT_LT(h.num_steps, c.num_steps);
    const ProjectivePoint a =
        newton_refine(fx.f, c.endpoint, 3).iterates.back();
    const ProjectivePoint b =
        newton_refine(fx.f, h.endpoint, 3).iterates.back();
    EXPECT_LE(riemann_distance(a, b), 1e-6) << "seed " << seed;
  }
}

TEST(TrackHeuristic, TighterToleranceNeverFewerSteps) {
  for (std::uint64_t seed = 30; seed < 35; ++seed) {
    const Fixture fx = quadric_fixture(seed);
    const GeodesicHomotopy H = make_linear_homotopy(fx.f, fx.pair.g);
    HeuristicSettings loose, tight;
    loose.corrector_tolerance = 1e-7;
    tight.corrector_tolerance = 1e-8;
    EXPECT_GE(track_heuristic(H, fx.pair.starts[0], tight).num_steps,
              track_heuristic(H, fx.pair.starts[0], loose).num_steps)
        << "seed " << seed;
  }
}

TEST(TrackHeuristic, SettingsValidation) {
  HeuristicSettings s;
  EXPECT_NO_THROW(s.validate(1.0));
  s.min_step = 0.5;  // above T/100
  EXPECT_THROW(s.validate(1.0), std::invalid_argument);
  s = {};
  s.step_expand = 1.0;
  EXPECT_THROW(s.validate(1.0), std::invalid_argument);
  s = {};
  s.step_shrink = 1.0;
  EXPECT_THROW(s.validate(1.0), std::invalid_argument);
}

// mu * speed at a retained node, computed independently of the tracker.
double integrand(const GeodesicHomotopy& H, double s,
                 const ProjectivePoint& z) {
  const PolySystem h = homotopy_at(H, s);
  const CVector hdot = evaluate(homotopy_derivative_at(H, s), z.coords());
  const CVector zdot = augmented_solve(h, z, hdot);
  return condition_mu(h, z) * std::sqrt(1.0 + zdot.squaredNorm());
}

TEST(PathLengthC0, BoundsAndQuadratureConvergence) {
  const Fixture fx = quadric_fixture(40);
  const GeodesicHomotopy H = make_linear_homotopy(fx.f, fx.pair.g);
  TrackResult r = track_certified(H, fx.pair.starts[0]);
  const double c0 = path_length_c0(r, H);
  EXPECT_EQ(r.c0_estimate, c0);
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r.node_s.size(); ++k)
    lo = std::min(lo, integrand(H, r.node_s[k], r.node_z[k]));
  EXPECT_GE(c0, H.length() * lo * (1 - 1e-12));
  EXPECT_LE(static_cast<double>(r.num_steps),
            1.10 * std::ceil(71.0 * std::pow(2.0, 1.5) * c0));

  CertifiedSettings half;
  half.step_fraction = 0.5;
  TrackResult fine = track_certified(H, fx.pair.starts[0], half);
  EXPECT_LT(std::abs(path_length_c0(fine, H) / c0 - 1.0), 0.02);

  CertifiedSettings quiet;
  quiet.retain_trace = false;
  TrackResult bare = track_certified(H, fx.pair.starts[0], quiet);
  EXPECT_THROW(path_length_c0(bare, H), std::invalid_argument);
}

}  // namespace
}  // namespace certhom
