#pragma once

// Start systems and initial pairs: total degree, the good pair, uniform
// random systems on the sphere, random pairs, the Fekete quartic, and the
// best-conditioned total-degree radius.

#include <vector>

#include "certhom/polynomial.hpp"
#include "certhom/projective.hpp"
#include "certhom/random.hpp"

namespace certhom {

// A start system on the unit sphere together with some of its zeros.
struct InitialPair {
  PolySystem g;
  std::vector<ProjectivePoint> starts;
};

// (X_i^{d_i} - r^{d_i} X_0^{d_i})_i normalized, with all prod(d_i) zeros
// (1, r w_1, ..., r w_n), w_i = exp(2 pi i k_i / d_i), k ascending and the
// last index varying fastest.
InitialPair total_degree(const DegreeVector& degrees, double r);

// (sqrt(d_i) X_0^{d_i - 1} X_i)_i normalized, with the single zero e_0.
InitialPair good_initial_pair(const DegreeVector& degrees);

// Coefficients drawn as complex Gaussians with E|a_alpha|^2 equal to the
// multinomial coefficient of alpha (standard Gaussian in BW-orthonormal
// coordinates). Not normalized.
PolySystem sample_gaussian_system(const DegreeVector& degrees, Rng& rng);

// Uniform on the unit sphere: sample_gaussian_system, then normalized.
PolySystem sample_sphere(const DegreeVector& degrees, Rng& rng);

// z uniform on the unit sphere of C^{n+1}; g the BW projection of a Gaussian
// system onto {h : h(z) = 0}, normalized. starts = {z}.
InitialPair random_initial_pair(const DegreeVector& degrees, Rng& rng);

// X_1 (X_1^3 - 2 sqrt(2) X_0^3), normalized, with its four roots.
InitialPair fekete_quartic();

// mu(g) for total_degree(degrees, r), evaluated over the closed-form roots.
double total_degree_mu(const DegreeVector& degrees, double r);

struct OptimalRadius {
  double r_star;
  double mu_star;
};

// Minimizes total_degree_mu over r in [0.05, 5].
OptimalRadius optimize_r(const DegreeVector& degrees);

}  // namespace certhom
