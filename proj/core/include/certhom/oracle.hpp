#pragma once

// Root finders independent of the homotopy machinery, used to validate it:
// companion-matrix eigenvalues for one equation, multistart projective
// Newton for small systems.

#include <cstdint>
#include <vector>

#include "certhom/polynomial.hpp"
#include "certhom/projective.hpp"

namespace certhom {

enum class OracleMethod { companion, multistart };

struct OracleRootSet {
  std::vector<ProjectivePoint> roots;
  // |h(z)| / ||h|| per root, unit z.
  std::vector<double> residuals;
  OracleMethod method = OracleMethod::companion;
};

// Relative residual ||h(z)|| / ||h|| at a unit point.
double relative_residual(const PolySystem& h, const ProjectivePoint& z);

// All projective roots of a binary form p(X0, X1). Throws OracleError when
// roots are not simple (pairwise d_R < 1e-8) and std::invalid_argument for a
// zero or non-binary p.
OracleRootSet univariate_roots(const HomoPoly& p);

// Projective Newton from `attempts` uniform random starts, keeping converged
// points and removing duplicates. Throws OracleError on an undercount.
OracleRootSet multistart_roots(const PolySystem& h, int attempts,
                               std::uint64_t seed);

}  // namespace certhom
