#include "certhom/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "certhom/errors.hpp"
#include "certhom/random.hpp"

namespace certhom {

namespace {

constexpr double kDistinctRoots = 1e-8;

// Parlett-Reinsch style balancing by powers of two, row/column 1-norms.
void balance(CMatrix& m) {
  const double gamma = 0.9;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double row = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      const double col = m.col(i).cwiseAbs().sum() - std::abs(m(i, i));
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col, exponent);
      const double scaled_row = std::ldexp(row, -exponent);
      if (scaled_col + scaled_row < gamma * (col + row)) {
        changed = true;
        m.row(i) *= std::ldexp(1.0, -exponent);
        m.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

// Newton polish that never accepts an iterate with a larger residual.
ProjectivePoint polish(const PolySystem& h, ProjectivePoint z, int iters) {
  double best = relative_residual(h, z);
  for (int k = 0; k < iters && best > 0.0; ++k) {
    try {
      ProjectivePoint next = projective_newton_step(h, z);
      const double r = relative_residual(h, next);
      if (!(r < best)) break;
      best = r;
      z = std::move(next);
    } catch (const SingularJacobianError&) {
      break;
    }
  }
  return z;
}

void require_distinct(const std::vector<ProjectivePoint>& roots) {
  for (std::size_t a = 0; a < roots.size(); ++a)
    for (std::size_t b = a + 1; b < roots.size(); ++b)
      if (riemann_distance(roots[a], roots[b]) < kDistinctRoots)
        throw OracleError("polynomial is not square-free: roots " +
                          std::to_string(a) + " and " + std::to_string(b) +
                          " coincide");
}

}  // namespace

double relative_residual(const PolySystem& h, const ProjectivePoint& z) {
  return evaluate(h, z.coords()).norm() / bw_norm(h);
}

OracleRootSet univariate_roots(const HomoPoly& p) {
  if (p.num_vars() != 2)
    throw std::invalid_argument("univariate oracle needs a binary form");
  if (p.is_zero()) throw std::invalid_argument("zero polynomial has no roots");
  const int l = p.degree();
  // a[k] = coefficient of X0^{l-k} X1^k, i.e. of x^k after X0 = 1.
  std::vector<Complex> a(l + 1);
  double scale = 0.0;
  for (int k = 0; k <= l; ++k) {
    a[k] = p.coeff({l - k, k});
    scale = std::max(scale, std::abs(a[k]));
  }
  int m = l;
  while (m > 0 && std::abs(a[m]) <= 1e-14 * scale) --m;
  const int at_infinity = l - m;
  if (at_infinity > 1) throw OracleError("root at infinity is not simple");

  std::vector<ProjectivePoint> roots;
  if (m > 0) {
    CMatrix companion = CMatrix::Zero(m, m);
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) companion(i, m - 1) = -a[i] / a[m];
    balance(companion);
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw OracleError("companion eigenvalue iteration failed");
    for (int i = 0; i < m; ++i) {
      CVector z(2);
      z << 1.0, solver.eigenvalues()[i];
      roots.emplace_back(std::move(z));
    }
  }
  if (at_infinity == 1) roots.push_back(ProjectivePoint::basis(2, 1));

  const PolySystem h({p});
  OracleRootSet out;
  out.method = OracleMethod::companion;
  for (auto& z : roots) {
    z = polish(h, std::move(z), 8);
    out.residuals.push_back(relative_residual(h, z));
  }
  require_distinct(roots);
  out.roots = std::move(roots);
  return out;
}

OracleRootSet multistart_roots(const PolySystem& h, int attempts,
                               std::uint64_t seed) {
  const std::uint64_t expected = bezout_number(h.degrees());
  if (h.size() > 3 || expected > 64)
    throw std::invalid_argument(
        "multistart oracle limited to n <= 3, Bezout <= 64");
  if (attempts < 1) throw std::invalid_argument("attempts must be positive");

  OracleRootSet out;
  out.method = OracleMethod::multistart;
  const int dim = h.num_vars();
  for (int attempt = 0; attempt < attempts && out.roots.size() < expected;
       ++attempt) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
    ProjectivePoint z(uniform_sphere_point(dim, rng));
    bool failed = false;
    for (int k = 0; k < 50; ++k) {
      try {
        ProjectivePoint next = projective_newton_step(h, z);
        const double moved = riemann_distance(z, next);
        z = std::move(next);
        if (moved < 1e-15) break;
      } catch (const SingularJacobianError&) {
        failed = true;
        break;
      }
    }
    if (failed) continue;
    const double residual = relative_residual(h, z);
    if (!(residual <= 1e-10)) continue;
    const bool duplicate = std::any_of(
        out.roots.begin(), out.roots.end(),
        [&](const auto& r) { return riemann_distance(r, z) < kDistinctRoots; });
    if (duplicate) continue;
    out.roots.push_back(z);
    out.residuals.push_back(residual);
  }
  if (out.roots.size() < expected)
    throw OracleError("multistart found " + std::to_string(out.roots.size()) +
                      " of " + std::to_string(expected) + " roots");
  return out;
}

}  // namespace certhom
