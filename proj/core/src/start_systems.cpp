#include "certhom/start_systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "certhom/oracle.hpp"

namespace certhom {

InitialPair total_degree(const DegreeVector& degrees, double r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("total-degree radius must be positive");
  const int n = static_cast<int>(degrees.size());
  const int vars = n + 1;
  std::vector<HomoPoly> polys;
  for (int i = 0; i < n; ++i) {
    const int d = degrees[i];
    MultiIndex xi(vars, 0), x0(vars, 0);
    xi[i + 1] = d;
    x0[0] = d;
    polys.push_back(HomoPoly(
        d, vars, {{xi, Complex(1.0)}, {x0, Complex(-std::pow(r, d))}}));
  }
  InitialPair pair{normalize_to_sphere(PolySystem(std::move(polys))), {}};

  // Odometer over root-of-unity indices, last index fastest.
  std::vector<int> k(n, 0);
  const std::uint64_t count = bezout_number(degrees);
  pair.starts.reserve(count);
  for (std::uint64_t c = 0; c < count; ++c) {
    CVector z(vars);
    z[0] = 1.0;
    for (int i = 0; i < n; ++i)
      z[i + 1] =
          r * std::polar(1.0, 2.0 * std::numbers::pi * k[i] / degrees[i]);
    pair.starts.emplace_back(std::move(z));
    for (int i = n - 1; i >= 0; --i) {
      if (++k[i] < degrees[i]) break;
      k[i] = 0;
    }
  }
  return pair;
}

InitialPair good_initial_pair(const DegreeVector& degrees) {
  const int n = static_cast<int>(degrees.size());
  const int vars = n + 1;
  std::vector<HomoPoly> polys;
  for (int i = 0; i < n; ++i) {
    const int d = degrees[i];
    MultiIndex alpha(vars, 0);
    alpha[0] = d - 1;
    alpha[i + 1] += 1;
    polys.push_back(HomoPoly(d, vars, {{alpha, Complex(std::sqrt(d))}}));
  }
  return {normalize_to_sphere(PolySystem(std::move(polys))),
          {ProjectivePoint::basis(vars, 0)}};
}

PolySystem sample_gaussian_system(const DegreeVector& degrees, Rng& rng) {
  ComplexGaussian gauss;
  const int vars = static_cast<int>(degrees.size()) + 1;
  std::vector<HomoPoly> polys;
  for (int d : degrees) {
    HomoPoly p(d, vars);
    const MonomialBasis& basis = p.basis();
    std::vector<Complex> coeffs(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k)
      coeffs[k] = std::sqrt(basis.multinomial(k)) * gauss(rng);
    p.set_coeffs(std::move(coeffs));
    polys.push_back(std::move(p));
  }
  return PolySystem(std::move(polys));
}

PolySystem sample_sphere(const DegreeVector& degrees, Rng& rng) {
  for (;;) {
    PolySystem h = sample_gaussian_system(degrees, rng);
    if (bw_norm(h) > 0.0) return normalize_to_sphere(h);
  }
}

InitialPair random_initial_pair(const DegreeVector& degrees, Rng& rng) {
  const int vars = static_cast<int>(degrees.size()) + 1;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const CVector z = uniform_sphere_point(vars, rng);
    PolySystem h = sample_gaussian_system(degrees, rng);
    std::vector<HomoPoly> projected;
    for (const auto& p : h.polys())
      projected.push_back(p - kernel_poly(z, p.degree()) * p(z));
    PolySystem g(std::move(projected));
    if (bw_norm(g) < 1e-12) continue;
    return {normalize_to_sphere(g), {ProjectivePoint(z)}};
  }
  throw std::runtime_error("random_initial_pair: degenerate draws");
}

InitialPair fekete_quartic() {
  const HomoPoly p(
      4, 2,
      {{{0, 4}, Complex(1.0)}, {{3, 1}, Complex(-2.0 * std::numbers::sqrt2)}});
  PolySystem g = normalize_to_sphere(PolySystem({p}));
  OracleRootSet oracle = univariate_roots(g[0]);
  // Deterministic order: by |X1/X0|, then by argument.
  auto key = [](const ProjectivePoint& z) {
    const Complex x = z[1] / z[0];
    return std::pair(std::round(std::abs(x) * 1e9), std::arg(x));
  };
  std::sort(oracle.roots.begin(), oracle.roots.end(),
            [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return {std::move(g), std::move(oracle.roots)};
}

double total_degree_mu(const DegreeVector& degrees, double r) {
  const InitialPair pair = total_degree(degrees, r);
  return mu_system(pair.g, pair.starts);
}

OptimalRadius optimize_r(const DegreeVector& degrees) {
  auto phi = [&](double r) { return total_degree_mu(degrees, r); };
  const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.05, b = 5.0;
  double c = b - inv_golden * (b - a);
  double d = a + inv_golden * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > 1e-14 * (std::abs(a) + std::abs(b))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_golden * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_golden * (b - a);
      fd = phi(d);
    }
  }
  OptimalRadius best{fc <= fd ? c : d, std::min(fc, fd)};

  // Golden section stalls at ~sqrt(eps) on a smooth minimum. Refine with
  // parabolic steps through a stencil wide enough that differences are well
  // above rounding; a kink minimum rejects the step and keeps the bracket.
  for (double rel : {1e-4, 1e-5, 1e-5, 1e-6, 1e-6}) {
    const double h = rel * best.r_star;
    const double fl = phi(best.r_star - h);
    const double fr = phi(best.r_star + h);
    const double denom = fl - 2.0 * best.mu_star + fr;
    if (!(denom > 0.0)) break;
    const double step = 0.5 * h * (fl - fr) / denom;
    if (!(std::abs(step) < h)) break;
    const double r = best.r_star + step;
    const double fnew = phi(r);
    if (!(fnew <= best.mu_star * (1.0 + 1e-15))) break;
    best = {r, fnew};
  }
  return best;
}

}  // namespace certhom
