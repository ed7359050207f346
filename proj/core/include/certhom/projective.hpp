#pragma once

// Points of P(C^{n+1}), the Riemann distance, projective Newton iteration and
// the normalized condition number mu(h, z).

#include <Eigen/Dense>
#include <vector>

#include "certhom/polynomial.hpp"

namespace certhom {

// Unit-norm representative of a projective point.
class ProjectivePoint {
 public:
  // Normalizes; throws std::invalid_argument on zero or non-finite input.
  explicit ProjectivePoint(CVector coords);

  // e_k in C^dim.
  static ProjectivePoint basis(int dim, int k);

  const CVector& coords() const { return coords_; }
  Eigen::Index size() const { return coords_.size(); }
  Complex operator[](Eigen::Index i) const { return coords_[i]; }

 private:
  CVector coords_;
};

double riemann_distance(const ProjectivePoint& a, const ProjectivePoint& b);

// LU factorization of the (n+1) x (n+1) matrix [Dh(z); z^*]. Solving with
// right-hand side (b, 0) applies (Dh(z)|_{z-perp})^{-1} to b.
class StackedJacobian {
 public:
  // Matrices whose reciprocal condition estimate falls below this are
  // treated as singular.
  static constexpr double kMinRcond = 1e-14;

  StackedJacobian(const CMatrix& jac, const CVector& z);

  bool singular() const { return singular_; }
  double rcond() const { return rcond_; }
  // y with Dh(z) y = b and <y, z> = 0.
  CVector solve_restricted(const CVector& b) const;
  CMatrix inverse() const { return lu_.inverse(); }

 private:
  Eigen::PartialPivLU<CMatrix> lu_;
  double rcond_ = 0.0;
  bool singular_ = true;
};

// Largest singular value.
double operator_norm(const CMatrix& m);

CVector augmented_solve(const PolySystem& h, const ProjectivePoint& z,
                        const CVector& b);

ProjectivePoint projective_newton_step(const PolySystem& h,
                                       const ProjectivePoint& z);

struct NewtonCertificateTrace {
  std::vector<ProjectivePoint> iterates;  // z_0, ..., z_iters
  std::vector<double> distances;          // d_R(z_k, z_{k+1})
};

NewtonCertificateTrace newton_refine(const PolySystem& h,
                                     const ProjectivePoint& z, int iters);

// mu(h, z); +infinity when the restricted Jacobian is singular.
double condition_mu(const PolySystem& h, const ProjectivePoint& z);

// ||(Dh|_{z-perp})^{-1} Diag(sqrt(d_i))|| from an inverted stacked matrix.
// Multiply by ||h|| for mu.
double restricted_inverse_norm(const CMatrix& stacked_inverse,
                               const DegreeVector& degrees);

// max over the supplied roots of condition_mu. Throws on an empty list.
double mu_system(const PolySystem& h,
                 const std::vector<ProjectivePoint>& roots);

}  // namespace certhom
