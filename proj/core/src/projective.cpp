#include "certhom/projective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "certhom/errors.hpp"

namespace certhom {

ProjectivePoint::ProjectivePoint(CVector coords) : coords_(std::move(coords)) {
  if (coords_.size() == 0) throw std::invalid_argument("empty point");
  const double norm = coords_.norm();
  if (!std::isfinite(norm) || norm == 0.0)
    throw std::invalid_argument(
        "projective point needs a finite nonzero vector");
  coords_ /= norm;
}

ProjectivePoint ProjectivePoint::basis(int dim, int k) {
  CVector e = CVector::Zero(dim);
  e[k] = 1.0;
  return ProjectivePoint(std::move(e));
}

double riemann_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("points live in different spaces");
  // arccos |<a,b>| loses half the digits near 0; the atan2 of the orthogonal
  // and parallel parts is the same angle without the cancellation.
  const Complex inner = a.coords().dot(b.coords());
  const double parallel = std::clamp(std::abs(inner), 0.0, 1.0);
  const double orthogonal = (b.coords() - inner * a.coords()).norm();
  return std::atan2(orthogonal, parallel);
}

StackedJacobian::StackedJacobian(const CMatrix& jac, const CVector& z) {
  const Eigen::Index n = jac.rows();
  if (jac.cols() != n + 1 || z.size() != n + 1)
    throw std::invalid_argument("stacked Jacobian shape mismatch");
  CMatrix stacked(n + 1, n + 1);
  stacked.topRows(n) = jac;
  stacked.row(n) = z.adjoint();
  lu_.compute(stacked);
  rcond_ = lu_.rcond();
  singular_ = !(std::isfinite(rcond_) && rcond_ >= kMinRcond);
}

CVector StackedJacobian::solve_restricted(const CVector& b) const {
  CVector rhs(b.size() + 1);
  rhs.head(b.size()) = b;
  rhs[b.size()] = 0.0;
  return lu_.solve(rhs);
}

double operator_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

CVector augmented_solve(const PolySystem& h, const ProjectivePoint& z,
                        const CVector& b) {
  if (b.size() != static_cast<Eigen::Index>(h.size()))
    throw std::invalid_argument("right-hand side has wrong dimension");
  const StackedJacobian stacked(jacobian(h, z.coords()), z.coords());
  if (stacked.singular())
    throw SingularJacobianError("restricted Jacobian is numerically singular");
  return stacked.solve_restricted(b);
}

ProjectivePoint projective_newton_step(const PolySystem& h,
                                       const ProjectivePoint& z) {
  CVector value;
  CMatrix jac;
  evaluate_with_jacobian(h, z.coords(), value, jac);
  const StackedJacobian stacked(jac, z.coords());
  if (stacked.singular())
    throw SingularJacobianError("restricted Jacobian is numerically singular");
  return ProjectivePoint(z.coords() - stacked.solve_restricted(value));
}

NewtonCertificateTrace newton_refine(const PolySystem& h,
                                     const ProjectivePoint& z, int iters) {
  if (iters < 1) throw std::invalid_argument("iters must be positive");
  NewtonCertificateTrace trace;
  trace.iterates.push_back(z);
  for (int k = 0; k < iters; ++k) {
    trace.iterates.push_back(projective_newton_step(h, trace.iterates.back()));
    trace.distances.push_back(riemann_distance(
        trace.iterates[trace.iterates.size() - 2], trace.iterates.back()));
  }
  return trace;
}

double restricted_inverse_norm(const CMatrix& stacked_inverse,
                               const DegreeVector& degrees) {
  const auto n = static_cast<Eigen::Index>(degrees.size());
  CMatrix scaled = stacked_inverse.leftCols(n);
  for (Eigen::Index i = 0; i < n; ++i)
    scaled.col(i) *= std::sqrt(static_cast<double>(degrees[i]));
  return operator_norm(scaled);
}

double condition_mu(const PolySystem& h, const ProjectivePoint& z) {
  const StackedJacobian stacked(jacobian(h, z.coords()), z.coords());
  if (stacked.singular()) return std::numeric_limits<double>::infinity();
  return bw_norm(h) * restricted_inverse_norm(stacked.inverse(), h.degrees());
}

double mu_system(const PolySystem& h,
                 const std::vector<ProjectivePoint>& roots) {
  if (roots.empty()) throw std::invalid_argument("mu_system needs roots");
  double mu = 0.0;
  for (const auto& z : roots) mu = std::max(mu, condition_mu(h, z));
  return mu;
}

}  // namespace certhom
