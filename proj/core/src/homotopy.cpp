#include "certhom/homotopy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace certhom {

namespace {

constexpr double kUnitTolerance = 1e-10;

// Evaluates h_s, Dh_s and hdot_s at a point using linearity in (g, w), so no
// intermediate system is materialized per step.
class PathEvaluator {
 public:
  explicit PathEvaluator(const GeodesicHomotopy& H) : H_(H) {}

  void at(double s, const CVector& z) {
    evaluate_with_jacobian(H_.start(), z, g_value_, g_jac_);
    evaluate_with_jacobian(H_.tangent(), z, w_value_, w_jac_);
    const double c = std::cos(s);
    const double sn = std::sin(s);
    value = c * g_value_ + sn * w_value_;
    jac = c * g_jac_ + sn * w_jac_;
    hdot = -sn * g_value_ + c * w_value_;
    // |-g sin s + w cos s|^2 with |g| = |w| = 1.
    hdot_norm =
        std::sqrt(std::max(0.0, 1.0 - 2.0 * sn * c * H_.start_tangent_re()));
    h_norm =
        std::sqrt(std::max(0.0, 1.0 + 2.0 * sn * c * H_.start_tangent_re()));
  }

  CVector value;
  CMatrix jac;
  CVector hdot;
  double hdot_norm = 1.0;
  double h_norm = 1.0;

 private:
  const GeodesicHomotopy& H_;
  CVector g_value_, w_value_;
  CMatrix g_jac_, w_jac_;
};

CVector degree_scales(const DegreeVector& degrees) {
  CVector scales(static_cast<Eigen::Index>(degrees.size()) + 1);
  for (std::size_t i = 0; i < degrees.size(); ++i)
    scales[static_cast<Eigen::Index>(i)] =
        std::sqrt(static_cast<double>(degrees[i]));
  scales[scales.size() - 1] = 1.0;
  return scales;
}

void check_start(const GeodesicHomotopy& H, const ProjectivePoint& z0) {
  if (z0.size() != H.start().num_vars())
    throw std::invalid_argument("start point dimension does not match system");
}

}  // namespace

GeodesicHomotopy make_linear_homotopy(const PolySystem& f,
                                      const PolySystem& g) {
  if (!(f.degrees() == g.degrees()))
    throw std::invalid_argument("homotopy endpoints differ in degrees");
  if (std::abs(bw_norm(f) - 1.0) > kUnitTolerance ||
      std::abs(bw_norm(g) - 1.0) > kUnitTolerance)
    throw std::invalid_argument(
        "homotopy endpoints must lie on the unit sphere");
  const double c = bw_inner(f, g).real();
  if (std::abs(c) >= 1.0 - 1e-12)
    throw std::invalid_argument("degenerate homotopy: f = +-g");
  PolySystem w = (f - g * Complex(c)) * Complex(1.0 / std::sqrt(1.0 - c * c));
  const double gw = bw_inner(g, w).real();
  return GeodesicHomotopy(f, g, std::move(w), std::acos(c), gw);
}

PolySystem homotopy_at(const GeodesicHomotopy& H, double t) {
  if (!(t >= 0.0 && t <= H.length()))
    throw std::out_of_range("homotopy parameter outside [0, T]");
  if (t == H.length()) return H.target();
  if (t == 0.0) return H.start();
  return H.start() * Complex(std::cos(t)) + H.tangent() * Complex(std::sin(t));
}

PolySystem homotopy_derivative_at(const GeodesicHomotopy& H, double t) {
  if (!(t >= 0.0 && t <= H.length()))
    throw std::out_of_range("homotopy parameter outside [0, T]");
  return H.start() * Complex(-std::sin(t)) + H.tangent() * Complex(std::cos(t));
}

std::string_view to_string(TrackStatus status) {
  switch (status) {
    case TrackStatus::converged:
      return "converged";
    case TrackStatus::singular_failure:
      return "singular_failure";
    case TrackStatus::step_underflow:
      return "step_underflow";
  }
  return "unknown";
}

TrackResult track_certified(const GeodesicHomotopy& H,
                            const ProjectivePoint& z0,
                            const CertifiedSettings& settings) {
  check_start(H, z0);
  if (!(settings.step_fraction >= 0.5 && settings.step_fraction <= 1.0))
    throw std::invalid_argument("step_fraction must lie in [0.5, 1]");

  const double T = H.length();
  const auto n = static_cast<Eigen::Index>(H.degrees().size());
  const double d32 = std::pow(static_cast<double>(H.degrees().max()), 1.5);
  const CVector scales = degree_scales(H.degrees());

  TrackResult result{z0};
  if (settings.retain_trace) {
    result.node_s.push_back(0.0);
    result.node_z.push_back(z0);
  }
  PathEvaluator ev(H);
  CVector z = z0.coords();
  double s = 0.0;
  while (s != T) {
    if (result.num_steps >= settings.max_steps) {
      result.status = TrackStatus::step_underflow;
      break;
    }
    ev.at(s, z);
    const StackedJacobian stacked(ev.jac, z);
    if (stacked.singular()) {
      result.status = TrackStatus::singular_failure;
      break;
    }
    const CMatrix inverse = stacked.inverse();
    const double chi1 = operator_norm(inverse * scales.asDiagonal());
    const CVector implicit = inverse.leftCols(n) * ev.hdot;
    const double chi2 =
        std::sqrt(ev.hdot_norm * ev.hdot_norm + implicit.squaredNorm());
    const double phi = chi1 * chi2;

    double t = settings.step_fraction * kStepConstant / (d32 * phi);
    bool last = false;
    if (t > T - s) {
      t = T - s;
      last = true;
    } else if (!(t >= 1e-12 * T)) {
      result.status = TrackStatus::step_underflow;
      break;
    }
    const double s_next = last ? T : s + t;

    ev.at(s_next, z);
    const StackedJacobian newton(ev.jac, z);
    if (newton.singular()) {
      result.status = TrackStatus::singular_failure;
      break;
    }
    z -= newton.solve_restricted(ev.value);
    z.normalize();
    s = s_next;
    ++result.num_steps;
    if (settings.retain_trace) {
      result.step_sizes.push_back(t);
      result.phi_trace.push_back(phi);
      result.node_s.push_back(s);
      result.node_z.emplace_back(z);
    }
  }
  result.endpoint = ProjectivePoint(z);
  return result;
}

void HeuristicSettings::validate(double T) const {
  const double init = initial_step.value_or(T / 100.0);
  if (!(init > 0.0 && min_step > 0.0 && corrector_tolerance > 0.0 &&
        max_corrector_iters > 0))
    throw std::invalid_argument("heuristic settings must be positive");
  if (!(min_step < init))
    throw std::invalid_argument("min_step must be below initial_step");
  if (!(step_expand > 1.0))
    throw std::invalid_argument("step_expand must exceed 1");
  if (!(step_shrink > 0.0 && step_shrink < 1.0))
    throw std::invalid_argument("step_shrink must lie in (0, 1)");
}

TrackResult track_heuristic(const GeodesicHomotopy& H,
                            const ProjectivePoint& z0,
                            const HeuristicSettings& settings) {
  check_start(H, z0);
  const double T = H.length();
  settings.validate(T);

  TrackResult result{z0};
  if (settings.retain_trace) {
    result.node_s.push_back(0.0);
    result.node_z.push_back(z0);
  }
  PathEvaluator ev(H);
  CVector z = z0.coords();
  double s = 0.0;
  double dt = settings.initial_step.value_or(T / 100.0);
  while (s != T) {
    const bool last = dt >= T - s;
    if (last) dt = T - s;
    const double s_next = last ? T : s + dt;

    // Euler predictor along zdot = -(Dh|_{z-perp})^{-1} hdot(z).
    ev.at(s, z);
    const StackedJacobian stacked(ev.jac, z);
    ++result.num_steps;
    if (stacked.singular()) {
      result.status = TrackStatus::singular_failure;
      break;
    }
    CVector candidate = z - dt * stacked.solve_restricted(ev.hdot);
    candidate.normalize();

    bool accepted = false;
    for (int k = 0; k < settings.max_corrector_iters; ++k) {
      ev.at(s_next, candidate);
      const StackedJacobian corrector(ev.jac, candidate);
      ++result.num_steps;
      if (corrector.singular()) break;
      const CVector delta = corrector.solve_restricted(ev.value);
      candidate -= delta;
      candidate.normalize();
      if (!std::isfinite(delta.norm())) break;
      if (delta.norm() <= settings.corrector_tolerance) {
        accepted = true;
        break;
      }
    }

    if (accepted) {
      z = candidate;
      s = s_next;
      if (settings.retain_trace) {
        result.step_sizes.push_back(dt);
        result.node_s.push_back(s);
        result.node_z.emplace_back(z);
      }
      dt *= settings.step_expand;
    } else {
      dt *= settings.step_shrink;
      if (dt < settings.min_step) {
        result.status = TrackStatus::step_underflow;
        break;
      }
    }
  }
  result.endpoint = ProjectivePoint(z);
  return result;
}

double path_length_c0(TrackResult& result, const GeodesicHomotopy& H) {
  if (!result.converged())
    throw std::invalid_argument("C0 estimate needs a converged path");
  if (result.node_s.size() < 2 || result.node_s.size() != result.node_z.size())
    throw std::invalid_argument("C0 estimate needs a retained node trace");

  const auto n = static_cast<Eigen::Index>(H.degrees().size());
  PathEvaluator ev(H);
  std::vector<double> integrand(result.node_s.size());
  for (std::size_t k = 0; k < integrand.size(); ++k) {
    const CVector& z = result.node_z[k].coords();
    ev.at(result.node_s[k], z);
    const StackedJacobian stacked(ev.jac, z);
    if (stacked.singular()) {
      integrand[k] = std::numeric_limits<double>::infinity();
      continue;
    }
    const CMatrix inverse = stacked.inverse();
    const double mu = ev.h_norm * restricted_inverse_norm(inverse, H.degrees());
    const CVector implicit = inverse.leftCols(n) * ev.hdot;
    const double speed =
        std::sqrt(ev.hdot_norm * ev.hdot_norm + implicit.squaredNorm());
    integrand[k] = mu * speed;
  }
  double c0 = 0.0;
  for (std::size_t k = 1; k < integrand.size(); ++k)
    c0 += 0.5 * (result.node_s[k] - result.node_s[k - 1]) *
          (integrand[k] + integrand[k - 1]);
  result.c0_estimate = c0;
  return c0;
}

}  // namespace certhom
