#pragma once

// Linear (geodesic) homotopy on the unit sphere of H_(d) and the two path
// trackers: the certified step-size rule and a predictor-corrector baseline.

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "certhom/polynomial.hpp"
#include "certhom/projective.hpp"

namespace certhom {

// Great-circle arc h_t = g cos t + w sin t, t in [0, T], from the start
// system g to the target f, both of unit BW norm.
class GeodesicHomotopy {
 public:
  const PolySystem& target() const { return target_; }
  const PolySystem& start() const { return start_; }
  const PolySystem& tangent() const { return tangent_; }
  double length() const { return length_; }
  // Re<g, w>; zero up to rounding.
  double start_tangent_re() const { return start_tangent_re_; }
  const DegreeVector& degrees() const { return start_.degrees(); }

 private:
  friend GeodesicHomotopy make_linear_homotopy(const PolySystem& f,
                                               const PolySystem& g);
  GeodesicHomotopy(PolySystem f, PolySystem g, PolySystem w, double length,
                   double start_tangent_re)
      : target_(std::move(f)),
        start_(std::move(g)),
        tangent_(std::move(w)),
        length_(length),
        start_tangent_re_(start_tangent_re) {}

  PolySystem target_;
  PolySystem start_;
  PolySystem tangent_;
  double length_;
  double start_tangent_re_;
};

// Throws std::invalid_argument for non-unit inputs, mismatched shapes, or
// |Re<f,g>| >= 1 - 1e-12.
GeodesicHomotopy make_linear_homotopy(const PolySystem& f, const PolySystem& g);

PolySystem homotopy_at(const GeodesicHomotopy& H, double t);
PolySystem homotopy_derivative_at(const GeodesicHomotopy& H, double t);

// Upper end of the admissible step interval is kStepConstant/(d^{3/2} phi).
inline constexpr double kStepConstant = 0.04804448;

enum class TrackStatus { converged, singular_failure, step_underflow };

std::string_view to_string(TrackStatus status);

struct TrackResult {
  explicit TrackResult(ProjectivePoint start) : endpoint(std::move(start)) {}

  ProjectivePoint endpoint;
  // Projective Newton steps for the certified tracker; predictor plus
  // corrector linear solves for the heuristic one.
  std::size_t num_steps = 0;
  std::vector<double> step_sizes;
  std::vector<double> phi_trace;
  // Retained nodes (s_k, z_k), k = 0..accepted steps, when tracing is on.
  std::vector<double> node_s;
  std::vector<ProjectivePoint> node_z;
  double c0_estimate = 0.0;
  TrackStatus status = TrackStatus::converged;

  bool converged() const { return status == TrackStatus::converged; }
};

struct CertifiedSettings {
  bool retain_trace = true;
  // t_i = step_fraction * kStepConstant / (d^{3/2} phi_i); any value in
  // [0.5, 1] stays inside the admissible interval.
  double step_fraction = 1.0;
  std::size_t max_steps = 100'000'000;
};

TrackResult track_certified(const GeodesicHomotopy& H,
                            const ProjectivePoint& z0,
                            const CertifiedSettings& settings = {});

struct HeuristicSettings {
  std::optional<double> initial_step;  // defaults to T/100
  double min_step = 1e-8;
  double corrector_tolerance = 1e-8;
  int max_corrector_iters = 3;
  double step_expand = 1.5;
  double step_shrink = 0.5;
  bool retain_trace = true;

  // Throws std::invalid_argument when settings are inconsistent for length T.
  void validate(double T) const;
};

TrackResult track_heuristic(const GeodesicHomotopy& H,
                            const ProjectivePoint& z0,
                            const HeuristicSettings& settings = {});

// Trapezoidal estimate of the condition-metric length
//   C0 = int_0^T mu(h_t, z_t) sqrt(|hdot_t|^2 + |zdot_t|^2) dt
// over the retained nodes. Stores the value into result.c0_estimate.
double path_length_c0(TrackResult& result, const GeodesicHomotopy& H);

}  // namespace certhom
