#pragma once

// Experiment engine: solving all roots by homotopy, screening random start
// systems by condition number or by estimated average step count, and the
// one-root comparison of good / total-degree / random initial pairs.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "certhom/homotopy.hpp"
#include "certhom/start_systems.hpp"

namespace certhom {

enum class TrackerKind { certified, heuristic };
enum class TrackerChoice { certified, heuristic, both };
enum class SearchMode { by_condition, by_avg_steps, one_root };

std::string_view to_string(TrackerChoice choice);
std::string_view to_string(SearchMode mode);
TrackerChoice parse_tracker_choice(std::string_view text);
SearchMode parse_search_mode(std::string_view text);

// Settings shared by every path tracked in a run.
// Traces are off by default: search runs track millions of paths.
struct TrackerConfig {
  TrackerConfig() {
    certified.retain_trace = false;
    heuristic.retain_trace = false;
  }
  CertifiedSettings certified;
  HeuristicSettings heuristic;
};

TrackResult track_path(const GeodesicHomotopy& H, const ProjectivePoint& z0,
                       TrackerKind kind, const TrackerConfig& trackers = {});

struct SolveOutcome {
  std::vector<ProjectivePoint> roots;  // distinct, refined endpoints
  std::size_t total_steps = 0;
  std::size_t failed_paths = 0;
};

// Tracks every start root of `start` to f, refines each endpoint with three
// projective Newton steps and removes duplicates (d_R < 1e-8). A start equal
// to +-f is replaced by a small diagonal unitary rotation of itself (drawn
// from `seed`). Throws RootCountError when fewer than Bezout-many distinct
// roots come back.
SolveOutcome solve_from(const PolySystem& f, const InitialPair& start,
                        TrackerKind kind, std::uint64_t seed,
                        const TrackerConfig& trackers = {});

// solve_from with the best-conditioned total-degree start system.
std::vector<ProjectivePoint> solve_all(const PolySystem& f,
                                       TrackerChoice choice,
                                       std::uint64_t seed);

struct StepEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t targets_used = 0;
  std::size_t targets_excluded = 0;
  std::size_t paths_tracked = 0;
  std::size_t paths_failed = 0;
  // Excluded targets reached 1% of the sample.
  bool flagged = false;
  // Summed steps per target (index = target id); NaN for excluded targets.
  std::vector<double> per_target;
};

// Target j is sample_sphere drawn from derive_seed(target_seed, {j}), so
// estimates sharing a target_seed see identical targets.
StepEstimate estimate_avg_steps(const InitialPair& pair, int num_targets,
                                TrackerKind kind, std::uint64_t target_seed,
                                int threads = 1,
                                const TrackerConfig& trackers = {});

// Standard error of mean(b) - mean(a) over targets both estimates used.
double paired_stderr(const StepEstimate& a, const StepEstimate& b);

struct ConstructedFlags {
  bool total_r1 = true;
  bool total_rstar = false;
  bool good_pair = false;
  bool fekete = false;
  bool random_pair = false;
};

struct ExperimentConfig {
  DegreeVector degrees{4};
  SearchMode mode = SearchMode::by_condition;
  TrackerChoice tracker = TrackerChoice::certified;
  int num_candidates = 2000;
  int keep = 5;
  int num_targets = 500;
  int pilot_targets = 50;
  std::uint64_t seed = 0;
  ConstructedFlags include;
  TrackerConfig trackers;

  // Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct CandidateReport {
  std::string system_id;
  // Draw index for screened candidates, -1 for constructed systems.
  long long candidate_index = -1;
  std::optional<PolySystem> system;
  std::vector<ProjectivePoint> roots;
  std::vector<double> per_root_mu;
  double mu = 0.0;
  std::optional<StepEstimate> pilot;
  std::optional<StepEstimate> certified;
  std::optional<StepEstimate> heuristic;
  std::size_t num_paths_failed = 0;
};

struct SearchReport {
  ExperimentConfig config;
  double solve_radius = 0.0;  // r of the total-degree start used to solve
  std::vector<CandidateReport> candidates;   // keepers, ascending mu
  std::vector<CandidateReport> constructed;  // reference systems
  std::size_t candidates_screened = 0;
  std::size_t candidates_discarded = 0;
  // Smallest mu among screened candidates that were not kept.
  std::optional<double> best_rejected_mu;
  std::size_t total_paths = 0;
  double wall_seconds = 0.0;
};

SearchReport screen_by_condition(const ExperimentConfig& config,
                                 int threads = 1);
SearchReport screen_by_avg_steps(const ExperimentConfig& config,
                                 int threads = 1);
SearchReport one_root_experiment(const ExperimentConfig& config,
                                 int threads = 1);
// Dispatches on config.mode.
SearchReport run_experiment(const ExperimentConfig& config, int threads = 1);

}  // namespace certhom
