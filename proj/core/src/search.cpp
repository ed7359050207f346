#include "certhom/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "certhom/errors.hpp"
#include "certhom/parallel.hpp"

namespace certhom {

namespace {

// Top-level random streams derived from the master seed.
enum Stream : std::uint64_t {
  kCandidates = 1,
  kSolve = 2,
  kTargets = 3,
  kPilotTargets = 4,
  kRandomPairs = 5,
};

constexpr double kDuplicateRoot = 1e-8;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool degenerate_pair(const PolySystem& f, const PolySystem& g) {
  return std::abs(bw_inner(f, g).real()) >= 1.0 - 1e-12;
}

// Rotates the start pair by X_j -> exp(i theta_j) X_j, theta_0 = 0, and
// multiplies it by i. Without the global phase the path to f = -g crosses a
// system whose X_0 terms cancel.
InitialPair rotate_start(const InitialPair& start, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.05, 0.1);
  const int vars = start.g.num_vars();
  CVector phases(vars);
  phases[0] = 1.0;
  for (int j = 1; j < vars; ++j) phases[j] = std::polar(1.0, angle(rng));
  InitialPair out{compose_diagonal(start.g, phases) * Complex(0.0, 1.0), {}};
  const CVector inverse = phases.conjugate();
  for (const auto& z : start.starts)
    out.starts.emplace_back(CVector(inverse.asDiagonal() * z.coords()));
  return out;
}

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

SampleStats summarize(const std::vector<double>& values) {
  SampleStats s;
  double sum = 0.0;
  for (double v : values)
    if (!std::isnan(v)) {
      sum += v;
      ++s.count;
    }
  if (s.count == 0) {
    s.mean = kNaN;
    s.std_error = kNaN;
    return s;
  }
  s.mean = sum / static_cast<double>(s.count);
  double ss = 0.0;
  for (double v : values)
    if (!std::isnan(v)) ss += (v - s.mean) * (v - s.mean);
  s.std_error = s.count > 1 ? std::sqrt(ss / static_cast<double>(s.count - 1) /
                                        static_cast<double>(s.count))
                            : 0.0;
  return s;
}

PolySystem draw_target(const DegreeVector& degrees, std::uint64_t target_seed,
                       std::size_t j) {
  Rng rng(derive_seed(target_seed, {static_cast<std::uint64_t>(j)}));
  return sample_sphere(degrees, rng);
}

std::vector<TrackerKind> kinds_of(TrackerChoice choice) {
  switch (choice) {
    case TrackerChoice::certified:
      return {TrackerKind::certified};
    case TrackerChoice::heuristic:
      return {TrackerKind::heuristic};
    case TrackerChoice::both:
      return {TrackerKind::certified, TrackerKind::heuristic};
  }
  return {};
}

void fill_mu(CandidateReport& report) {
  report.per_root_mu.clear();
  for (const auto& z : report.roots)
    report.per_root_mu.push_back(condition_mu(*report.system, z));
  report.mu = report.per_root_mu.empty()
                  ? kNaN
                  : *std::max_element(report.per_root_mu.begin(),
                                      report.per_root_mu.end());
}

CandidateReport constructed_report(std::string id, InitialPair pair) {
  CandidateReport report;
  report.system_id = std::move(id);
  report.system = std::move(pair.g);
  report.roots = std::move(pair.starts);
  fill_mu(report);
  return report;
}

// Runs the full-sample step estimates for one system.
void estimate_steps(CandidateReport& report, const ExperimentConfig& config,
                    std::uint64_t target_seed, int threads,
                    std::size_t& total_paths) {
  const InitialPair pair{*report.system, report.roots};
  for (TrackerKind kind : kinds_of(config.tracker)) {
    StepEstimate estimate = estimate_avg_steps(
        pair, config.num_targets, kind, target_seed, threads, config.trackers);
    total_paths += estimate.paths_tracked;
    report.num_paths_failed += estimate.paths_failed;
    if (kind == TrackerKind::certified)
      report.certified = std::move(estimate);
    else
      report.heuristic = std::move(estimate);
  }
}

std::vector<CandidateReport> constructed_systems(const ExperimentConfig& config,
                                                 double r_star) {
  std::vector<CandidateReport> out;
  if (config.include.total_r1)
    out.push_back(
        constructed_report("g_total_r1", total_degree(config.degrees, 1.0)));
  if (config.include.total_rstar)
    out.push_back(constructed_report("g_total_rstar",
                                     total_degree(config.degrees, r_star)));
  if (config.include.fekete)
    out.push_back(constructed_report("g_fekete", fekete_quartic()));
  return out;
}

// Draws and solves candidates; slot i is empty when the solve failed.
std::vector<std::optional<CandidateReport>> draw_candidates(
    const ExperimentConfig& config, const InitialPair& solve_start,
    int threads) {
  std::vector<std::optional<CandidateReport>> slots(
      static_cast<std::size_t>(config.num_candidates));
  const std::uint64_t candidate_seed = derive_seed(config.seed, {kCandidates});
  const std::uint64_t solve_seed = derive_seed(config.seed, {kSolve});
  parallel_for(slots.size(), threads, [&](std::size_t i) {
    Rng rng(derive_seed(candidate_seed, {static_cast<std::uint64_t>(i)}));
    PolySystem g = sample_sphere(config.degrees, rng);
    try {
      SolveOutcome solved =
          solve_from(g, solve_start, TrackerKind::certified,
                     derive_seed(solve_seed, {static_cast<std::uint64_t>(i)}),
                     config.trackers);
      CandidateReport report;
      report.candidate_index = static_cast<long long>(i);
      report.system = std::move(g);
      report.roots = std::move(solved.roots);
      fill_mu(report);
      if (std::isfinite(report.mu)) slots[i] = std::move(report);
    } catch (const RootCountError&) {
      // discarded and counted by the caller
    }
  });
  return slots;
}

bool by_mu(const CandidateReport& a, const CandidateReport& b) {
  if (a.mu != b.mu) return a.mu < b.mu;
  return a.candidate_index < b.candidate_index;
}

void name_keepers(std::vector<CandidateReport>& keepers) {
  std::sort(keepers.begin(), keepers.end(), by_mu);
  for (std::size_t k = 0; k < keepers.size(); ++k)
    keepers[k].system_id = "g_" + std::to_string(k + 1);
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::string_view to_string(TrackerChoice choice) {
  switch (choice) {
    case TrackerChoice::certified:
      return "certified";
    case TrackerChoice::heuristic:
      return "heuristic";
    case TrackerChoice::both:
      return "both";
  }
  return "unknown";
}

std::string_view to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::by_condition:
      return "by_condition";
    case SearchMode::by_avg_steps:
      return "by_avg_steps";
    case SearchMode::one_root:
      return "one_root";
  }
  return "unknown";
}

TrackerChoice parse_tracker_choice(std::string_view text) {
  if (text == "certified") return TrackerChoice::certified;
  if (text == "heuristic") return TrackerChoice::heuristic;
  if (text == "both") return TrackerChoice::both;
  throw std::invalid_argument("unknown tracker: " + std::string(text));
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "by_condition") return SearchMode::by_condition;
  if (text == "by_avg_steps") return SearchMode::by_avg_steps;
  if (text == "one_root") return SearchMode::one_root;
  throw std::invalid_argument("unknown search mode: " + std::string(text));
}

TrackResult track_path(const GeodesicHomotopy& H, const ProjectivePoint& z0,
                       TrackerKind kind, const TrackerConfig& trackers) {
  return kind == TrackerKind::certified
             ? track_certified(H, z0, trackers.certified)
             : track_heuristic(H, z0, trackers.heuristic);
}

SolveOutcome solve_from(const PolySystem& f, const InitialPair& start,
                        TrackerKind kind, std::uint64_t seed,
                        const TrackerConfig& trackers) {
  const std::uint64_t expected = bezout_number(f.degrees());
  const InitialPair pair =
      degenerate_pair(f, start.g) ? rotate_start(start, seed) : start;
  const GeodesicHomotopy H = make_linear_homotopy(f, pair.g);

  SolveOutcome out;
  for (const auto& z0 : pair.starts) {
    const TrackResult path = track_path(H, z0, kind, trackers);
    out.total_steps += path.num_steps;
    if (!path.converged()) {
      ++out.failed_paths;
      continue;
    }
    ProjectivePoint root = path.endpoint;
    try {
      for (int k = 0; k < 3; ++k) root = projective_newton_step(f, root);
    } catch (const SingularJacobianError&) {
      ++out.failed_paths;
      continue;
    }
    const bool duplicate =
        std::any_of(out.roots.begin(), out.roots.end(), [&](const auto& r) {
          return riemann_distance(r, root) < kDuplicateRoot;
        });
    if (!duplicate) out.roots.push_back(std::move(root));
  }
  if (out.roots.size() < expected)
    throw RootCountError("solve found " + std::to_string(out.roots.size()) +
                             " of " + std::to_string(expected) + " roots",
                         out.roots.size(), expected);
  return out;
}

std::vector<ProjectivePoint> solve_all(const PolySystem& f,
                                       TrackerChoice choice,
                                       std::uint64_t seed) {
  const OptimalRadius radius = optimize_r(f.degrees());
  const TrackerKind kind = choice == TrackerChoice::heuristic
                               ? TrackerKind::heuristic
                               : TrackerKind::certified;
  return solve_from(normalize_to_sphere(f),
                    total_degree(f.degrees(), radius.r_star), kind, seed)
      .roots;
}

StepEstimate estimate_avg_steps(const InitialPair& pair, int num_targets,
                                TrackerKind kind, std::uint64_t target_seed,
                                int threads, const TrackerConfig& trackers) {
  if (num_targets < 1)
    throw std::invalid_argument("num_targets must be positive");
  if (pair.starts.empty())
    throw std::invalid_argument("pair has no start roots");
  const auto count = static_cast<std::size_t>(num_targets);
  std::vector<double> per_target(count, kNaN);
  std::vector<std::size_t> failures(count, 0);
  parallel_for(count, threads, [&](std::size_t j) {
    const PolySystem f = draw_target(pair.g.degrees(), target_seed, j);
    const GeodesicHomotopy H = make_linear_homotopy(f, pair.g);
    double steps = 0.0;
    for (const auto& z0 : pair.starts) {
      const TrackResult path = track_path(H, z0, kind, trackers);
      steps += static_cast<double>(path.num_steps);
      if (!path.converged()) ++failures[j];
    }
    if (failures[j] == 0) per_target[j] = steps;
  });

  StepEstimate out;
  const SampleStats stats = summarize(per_target);
  out.mean = stats.mean;
  out.std_error = stats.std_error;
  out.targets_used = stats.count;
  out.targets_excluded = count - stats.count;
  out.paths_tracked = count * pair.starts.size();
  out.paths_failed =
      std::accumulate(failures.begin(), failures.end(), std::size_t{0});
  out.flagged = static_cast<double>(out.targets_excluded) >=
                0.01 * static_cast<double>(count);
  out.per_target = std::move(per_target);
  return out;
}

double paired_stderr(const StepEstimate& a, const StepEstimate& b) {
  if (a.per_target.size() != b.per_target.size())
    throw std::invalid_argument("estimates use different target samples");
  std::vector<double> diffs;
  for (std::size_t j = 0; j < a.per_target.size(); ++j) {
    const double d = b.per_target[j] - a.per_target[j];
    diffs.push_back(d);  // NaN when either side excluded the target
  }
  return summarize(diffs).std_error;
}

void ExperimentConfig::validate() const {
  if (num_candidates < 1 || keep < 1 || num_targets < 1 || pilot_targets < 1)
    throw std::invalid_argument("experiment counts must be positive");
  if (mode != SearchMode::one_root && keep > num_candidates)
    throw std::invalid_argument("keep exceeds num_candidates");
  if (include.fekete && !(degrees == DegreeVector{4}))
    throw std::invalid_argument("the Fekete quartic requires degrees = 4");
  if (mode != SearchMode::one_root &&
      (include.good_pair || include.random_pair))
    throw std::invalid_argument(
        "good_pair and random_pair have a single known root; they are only "
        "valid in one_root mode");
}

SearchReport screen_by_condition(const ExperimentConfig& config, int threads) {
  config.validate();
  if (config.mode != SearchMode::by_condition)
    throw std::invalid_argument("screen_by_condition needs mode by_condition");
  const auto started = std::chrono::steady_clock::now();

  SearchReport report;
  report.config = config;
  const OptimalRadius radius = optimize_r(config.degrees);
  report.solve_radius = radius.r_star;
  const InitialPair solve_start = total_degree(config.degrees, radius.r_star);

  auto slots = draw_candidates(config, solve_start, threads);
  std::vector<CandidateReport> solved;
  for (auto& slot : slots)
    if (slot) solved.push_back(std::move(*slot));
  report.candidates_screened = slots.size();
  report.candidates_discarded = slots.size() - solved.size();

  std::sort(solved.begin(), solved.end(), by_mu);
  const std::size_t kept =
      std::min(solved.size(), static_cast<std::size_t>(config.keep));
  if (kept < solved.size()) report.best_rejected_mu = solved[kept].mu;
  solved.resize(kept);
  report.candidates = std::move(solved);
  name_keepers(report.candidates);
  report.constructed = constructed_systems(config, radius.r_star);

  const std::uint64_t target_seed = derive_seed(config.seed, {kTargets});
  for (auto& c : report.candidates)
    estimate_steps(c, config, target_seed, threads, report.total_paths);
  for (auto& c : report.constructed)
    estimate_steps(c, config, target_seed, threads, report.total_paths);
  report.wall_seconds = elapsed_since(started);
  return report;
}

SearchReport screen_by_avg_steps(const ExperimentConfig& config, int threads) {
  config.validate();
  if (config.mode != SearchMode::by_avg_steps)
    throw std::invalid_argument("screen_by_avg_steps needs mode by_avg_steps");
  const auto started = std::chrono::steady_clock::now();

  SearchReport report;
  report.config = config;
  const OptimalRadius radius = optimize_r(config.degrees);
  report.solve_radius = radius.r_star;
  const InitialPair solve_start = total_degree(config.degrees, radius.r_star);

  auto slots = draw_candidates(config, solve_start, threads);
  std::vector<CandidateReport> solved;
  for (auto& slot : slots)
    if (slot) solved.push_back(std::move(*slot));
  report.candidates_screened = slots.size();
  report.candidates_discarded = slots.size() - solved.size();

  // Pilot estimate, parallel across candidates.
  const std::uint64_t pilot_seed = derive_seed(config.seed, {kPilotTargets});
  parallel_for(solved.size(), threads, [&](std::size_t i) {
    CandidateReport& c = solved[i];
    c.pilot = estimate_avg_steps({*c.system, c.roots}, config.pilot_targets,
                                 TrackerKind::certified, pilot_seed, 1,
                                 config.trackers);
    c.num_paths_failed += c.pilot->paths_failed;
  });
  for (const auto& c : solved) report.total_paths += c.pilot->paths_tracked;

  auto pilot_rank = [](const CandidateReport& a, const CandidateReport& b) {
    const double ma = std::isnan(a.pilot->mean)
                          ? std::numeric_limits<double>::infinity()
                          : a.pilot->mean;
    const double mb = std::isnan(b.pilot->mean)
                          ? std::numeric_limits<double>::infinity()
                          : b.pilot->mean;
    if (ma != mb) return ma < mb;
    return a.candidate_index < b.candidate_index;
  };
  std::sort(solved.begin(), solved.end(), pilot_rank);
  const std::size_t kept =
      std::min(solved.size(), static_cast<std::size_t>(config.keep));
  solved.resize(kept);
  report.candidates = std::move(solved);
  name_keepers(report.candidates);
  report.constructed = constructed_systems(config, radius.r_star);

  const std::uint64_t target_seed = derive_seed(config.seed, {kTargets});
  for (auto& c : report.candidates)
    estimate_steps(c, config, target_seed, threads, report.total_paths);
  for (auto& c : report.constructed)
    estimate_steps(c, config, target_seed, threads, report.total_paths);
  report.wall_seconds = elapsed_since(started);
  return report;
}

SearchReport one_root_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  if (config.mode != SearchMode::one_root)
    throw std::invalid_argument("one_root_experiment needs mode one_root");
  const auto started = std::chrono::steady_clock::now();

  SearchReport report;
  report.config = config;
  const DegreeVector& degrees = config.degrees;
  const InitialPair good = good_initial_pair(degrees);
  InitialPair total = total_degree(degrees, 1.0);
  // Keep only (1, 1, ..., 1).
  total.starts.erase(total.starts.begin() + 1, total.starts.end());
  const std::uint64_t target_seed = derive_seed(config.seed, {kTargets});
  const std::uint64_t pair_seed = derive_seed(config.seed, {kRandomPairs});
  const auto count = static_cast<std::size_t>(config.num_targets);

  CandidateReport good_row = constructed_report("good", good);
  CandidateReport total_row = constructed_report("total", total);
  CandidateReport random_row;
  random_row.system_id = "random";

  // Random pairs are redrawn per target; record mean mu(g, z) over draws.
  std::vector<double> random_mu(count, kNaN);
  for (TrackerKind kind : kinds_of(config.tracker)) {
    // [kind][target]
    std::vector<std::vector<double>> steps(3, std::vector<double>(count, kNaN));
    std::vector<std::vector<std::size_t>> failed(
        3, std::vector<std::size_t>(count, 0));
    parallel_for(count, threads, [&](std::size_t j) {
      const PolySystem f = draw_target(degrees, target_seed, j);
      Rng rng(derive_seed(pair_seed, {static_cast<std::uint64_t>(j)}));
      const InitialPair random = random_initial_pair(degrees, rng);
      random_mu[j] = condition_mu(random.g, random.starts.front());
      const InitialPair* pairs[3] = {&good, &total, &random};
      for (int k = 0; k < 3; ++k) {
        const GeodesicHomotopy H = make_linear_homotopy(f, pairs[k]->g);
        const TrackResult path =
            track_path(H, pairs[k]->starts.front(), kind, config.trackers);
        if (path.converged())
          steps[k][j] = static_cast<double>(path.num_steps);
        else
          failed[k][j] = 1;
      }
    });
    CandidateReport* rows[3] = {&good_row, &total_row, &random_row};
    for (int k = 0; k < 3; ++k) {
      StepEstimate estimate;
      const SampleStats stats = summarize(steps[k]);
      estimate.mean = stats.mean;
      estimate.std_error = stats.std_error;
      estimate.targets_used = stats.count;
      estimate.targets_excluded = count - stats.count;
      estimate.paths_tracked = count;
      estimate.paths_failed = count - stats.count;
      estimate.flagged = static_cast<double>(estimate.targets_excluded) >=
                         0.01 * static_cast<double>(count);
      estimate.per_target = std::move(steps[k]);
      report.total_paths += count;
      rows[k]->num_paths_failed += estimate.paths_failed;
      if (kind == TrackerKind::certified)
        rows[k]->certified = std::move(estimate);
      else
        rows[k]->heuristic = std::move(estimate);
    }
  }
  random_row.mu = summarize(random_mu).mean;
  report.constructed = {std::move(good_row), std::move(total_row),
                        std::move(random_row)};
  report.wall_seconds = elapsed_since(started);
  return report;
}

SearchReport run_experiment(const ExperimentConfig& config, int threads) {
  switch (config.mode) {
    case SearchMode::by_condition:
      return screen_by_condition(config, threads);
    case SearchMode::by_avg_steps:
      return screen_by_avg_steps(config, threads);
    case SearchMode::one_root:
      return one_root_experiment(config, threads);
  }
  throw std::invalid_argument("unknown search mode");
}

}  // namespace certhom
