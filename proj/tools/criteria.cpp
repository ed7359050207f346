#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "certhom/errors.hpp"
#include "certhom/homotopy.hpp"
#include "certhom/io.hpp"
#include "certhom/oracle.hpp"
#include "certhom/parallel.hpp"
#include "certhom/projective.hpp"
#include "certhom/search.hpp"
#include "certhom/start_systems.hpp"

namespace certhom::criteria {

namespace {

// Sub-streams of the master seed, one per criterion.
enum Stream : std::uint64_t {
  kAverageSteps = 4,
  kOneRoot = 5,
  kStepRule = 6,
  kPathJump = 7,
  kRandomPairs = 8,
  kDeskSearch = 9,
};

std::string num(double x, int digits = 8) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// Records one check and folds it into the verdict.
void check(Result& r, bool ok, const std::string& what) {
  r.passed = r.passed && ok;
  r.details.push_back((ok ? "ok   " : "FAIL ") + what);
}

void note(Result& r, const std::string& what) {
  r.details.push_back("note " + what);
}

void check_budget(Result& r, double budget_seconds) {
  check(
      r, r.seconds <= budget_seconds,
      "wall time " + num(r.seconds, 3) + " s <= " + num(budget_seconds) + " s");
}

template <class Fn>
Result timed(int id, std::string title, double budget_seconds, Fn&& fn) {
  Result r;
  r.id = id;
  r.title = std::move(title);
  const auto start = std::chrono::steady_clock::now();
  try {
    fn(r);
  } catch (const std::exception& e) {
    check(r, false, std::string("unexpected exception: ") + e.what());
  }
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  check_budget(r, budget_seconds);
  return r;
}

bool within(double value, double expected, double tol) {
  return std::abs(value - expected) <= tol;
}

std::string per_target_text(const StepEstimate& e) {
  std::string out;
  for (double v : e.per_target) out += format_double(v) + " ";
  return out;
}

std::string point_text(const ProjectivePoint& z) {
  std::string out;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    out += format_double(z[j].real()) + " " + format_double(z[j].imag()) + " ";
  return out;
}

PolySystem draw(const DegreeVector& degrees, std::uint64_t seed,
                std::uint64_t j) {
  Rng rng(derive_seed(seed, {j}));
  return sample_sphere(degrees, rng);
}

}  // namespace

Result condition_exactness(const Options&) {
  return timed(
      1, "condition-number exactness of total-degree systems", 1.0,
      [](Result& r) {
        const double mu4 = total_degree_mu({4}, 1.0);
        const double mu10 = total_degree_mu({10}, 1.0);
        auto closed = [](int d) {
          return std::pow(2.0, (d - 1) / 2.0) / std::sqrt(d);
        };
        check(r, within(mu4, 1.41421, 1e-4),
              "mu(total, d=4, r=1) = " + num(mu4, 12) + " vs 1.41421 +- 1e-4");
        check(
            r, within(mu10, 7.15542, 1e-3),
            "mu(total, d=10, r=1) = " + num(mu10, 12) + " vs 7.15542 +- 1e-3");
        const double rel4 = std::abs(mu4 / closed(4) - 1.0);
        const double rel10 = std::abs(mu10 / closed(10) - 1.0);
        check(r, rel4 <= 1e-10,
              "d=4 relative error to 2^((d-1)/2)/sqrt(d): " + num(rel4, 3));
        check(r, rel10 <= 1e-10,
              "d=10 relative error to 2^((d-1)/2)/sqrt(d): " + num(rel10, 3));
        r.fingerprint = format_double(mu4) + " " + format_double(mu10);
      });
}

Result fekete_quartic_mu(const Options&) {
  return timed(2, "Fekete quartic condition number", 1.0, [](Result& r) {
    const InitialPair pair = fekete_quartic();
    const double mu = mu_system(pair.g, pair.starts);
    check(r, within(mu, 1.22475, 1e-4),
          "mu(g_Fekete) = " + num(mu, 12) + " vs 1.22475 +- 1e-4");
    check(r, pair.starts.size() == 4,
          "root count " + std::to_string(pair.starts.size()));
    for (std::size_t i = 0; i < pair.starts.size(); ++i) {
      const double m = condition_mu(pair.g, pair.starts[i]);
      check(r, m >= 1.22473 && m <= 1.22477,
            "mu(g, z_" + std::to_string(i + 1) + ") = " + num(m, 12) +
                " in [1.22473, 1.22477]");
      r.fingerprint += format_double(m) + " ";
    }
  });
}

Result r_optimization(const Options&) {
  return timed(3, "optimal total-degree radius", 10.0, [](Result& r) {
    const OptimalRadius opt = optimize_r({2, 2});
    const double rs = opt.r_star;
    const double residual = std::pow(rs, 4) * (1.0 + 4.0 * rs * rs) - 1.0;
    check(r, within(rs, 0.746119, 1e-5),
          "r_star(2,2) = " + num(rs, 12) + " vs 0.746119 +- 1e-5");
    check(r, std::abs(residual) <= 1e-8,
          "r^4 (1 + 4 r^2) - 1 = " + num(residual, 3) + " within 1e-8");
    check(r, within(opt.mu_star, 2.23607, 1e-3),
          "mu at r_star = " + num(opt.mu_star, 12) + " vs 2.23607 +- 1e-3");
    const double mu1 = total_degree_mu({2, 2}, 1.0);
    check(r, within(mu1, std::sqrt(6.0), 1e-6),
          "mu at r=1 = " + num(mu1, 12) + " vs sqrt(6) +- 1e-6");
    // Where the figure value 2.23607 = sqrt(5) actually occurs.
    const double mu_half = total_degree_mu({2, 2}, std::sqrt(0.5));
    note(r, "mu at r = 1/sqrt(2) is " + num(mu_half, 12) +
                "; closed form mu^2 = (1 + r^4)(1 + 2 r^2) / r^2");

    const OptimalRadius opt44 = optimize_r({4, 4});
    const double mu44_1 = total_degree_mu({4, 4}, 1.0);
    const bool use_star = opt44.mu_star <= mu44_1;
    const double best = use_star ? opt44.mu_star : mu44_1;
    check(r, within(best, 4.91876, 1e-2),
          "(4,4): min(mu(r=1) = " + num(mu44_1, 8) + ", mu(r_star = " +
              num(opt44.r_star, 8) + ") = " + num(opt44.mu_star, 8) +
              ") = " + num(best, 8) + " vs 4.91876 +- 1e-2, attained at " +
              (use_star ? "r_star" : "r=1"));
    r.fingerprint = format_double(rs) + " " + format_double(opt.mu_star) + " " +
                    format_double(opt44.r_star);
  });
}

Result certified_average_steps(const Options& options) {
  return timed(4, "certified average steps, n=1, d=4", 1800.0, [&](Result& r) {
    // At least 500 targets are required; 2000 keeps the paired stderr of the
    // ordering check near 15 steps.
    constexpr int kTargets = 2000;
    const std::uint64_t targets = derive_seed(options.seed, {kAverageSteps});
    const InitialPair fekete = fekete_quartic();
    const InitialPair total = total_degree({4}, 1.0);
    const StepEstimate ef = estimate_avg_steps(
        fekete, kTargets, TrackerKind::certified, targets, options.threads);
    const StepEstimate et = estimate_avg_steps(
        total, kTargets, TrackerKind::certified, targets, options.threads);
    check(r, ef.mean >= 1115 && ef.mean <= 1160,
          "mean(Fekete) = " + num(ef.mean) + " (stderr " +
              num(ef.std_error, 4) + ") in [1115, 1160]");
    check(r, et.mean >= 1155 && et.mean <= 1200,
          "mean(total r=1) = " + num(et.mean) + " (stderr " +
              num(et.std_error, 4) + ") in [1155, 1200]");
    // Both estimates use the same targets, so the difference has a paired
    // standard error.
    const double gap = et.mean - ef.mean;
    const double paired = paired_stderr(ef, et);
    const double independent = std::hypot(ef.std_error, et.std_error);
    check(r, gap > 0.0 && gap >= 3.0 * paired,
          "mean(total) - mean(Fekete) = " + num(gap) +
              " >= 3 x paired stderr " + num(paired, 4));
    note(r, "independent-sample stderr of the gap would be " +
                num(independent, 4));
    check(r, !ef.flagged && !et.flagged,
          "excluded targets: Fekete " + std::to_string(ef.targets_excluded) +
              ", total " + std::to_string(et.targets_excluded));
    r.fingerprint = per_target_text(ef) + "| " + per_target_text(et);
  });
}

Result one_root_ordering(const Options& options) {
  return timed(
      5, "one-root ordering good < total < random, d=(2,2)", 1800.0,
      [&](Result& r) {
        ExperimentConfig config;
        config.degrees = DegreeVector{2, 2};
        config.mode = SearchMode::one_root;
        config.tracker = TrackerChoice::certified;
        config.num_targets = 300;
        config.seed = derive_seed(options.seed, {kOneRoot});
        const SearchReport report =
            one_root_experiment(config, options.threads);
        const StepEstimate& good = *report.constructed.at(0).certified;
        const StepEstimate& total = *report.constructed.at(1).certified;
        const StepEstimate& random = *report.constructed.at(2).certified;
        for (const auto& row : report.constructed) {
          const StepEstimate& e = *row.certified;
          check(r, std::isfinite(e.mean) && e.mean > 0.0 && !e.flagged,
                row.system_id + ": mean " + num(e.mean) + ", stderr " +
                    num(e.std_error, 4) + ", excluded " +
                    std::to_string(e.targets_excluded));
        }
        const double se1 = paired_stderr(good, total);
        const double se2 = paired_stderr(total, random);
        check(r, total.mean - good.mean >= 2.0 * se1,
              "total - good = " + num(total.mean - good.mean) +
                  " >= 2 x paired stderr " + num(se1, 4));
        check(r, random.mean - total.mean >= 2.0 * se2,
              "random - total = " + num(random.mean - total.mean) +
                  " >= 2 x paired stderr " + num(se2, 4));
        r.fingerprint = report_json(report, default_provenance(config.seed)) +
                        report_csv(report);
      });
}

Result step_rule_compliance(const Options& options) {
  return timed(
      6, "certified step rule and step-count bound", 60.0, [&](Result& r) {
        const std::uint64_t seed = derive_seed(options.seed, {kStepRule});
        CertifiedSettings settings;
        settings.retain_trace = true;
        std::size_t bad_rule = 0, bad_sum = 0, bad_bound = 0, failed = 0;
        double worst_rule = 0.0, worst_sum = 0.0, worst_ratio = 0.0;
        for (std::uint64_t run = 0; run < 20; ++run) {
          // Ten quartic runs from total-degree roots, ten quadric-pair runs
          // from random pairs.
          const bool quartic = run < 10;
          const DegreeVector degrees =
              quartic ? DegreeVector{4} : DegreeVector{2, 2};
          Rng rng(derive_seed(seed, {run}));
          const PolySystem f = sample_sphere(degrees, rng);
          const InitialPair pair = quartic ? total_degree(degrees, 1.0)
                                           : random_initial_pair(degrees, rng);
          const GeodesicHomotopy H = make_linear_homotopy(f, pair.g);
          TrackResult path = track_certified(
              H, pair.starts[run % pair.starts.size()], settings);
          if (!path.converged()) {
            ++failed;
            continue;
          }
          const double d32 = std::pow(degrees.max(), 1.5);
          double sum = 0.0;
          for (std::size_t i = 0; i < path.step_sizes.size(); ++i) {
            sum += path.step_sizes[i];
            if (i + 1 == path.step_sizes.size()) break;
            const double dev = std::abs(
                path.step_sizes[i] * d32 * path.phi_trace[i] - kStepConstant);
            worst_rule = std::max(worst_rule, dev);
            if (dev > 1e-12) ++bad_rule;
          }
          const double sum_dev = std::abs(sum - H.length());
          worst_sum = std::max(worst_sum, sum_dev);
          if (sum_dev > 1e-12) ++bad_sum;
          const double c0 = path_length_c0(path, H);
          const double bound = 1.10 * std::ceil(71.0 * d32 * c0);
          worst_ratio = std::max(worst_ratio,
                                 static_cast<double>(path.num_steps) / bound);
          if (static_cast<double>(path.num_steps) > bound) ++bad_bound;
          r.fingerprint += std::to_string(path.num_steps) + " ";
        }
        check(r, failed == 0, "runs not converged: " + std::to_string(failed));
        check(r, bad_rule == 0,
              "t_i d^{3/2} phi_i = 0.04804448 +- 1e-12 on all non-final steps "
              "(worst deviation " +
                  num(worst_rule, 3) + ")");
        check(
            r, bad_sum == 0,
            "sum t_i = T +- 1e-12 (worst deviation " + num(worst_sum, 3) + ")");
        check(r, bad_bound == 0,
              "steps <= 1.10 ceil(71 d^{3/2} C0) (largest ratio " +
                  num(worst_ratio, 4) + ")");
      });
}

Result path_jump_freedom(const Options& options) {
  return timed(7, "path-jump freedom, n=1, d=10", 600.0, [&](Result& r) {
    constexpr std::size_t kTargets = 100;
    const DegreeVector degrees{10};
    const std::uint64_t seed = derive_seed(options.seed, {kPathJump});
    const InitialPair start = total_degree(degrees, optimize_r(degrees).r_star);

    struct Outcome {
      std::size_t unmatched = 0;
      std::size_t failed = 0;
      double min_separation = 0.0;
      double worst_match = 0.0;
      std::string text;
    };
    std::vector<Outcome> outcomes(kTargets);
    parallel_for(kTargets, options.threads, [&](std::size_t j) {
      Outcome& out = outcomes[j];
      const PolySystem f = draw(degrees, seed, j);
      const GeodesicHomotopy H = make_linear_homotopy(f, start.g);
      std::vector<ProjectivePoint> ends;
      for (const auto& z0 : start.starts) {
        const TrackResult path = track_path(H, z0, TrackerKind::certified);
        if (!path.converged()) {
          ++out.failed;
          continue;
        }
        ProjectivePoint z = path.endpoint;
        try {
          for (int k = 0; k < 3; ++k) z = projective_newton_step(f, z);
        } catch (const SingularJacobianError&) {
          ++out.failed;
          continue;
        }
        out.text += point_text(z);
        ends.push_back(std::move(z));
      }
      out.min_separation = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < ends.size(); ++a)
        for (std::size_t b = a + 1; b < ends.size(); ++b)
          out.min_separation =
              std::min(out.min_separation, riemann_distance(ends[a], ends[b]));

      // Greedy nearest matching; with separated roots it is the bijection.
      const OracleRootSet oracle = univariate_roots(f[0]);
      std::vector<bool> used(oracle.roots.size(), false);
      for (const auto& z : ends) {
        std::size_t best = oracle.roots.size();
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < oracle.roots.size(); ++k) {
          const double dk = riemann_distance(z, oracle.roots[k]);
          if (!used[k] && dk < dist) {
            dist = dk;
            best = k;
          }
        }
        out.worst_match = std::max(out.worst_match, dist);
        if (best == oracle.roots.size() || dist > 1e-8)
          ++out.unmatched;
        else
          used[best] = true;
      }
      out.unmatched += oracle.roots.size() - ends.size();
    });

    std::size_t mismatched_targets = 0, failed = 0;
    double min_sep = std::numeric_limits<double>::infinity(), worst = 0.0;
    for (const auto& out : outcomes) {
      if (out.unmatched > 0 || out.failed > 0) ++mismatched_targets;
      failed += out.failed;
      min_sep = std::min(min_sep, out.min_separation);
      worst = std::max(worst, out.worst_match);
      r.fingerprint += out.text + "\n";
    }
    check(r, failed == 0, "failed paths: " + std::to_string(failed));
    check(r, mismatched_targets == 0,
          "targets whose endpoints do not biject with oracle roots: " +
              std::to_string(mismatched_targets) + " of " +
              std::to_string(kTargets) + " (largest matched d_R " +
              num(worst, 3) + ")");
    check(r, min_sep > 1e-4,
          "smallest pairwise endpoint distance " + num(min_sep, 4) + " > 1e-4");
  });
}

Result random_pair_invariants(const Options& options) {
  return timed(8, "random pair invariants, d=(2,2)", 60.0, [&](Result& r) {
    Rng rng(derive_seed(options.seed, {kRandomPairs}));
    double worst_residual = 0.0, worst_norm = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const InitialPair pair = random_initial_pair({2, 2}, rng);
      worst_residual = std::max(
          worst_residual, evaluate(pair.g, pair.starts[0].coords()).norm());
      worst_norm = std::max(worst_norm, std::abs(bw_norm(pair.g) - 1.0));
    }
    check(r, worst_residual <= 1e-12,
          "max |g(z)| over 1000 draws = " + num(worst_residual, 3));
    check(r, worst_norm <= 1e-12,
          "max | ||g|| - 1 | over 1000 draws = " + num(worst_norm, 3));
    r.fingerprint =
        format_double(worst_residual) + " " + format_double(worst_norm);
  });
}

Result desk_scale_search(const Options& options) {
  return timed(
      9, "desk-scale search by condition number, n=1, d=4", 3600.0,
      [&](Result& r) {
        ExperimentConfig config;
        config.degrees = DegreeVector{4};
        config.mode = SearchMode::by_condition;
        config.tracker = TrackerChoice::certified;
        config.num_candidates = 2000;
        config.keep = 5;
        config.num_targets = 500;
        config.seed = derive_seed(options.seed, {kDeskSearch});
        config.include.total_r1 = true;
        config.include.fekete = true;
        const SearchReport report =
            screen_by_condition(config, options.threads);

        const CandidateReport* total = nullptr;
        for (const auto& row : report.constructed)
          if (row.system_id == "g_total_r1") total = &row;
        if (total == nullptr)
          throw std::logic_error("total-degree row missing");
        const double total_mean = total->certified->mean;

        check(r, report.candidates.size() == 5,
              "keepers: " + std::to_string(report.candidates.size()) +
                  " (discarded " + std::to_string(report.candidates_discarded) +
                  " of " + std::to_string(report.candidates_screened) + ")");
        for (const auto& c : report.candidates) {
          check(r, c.mu < 1.41421,
                c.system_id + ": mu " + num(c.mu) + " < 1.41421");
          check(r, c.certified->mean <= total_mean,
                c.system_id + ": mean steps " + num(c.certified->mean) +
                    " (stderr " + num(c.certified->std_error, 4) +
                    ") <= total-degree " + num(total_mean));
        }
        for (const auto& row : report.constructed)
          note(r, row.system_id + ": mu " + num(row.mu) + ", mean steps " +
                      num(row.certified->mean) + " (stderr " +
                      num(row.certified->std_error, 4) + ")");
        r.fingerprint = report_json(report, default_provenance(config.seed)) +
                        report_csv(report);
      });
}

Result determinism(const Options& options,
                   const std::vector<Result>& baseline) {
  return timed(10, "determinism across worker counts", 7200.0, [&](Result& r) {
    Options other = options;
    other.threads = options.threads == 1 ? 3 : 1;
    note(r, "baseline threads " + std::to_string(options.threads) +
                ", rerun threads " + std::to_string(other.threads));
    for (int id : {4, 5, 7, 9}) {
      auto it = std::find_if(baseline.begin(), baseline.end(),
                             [&](const Result& b) { return b.id == id; });
      const Result base = it != baseline.end() ? *it : run(id, options);
      const Result again = run(id, other);
      check(r,
            !base.fingerprint.empty() && base.fingerprint == again.fingerprint,
            "criterion " + std::to_string(id) + " output identical (" +
                std::to_string(base.fingerprint.size()) + " bytes)");
    }
  });
}

Result run(int id, const Options& options) {
  switch (id) {
    case 1:
      return condition_exactness(options);
    case 2:
      return fekete_quartic_mu(options);
    case 3:
      return r_optimization(options);
    case 4:
      return certified_average_steps(options);
    case 5:
      return one_root_ordering(options);
    case 6:
      return step_rule_compliance(options);
    case 7:
      return path_jump_freedom(options);
    case 8:
      return random_pair_invariants(options);
    case 9:
      return desk_scale_search(options);
    case 10:
      return determinism(options, {});
  }
  throw std::invalid_argument("no criterion " + std::to_string(id));
}

const std::vector<int>& deterministic_subset() {
  static const std::vector<int> ids = {1, 2, 3, 6, 8};
  return ids;
}

std::string format(const Result& result) {
  std::string out = std::string(result.passed ? "PASS" : "FAIL") + " [" +
                    std::to_string(result.id) + "] " + result.title + " (" +
                    num(result.seconds, 3) + " s)\n";
  for (const auto& line : result.details) out += "    " + line + "\n";
  return out;
}

}  // namespace certhom::criteria
