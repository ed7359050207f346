#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "certhom/errors.hpp"
#include "certhom/homotopy.hpp"
#include "certhom/io.hpp"
#include "certhom/oracle.hpp"
#include "certhom/parallel.hpp"
#include "certhom/search.hpp"
#include "certhom/start_systems.hpp"
#include "criteria.hpp"

namespace certhom::cli {

namespace {

// Bad arguments discovered after parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  bool trace = false;
};

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string coords_text(const ProjectivePoint& z) {
  std::string out;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (j > 0) out += " ";
    out += format_double(z[j].real()) + " " + format_double(z[j].imag());
  }
  return out;
}

DegreeVector parse_degrees(const std::string& text) {
  try {
    return DegreeVector::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--degrees: ") + e.what());
  }
}

void emit(const Global& g, const std::string& text, std::ostream& out) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + g.out);
  file << text;
}

// --- mu -------------------------------------------------------------------

struct MuArgs {
  std::string file;
  bool all_roots = false;
  int digits = 6;
};

int cmd_mu(const Global& g, const MuArgs& a, std::ostream& out) {
  const SystemFile sys = read_system_file(a.file);
  std::vector<ProjectivePoint> roots;
  if (a.all_roots)
    roots = solve_all(sys.system, TrackerChoice::certified, g.seed);
  else if (!sys.roots.empty())
    roots = sys.projective_roots();
  else
    throw UsageError("system file lists no roots; pass --all-roots to solve");
  out << std::setprecision(a.digits);
  for (std::size_t i = 0; i < roots.size(); ++i)
    out << "mu_root " << i << " " << condition_mu(sys.system, roots[i]) << "\n";
  out << "mu " << mu_system(sys.system, roots) << "\n";
  return 0;
}

// --- track ----------------------------------------------------------------

struct TrackArgs {
  std::string target;
  std::string start;
  std::size_t start_point = 0;
  bool heuristic = false;
};

int cmd_track(const Global& g, const TrackArgs& a, std::ostream& out) {
  const SystemFile target = read_system_file(a.target);
  const SystemFile start = read_system_file(a.start);
  if (start.roots.empty()) throw UsageError("start file lists no roots");
  if (a.start_point >= start.roots.size())
    throw UsageError("--start-point out of range");
  const GeodesicHomotopy H = make_linear_homotopy(
      normalize_to_sphere(target.system), normalize_to_sphere(start.system));
  const ProjectivePoint z0(start.roots[a.start_point]);
  TrackerConfig trackers;
  trackers.certified.retain_trace = g.trace;
  trackers.heuristic.retain_trace = g.trace;
  const TrackResult path = track_path(
      H, z0, a.heuristic ? TrackerKind::heuristic : TrackerKind::certified,
      trackers);
  if (g.trace) {
    for (std::size_t i = 0; i + 1 < path.node_s.size(); ++i) {
      out << "step " << i << " s " << format_double(path.node_s[i + 1]);
      if (i < path.step_sizes.size())
        out << " t " << format_double(path.step_sizes[i]);
      if (i < path.phi_trace.size())
        out << " phi " << format_double(path.phi_trace[i]);
      out << "\n";
    }
  }
  out << "NumberOfSteps " << path.num_steps << "\n";
  out << "Status " << to_string(path.status) << "\n";
  out << "Length " << format_double(H.length()) << "\n";
  out << "Endpoint " << coords_text(path.endpoint) << "\n";
  if (!path.converged())
    throw std::runtime_error("path did not converge: " +
                             std::string(to_string(path.status)));
  return 0;
}

// --- solve ----------------------------------------------------------------

struct SolveArgs {
  std::string target;
  std::string family = "total";
  std::optional<double> r;
  bool r_opt = false;
  bool heuristic = false;
};

int cmd_solve(const Global& g, const SolveArgs& a, std::ostream& out) {
  const SystemFile file = read_system_file(a.target);
  const PolySystem f = normalize_to_sphere(file.system);
  const DegreeVector& degrees = f.degrees();
  const TrackerKind kind =
      a.heuristic ? TrackerKind::heuristic : TrackerKind::certified;
  if (a.family != "total" && (a.r || a.r_opt))
    throw UsageError("--r and --r-opt only apply to the total family");

  std::vector<ProjectivePoint> roots;
  if (a.family == "total") {
    const double r = a.r_opt ? optimize_r(degrees).r_star : a.r.value_or(1.0);
    roots = solve_from(f, total_degree(degrees, r), kind, g.seed).roots;
  } else {
    // Good and random pairs know one root, so they solve for one path.
    Rng rng(derive_seed(g.seed, {1}));
    const InitialPair pair = a.family == "good"
                                 ? good_initial_pair(degrees)
                                 : random_initial_pair(degrees, rng);
    const TrackResult path =
        track_path(make_linear_homotopy(f, pair.g), pair.starts[0], kind);
    if (!path.converged())
      throw std::runtime_error("path did not converge: " +
                               std::string(to_string(path.status)));
    ProjectivePoint z = path.endpoint;
    for (int k = 0; k < 3; ++k) z = projective_newton_step(f, z);
    roots.push_back(std::move(z));
  }

  out << "roots " << roots.size() << "\n";
  for (std::size_t i = 0; i < roots.size(); ++i)
    out << "root " << i << " " << coords_text(roots[i]) << " residual "
        << format_double(relative_residual(f, roots[i])) << "\n";
  if (!g.out.empty()) {
    SystemFile solved = file;
    solved.roots_name = "solved";
    solved.roots.clear();
    for (const auto& z : roots) solved.roots.push_back(z.coords());
    write_system_file(g.out, solved);
  }
  return 0;
}

// --- optimize-r -----------------------------------------------------------

int cmd_optimize_r(const std::string& degrees, int digits, std::ostream& out) {
  const OptimalRadius opt = optimize_r(parse_degrees(degrees));
  out << std::setprecision(digits) << "r_star " << opt.r_star << "\n"
      << "mu_star " << opt.mu_star << "\n";
  return 0;
}

// --- search ---------------------------------------------------------------

struct SearchArgs {
  std::string config_file;
  std::optional<std::string> degrees;
  std::optional<std::string> mode;
  std::optional<std::string> tracker;
  std::optional<int> candidates;
  std::optional<int> keep;
  std::optional<int> targets;
  std::optional<int> pilot_targets;
  std::vector<std::string> include;
};

ExperimentConfig build_config(const Global& g, const SearchArgs& a,
                              bool seed_given) {
  ExperimentConfig c;
  if (!a.config_file.empty()) {
    std::ifstream in(a.config_file);
    if (!in) throw std::runtime_error("cannot open " + a.config_file);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      c = parse_experiment_config(buf.str());
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  try {
    if (a.degrees) c.degrees = parse_degrees(*a.degrees);
    if (a.mode) c.mode = parse_search_mode(*a.mode);
    if (a.tracker) c.tracker = parse_tracker_choice(*a.tracker);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.candidates) c.num_candidates = *a.candidates;
  if (a.keep) c.keep = *a.keep;
  if (a.targets) c.num_targets = *a.targets;
  if (a.pilot_targets) c.pilot_targets = *a.pilot_targets;
  if (seed_given || a.config_file.empty()) c.seed = g.seed;
  if (!a.include.empty()) {
    c.include = {false, false, false, false, false};
    for (const auto& name : a.include) {
      if (name == "total_r1")
        c.include.total_r1 = true;
      else if (name == "total_rstar")
        c.include.total_rstar = true;
      else if (name == "good_pair")
        c.include.good_pair = true;
      else if (name == "fekete")
        c.include.fekete = true;
      else if (name == "random_pair")
        c.include.random_pair = true;
      else
        throw UsageError("--include: unknown system '" + name + "'");
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

int cmd_search(const Global& g, const SearchArgs& a, bool seed_given,
               std::ostream& out) {
  const ExperimentConfig config = build_config(g, a, seed_given);
  const SearchReport report = run_experiment(config, g.threads);
  const std::string prefix = g.out.empty() ? "certhom_report" : g.out;
  write_report(report, default_provenance(config.seed), prefix);
  out << report_csv(report);
  out << "paths " << report.total_paths << "\n";
  out << "wrote " << prefix << ".json " << prefix << ".csv\n";
  return 0;
}

// --- oracle ---------------------------------------------------------------

int cmd_oracle(const Global& g, const std::string& file,
               std::optional<int> attempts, std::ostream& out) {
  const SystemFile sys = read_system_file(file);
  const PolySystem& h = sys.system;
  const OracleRootSet roots =
      h.size() == 1
          ? univariate_roots(h[0])
          : multistart_roots(
                h,
                attempts.value_or(50 *
                                  static_cast<int>(bezout_number(h.degrees()))),
                g.seed);
  out << "method "
      << (roots.method == OracleMethod::companion ? "companion" : "multistart")
      << "\n";
  for (std::size_t i = 0; i < roots.roots.size(); ++i)
    out << "root " << i << " " << coords_text(roots.roots[i]) << " residual "
        << format_double(roots.residuals[i]) << "\n";
  return 0;
}

// --- system ---------------------------------------------------------------

int cmd_system(const Global& g, const std::string& kind,
               const std::string& degrees_text, double r, std::ostream& out) {
  std::optional<InitialPair> pair;
  if (kind == "fekete") {
    pair = fekete_quartic();
  } else {
    const DegreeVector degrees = parse_degrees(degrees_text);
    Rng rng(derive_seed(g.seed, {2}));
    if (kind == "total")
      pair = total_degree(degrees, r);
    else if (kind == "good")
      pair = good_initial_pair(degrees);
    else if (kind == "random-pair")
      pair = random_initial_pair(degrees, rng);
    else if (kind == "random")
      pair = InitialPair{sample_sphere(degrees, rng), {}};
    else
      throw UsageError("--kind: unknown system '" + kind + "'");
  }
  SystemFile file{pair->g, false, kind, {}};
  for (const auto& z : pair->starts) file.roots.push_back(z.coords());
  emit(g, serialize_system(file), out);
  return 0;
}

// --- selftest -------------------------------------------------------------

int cmd_selftest(const Global& g, std::ostream& out) {
  criteria::Options options{g.seed == 0 ? 7 : g.seed, g.threads};
  bool all = true;
  for (int id : criteria::deterministic_subset()) {
    const criteria::Result r = criteria::run(id, options);
    out << criteria::format(r) << std::flush;
    all = all && r.passed;
  }
  out << (all ? "selftest passed" : "selftest failed") << "\n";
  return all ? 0 : 1;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const RootCountError*>(&e)) return "root_count";
  if (dynamic_cast<const SingularJacobianError*>(&e))
    return "singular_jacobian";
  if (dynamic_cast<const OracleError*>(&e)) return "oracle";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const std::domain_error*>(&e)) return "domain";
  return "runtime";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Certified linear homotopy continuation and start-system search",
               "certhom"};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Master seed (64-bit)");
  app.add_option("--threads", g.threads,
                 "Worker threads; 0 uses every hardware thread")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Output path or report prefix");
  app.add_flag("--trace", g.trace, "Print per-step traces");

  MuArgs mu;
  auto* mu_cmd = app.add_subcommand("mu", "Condition number of a system file");
  mu_cmd->add_option("--file", mu.file, "System file")->required();
  mu_cmd->add_flag("--all-roots", mu.all_roots,
                   "Solve for every root instead of using listed roots");
  mu_cmd->add_option("--digits", mu.digits, "Significant digits")
      ->check(CLI::Range(1, 17));

  TrackArgs track;
  auto* track_cmd = app.add_subcommand("track", "Track one path");
  track_cmd->add_option("--target", track.target, "Target system file")
      ->required();
  track_cmd->add_option("--start", track.start, "Start system file with roots")
      ->required();
  track_cmd->add_option("--start-point", track.start_point,
                        "Index of the start root");
  auto* cert_flag =
      track_cmd->add_flag("--certified", "Certified tracker (default)");
  track_cmd
      ->add_flag("--heuristic", track.heuristic, "Predictor-corrector tracker")
      ->excludes(cert_flag);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute roots of a target");
  solve_cmd->add_option("--target", solve.target, "Target system file")
      ->required();
  solve_cmd->add_option("--start", solve.family, "Start family")
      ->check(CLI::IsMember({"total", "good", "random"}));
  auto* r_opt = solve_cmd->add_option("--r", solve.r, "Total-degree radius")
                    ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--r-opt", solve.r_opt, "Use the best-conditioned radius")
      ->excludes(r_opt);
  solve_cmd->add_flag("--heuristic", solve.heuristic,
                      "Use the predictor-corrector tracker");

  std::string opt_degrees;
  int opt_digits = 6;
  auto* opt_cmd =
      app.add_subcommand("optimize-r", "Best-conditioned total-degree radius");
  opt_cmd->add_option("--degrees", opt_degrees, "Degrees, e.g. 2,2")
      ->required();
  opt_cmd->add_option("--digits", opt_digits, "Significant digits")
      ->check(CLI::Range(1, 17));

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Start-system search");
  search_cmd->add_option("--config", search.config_file, "JSON config file");
  search_cmd->add_option("--degrees", search.degrees, "Degrees, e.g. 4");
  search_cmd->add_option("--mode", search.mode,
                         "by_condition | by_avg_steps | one_root");
  search_cmd->add_option("--tracker", search.tracker,
                         "certified | heuristic | both");
  search_cmd->add_option("--candidates", search.candidates, "Candidates drawn");
  search_cmd->add_option("--keep", search.keep, "Candidates kept");
  search_cmd->add_option("--targets", search.targets, "Targets per estimate");
  search_cmd->add_option("--pilot-targets", search.pilot_targets,
                         "Targets per pilot estimate");
  search_cmd
      ->add_option("--include", search.include,
                   "Constructed systems: total_r1, total_rstar, "
                   "good_pair, fekete, random_pair")
      ->delimiter(',');

  std::string oracle_file;
  std::optional<int> attempts;
  auto* oracle_cmd = app.add_subcommand("oracle", "Validation roots");
  oracle_cmd->add_option("--file", oracle_file, "System file")->required();
  oracle_cmd->add_option("--attempts", attempts, "Multistart attempts")
      ->check(CLI::PositiveNumber);

  std::string kind, sys_degrees = "4";
  double sys_r = 1.0;
  auto* system_cmd = app.add_subcommand("system", "Write a system file");
  system_cmd
      ->add_option("--kind", kind,
                   "total | good | fekete | random | random-pair")
      ->required();
  system_cmd->add_option("--degrees", sys_degrees, "Degrees, e.g. 2,2");
  system_cmd->add_option("--r", sys_r, "Total-degree radius")
      ->check(CLI::PositiveNumber);

  auto* selftest_cmd =
      app.add_subcommand("selftest", "Deterministic acceptance checks");

  std::vector<std::string> argv_store = {"certhom"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    g.threads = resolve_threads(g.threads);
    const bool seed_given = app.count("--seed") > 0;
    if (mu_cmd->parsed()) return cmd_mu(g, mu, out);
    if (track_cmd->parsed()) return cmd_track(g, track, out);
    if (solve_cmd->parsed()) return cmd_solve(g, solve, out);
    if (opt_cmd->parsed()) return cmd_optimize_r(opt_degrees, opt_digits, out);
    if (search_cmd->parsed()) return cmd_search(g, search, seed_given, out);
    if (oracle_cmd->parsed()) return cmd_oracle(g, oracle_file, attempts, out);
    if (system_cmd->parsed())
      return cmd_system(g, kind, sys_degrees, sys_r, out);
    if (selftest_cmd->parsed()) return cmd_selftest(g, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error kind=" << error_kind(e) << " message=" << quoted(e.what())
        << "\n";
    return 1;
  }
  return 2;
}

}  // namespace certhom::cli
