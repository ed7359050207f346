#include "certhom/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace certhom {

namespace {

using nlohmann::json;

#ifndef CERTHOM_VERSION
#define CERTHOM_VERSION "0.0.0"
#endif

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Line cursor that skips comments and blank lines.
class Lines {
 public:
  explicit Lines(std::string_view text) : text_(text) {}

  // Next meaningful line split into fields; empty at end of input.
  std::vector<std::string_view> next() {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      auto fields = split_ws(line);
      if (!fields.empty()) return fields;
    }
    ++line_no_;
    return {};
  }
  std::size_t line() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

long long parse_int(std::string_view text, std::size_t line,
                    std::string_view field) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(line, std::string(field),
                     "expected an integer, got '" + std::string(text) + "'");
  return value;
}

double parse_real(std::string_view text, std::size_t line,
                  std::string_view field) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, std::string(field),
                     "expected a number, got '" + std::string(text) + "'");
  }
}

void expect_fields(const std::vector<std::string_view>& fields,
                   std::size_t count, std::string_view keyword,
                   std::size_t line) {
  if (fields.empty() || fields[0] != keyword)
    throw ParseError(
        line, std::string(keyword),
        "expected '" + std::string(keyword) + "'" +
            (fields.empty() ? std::string(" before end of input")
                            : ", got '" + std::string(fields[0]) + "'"));
  if (fields.size() != count)
    throw ParseError(line, std::string(keyword),
                     "expected " + std::to_string(count - 1) + " value(s)");
}

json estimate_json(const std::optional<StepEstimate>& e) {
  if (!e) return nullptr;
  return {{"mean", e->mean},
          {"std_error", e->std_error},
          {"targets_used", e->targets_used},
          {"targets_excluded", e->targets_excluded},
          {"paths_tracked", e->paths_tracked},
          {"paths_failed", e->paths_failed},
          {"flagged", e->flagged}};
}

json row_json(const CandidateReport& row) {
  json roots = json::array();
  for (const auto& z : row.roots) {
    json coords = json::array();
    for (Eigen::Index j = 0; j < z.size(); ++j)
      coords.push_back({z[j].real(), z[j].imag()});
    roots.push_back(std::move(coords));
  }
  json out = {{"system_id", row.system_id},
              {"candidate_index", row.candidate_index},
              {"mu", row.mu},
              {"per_root_mu", row.per_root_mu},
              {"num_paths_failed", row.num_paths_failed},
              {"pilot", estimate_json(row.pilot)},
              {"certified", estimate_json(row.certified)},
              {"heuristic", estimate_json(row.heuristic)},
              {"roots", std::move(roots)}};
  out["system"] = row.system
                      ? json(serialize_system({*row.system, false, {}, {}}))
                      : json(nullptr);
  return out;
}

json config_json(const ExperimentConfig& c) {
  return {{"degrees", c.degrees.to_string()},
          {"mode", std::string(to_string(c.mode))},
          {"tracker", std::string(to_string(c.tracker))},
          {"num_candidates", c.num_candidates},
          {"keep", c.keep},
          {"num_targets", c.num_targets},
          {"pilot_targets", c.pilot_targets},
          {"seed", c.seed},
          {"include",
           {{"total_r1", c.include.total_r1},
            {"total_rstar", c.include.total_rstar},
            {"good_pair", c.include.good_pair},
            {"fekete", c.include.fekete},
            {"random_pair", c.include.random_pair}}}};
}

std::string csv_value(double x) { return format_double(x); }

std::string csv_value(const std::optional<StepEstimate>& e) {
  return e ? format_double(e->mean) : std::string();
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return value;
}

ParseError::ParseError(std::size_t line, std::string field,
                       const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field +
                         "': " + message),
      line_(line),
      field_(std::move(field)) {}

HomoPoly homogenize(const AffinePoly& p, std::optional<int> degree) {
  int top = 0;
  for (const auto& [alpha, c] : p.terms) {
    if (static_cast<int>(alpha.size()) != p.num_vars)
      throw std::invalid_argument("affine exponent tuple has wrong length");
    top = std::max(top, std::accumulate(alpha.begin(), alpha.end(), 0));
  }
  const int l = degree.value_or(top);
  if (l < top) throw std::invalid_argument("degree below the affine degree");
  HomoPoly out(l, p.num_vars + 1);
  for (const auto& [alpha, c] : p.terms) {
    MultiIndex full(p.num_vars + 1);
    full[0] = l - std::accumulate(alpha.begin(), alpha.end(), 0);
    std::copy(alpha.begin(), alpha.end(), full.begin() + 1);
    out.set_coeff(full, out.coeff(full) + c);
  }
  return out;
}

AffinePoly dehomogenize(const HomoPoly& p) {
  AffinePoly out{p.num_vars() - 1, {}};
  for (auto& [alpha, c] : p.terms())
    out.terms.emplace_back(MultiIndex(alpha.begin() + 1, alpha.end()), c);
  return out;
}

std::vector<ProjectivePoint> SystemFile::projective_roots() const {
  return {roots.begin(), roots.end()};
}

std::string serialize_system(const SystemFile& file) {
  const PolySystem& h = file.system;
  std::string out = "certhom-system 1\n";
  out += "variables " + std::to_string(h.num_vars()) + "\n";
  out += "degrees " + h.degrees().to_string() + "\n";
  if (file.homogenized) out += "homogenized 1\n";
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto terms = h[i].terms();
    out += "poly " + std::to_string(i) + " terms " +
           std::to_string(terms.size()) + "\n";
    for (const auto& [alpha, c] : terms) {
      for (int a : alpha) out += std::to_string(a) + " ";
      out += format_double(c.real()) + " " + format_double(c.imag()) + "\n";
    }
  }
  if (!file.roots.empty()) {
    out += "roots " +
           (file.roots_name.empty() ? std::string("roots") : file.roots_name) +
           " " + std::to_string(file.roots.size()) + "\n";
    for (const auto& z : file.roots) {
      for (Eigen::Index j = 0; j < z.size(); ++j) {
        if (j > 0) out += " ";
        out += format_double(z[j].real()) + " " + format_double(z[j].imag());
      }
      out += "\n";
    }
  }
  out += "end\n";
  return out;
}

SystemFile parse_system(std::string_view text) {
  Lines lines(text);
  auto fields = lines.next();
  expect_fields(fields, 2, "certhom-system", lines.line());
  if (fields[1] != "1")
    throw ParseError(lines.line(), "certhom-system",
                     "unsupported format version " + std::string(fields[1]));

  fields = lines.next();
  bool affine = false;
  if (!fields.empty() && fields[0] == "affine-variables") {
    affine = true;
    fields[0] = "variables";
  }
  expect_fields(fields, 2, "variables", lines.line());
  const long long declared = parse_int(fields[1], lines.line(), "variables");
  const long long vars = affine ? declared + 1 : declared;
  if (declared < (affine ? 1 : 2) || vars > 64)
    throw ParseError(lines.line(), "variables", "variable count out of range");

  fields = lines.next();
  expect_fields(fields, 2, "degrees", lines.line());
  std::optional<DegreeVector> degrees;
  try {
    degrees = DegreeVector::parse(fields[1]);
  } catch (const std::exception& e) {
    throw ParseError(lines.line(), "degrees", e.what());
  }
  if (static_cast<long long>(degrees->size()) != vars - 1)
    throw ParseError(lines.line(), "degrees",
                     "need one degree per equation (variables - 1)");

  fields = lines.next();
  bool homogenized = affine;
  if (!fields.empty() && fields[0] == "homogenized") {
    expect_fields(fields, 2, "homogenized", lines.line());
    homogenized = parse_int(fields[1], lines.line(), "homogenized") != 0;
    fields = lines.next();
  }

  const int exps = static_cast<int>(affine ? vars - 1 : vars);
  std::vector<HomoPoly> polys;
  for (std::size_t i = 0; i < degrees->size(); ++i) {
    expect_fields(fields, 4, "poly", lines.line());
    if (parse_int(fields[1], lines.line(), "poly") != static_cast<long long>(i))
      throw ParseError(lines.line(), "poly",
                       "expected poly " + std::to_string(i));
    if (fields[2] != "terms")
      throw ParseError(lines.line(), "terms", "expected 'terms'");
    const long long count = parse_int(fields[3], lines.line(), "terms");
    if (count < 0) throw ParseError(lines.line(), "terms", "negative count");
    const int d = (*degrees)[i];
    AffinePoly affine_poly{exps, {}};
    HomoPoly p(d, static_cast<int>(vars));
    for (long long k = 0; k < count; ++k) {
      fields = lines.next();
      if (fields.size() != static_cast<std::size_t>(exps) + 2)
        throw ParseError(
            lines.line(), "term",
            "expected " + std::to_string(exps) + " exponents, re and im");
      MultiIndex alpha(exps);
      int total = 0;
      for (int j = 0; j < exps; ++j) {
        const long long a = parse_int(fields[j], lines.line(), "exponent");
        if (a < 0 || a > d)
          throw ParseError(lines.line(), "exponent", "exponent out of range");
        alpha[j] = static_cast<int>(a);
        total += alpha[j];
      }
      const Complex c(parse_real(fields[exps], lines.line(), "re"),
                      parse_real(fields[exps + 1], lines.line(), "im"));
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw ParseError(lines.line(), "re", "coefficient is not finite");
      if (affine) {
        if (total > d)
          throw ParseError(lines.line(), "exponent",
                           "term degree exceeds declared degree");
        affine_poly.terms.emplace_back(std::move(alpha), c);
      } else {
        if (total != d)
          throw ParseError(lines.line(), "exponent",
                           "exponent sum " + std::to_string(total) +
                               " does not match degree " + std::to_string(d));
        p.set_coeff(alpha, p.coeff(alpha) + c);
      }
    }
    polys.push_back(affine ? homogenize(affine_poly, d) : std::move(p));
    fields = lines.next();
  }

  SystemFile out{PolySystem(std::move(polys)), homogenized, {}, {}};
  if (!fields.empty() && fields[0] == "roots") {
    expect_fields(fields, 3, "roots", lines.line());
    out.roots_name = std::string(fields[1]);
    const long long count = parse_int(fields[2], lines.line(), "roots");
    if (count < 0) throw ParseError(lines.line(), "roots", "negative count");
    for (long long k = 0; k < count; ++k) {
      fields = lines.next();
      if (fields.size() != 2 * static_cast<std::size_t>(vars))
        throw ParseError(lines.line(), "root",
                         "expected " + std::to_string(2 * vars) + " numbers");
      CVector z(vars);
      for (long long j = 0; j < vars; ++j)
        z[j] = Complex(parse_real(fields[2 * j], lines.line(), "root"),
                       parse_real(fields[2 * j + 1], lines.line(), "root"));
      out.roots.push_back(std::move(z));
    }
    fields = lines.next();
  }
  expect_fields(fields, 1, "end", lines.line());
  return out;
}

SystemFile read_system_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

void write_system_file(const std::filesystem::path& path,
                       const SystemFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_system(file);
}

std::string_view library_version() { return CERTHOM_VERSION; }

Provenance default_provenance(std::uint64_t seed) {
  return {seed, std::string(library_version()), "unknown"};
}

std::string report_json(const SearchReport& report,
                        const Provenance& provenance) {
  json candidates = json::array();
  for (const auto& row : report.candidates) candidates.push_back(row_json(row));
  json constructed = json::array();
  for (const auto& row : report.constructed)
    constructed.push_back(row_json(row));
  json doc = {{"format", "certhom-report 1"},
              {"provenance",
               {{"seed", provenance.seed},
                {"version", provenance.version},
                {"git_hash", provenance.git_hash}}},
              {"config", config_json(report.config)},
              {"solve_radius", report.solve_radius},
              {"candidates_screened", report.candidates_screened},
              {"candidates_discarded", report.candidates_discarded},
              {"best_rejected_mu", report.best_rejected_mu
                                       ? json(*report.best_rejected_mu)
                                       : json(nullptr)},
              {"total_paths", report.total_paths},
              {"candidates", std::move(candidates)},
              {"constructed", std::move(constructed)}};
  return doc.dump(2) + "\n";
}

std::string report_csv(const SearchReport& report) {
  std::vector<const CandidateReport*> columns;
  for (const auto& row : report.candidates) columns.push_back(&row);
  for (const auto& row : report.constructed) columns.push_back(&row);

  const bool one_root = report.config.mode == SearchMode::one_root;
  const std::size_t roots = one_root ? 1 : bezout_number(report.config.degrees);

  std::string out = "row";
  for (const auto* c : columns) out += "," + c->system_id;
  out += "\n";
  for (std::size_t i = 0; i < roots; ++i) {
    out += one_root ? "mu(g;z)" : "mu(g;z_" + std::to_string(i + 1) + ")";
    for (const auto* c : columns) {
      out += ",";
      if (i < c->per_root_mu.size())
        out += csv_value(c->per_root_mu[i]);
      else if (one_root)
        out += csv_value(c->mu);  // random pairs: mean over draws
    }
    out += "\n";
  }
  if (!one_root) {
    out += "mu(g)";
    for (const auto* c : columns) out += "," + csv_value(c->mu);
    out += "\n";
  }
  const TrackerChoice t = report.config.tracker;
  if (t != TrackerChoice::heuristic) {
    out += "steps_certified";
    for (const auto* c : columns) out += "," + csv_value(c->certified);
    out += "\n";
  }
  if (t != TrackerChoice::certified) {
    out += "steps_heuristic";
    for (const auto* c : columns) out += "," + csv_value(c->heuristic);
    out += "\n";
  }
  return out;
}

void write_report(const SearchReport& report, const Provenance& provenance,
                  const std::filesystem::path& prefix) {
  const auto write = [](const std::filesystem::path& path,
                        const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
  };
  write(prefix.string() + ".json", report_json(report, provenance));
  write(prefix.string() + ".csv", report_csv(report));
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  const json doc = json::parse(json_text);
  ExperimentConfig c;
  if (doc.contains("degrees")) {
    const json& d = doc["degrees"];
    c.degrees = d.is_string() ? DegreeVector::parse(d.get<std::string>())
                              : DegreeVector(d.get<std::vector<int>>());
  }
  if (doc.contains("mode"))
    c.mode = parse_search_mode(doc["mode"].get<std::string>());
  if (doc.contains("tracker"))
    c.tracker = parse_tracker_choice(doc["tracker"].get<std::string>());
  c.num_candidates = doc.value("num_candidates", c.num_candidates);
  c.keep = doc.value("keep", c.keep);
  c.num_targets = doc.value("num_targets", c.num_targets);
  c.pilot_targets = doc.value("pilot_targets", c.pilot_targets);
  c.seed = doc.value("seed", c.seed);
  if (doc.contains("include")) {
    const json& inc = doc["include"];
    c.include.total_r1 = inc.value("total_r1", c.include.total_r1);
    c.include.total_rstar = inc.value("total_rstar", c.include.total_rstar);
    c.include.good_pair = inc.value("good_pair", c.include.good_pair);
    c.include.fekete = inc.value("fekete", c.include.fekete);
    c.include.random_pair = inc.value("random_pair", c.include.random_pair);
  }
  c.validate();
  return c;
}

}  // namespace certhom
