#pragma once

// File formats: the versioned system text format, report JSON and the
// figure-shaped CSV table. Doubles are always printed in their shortest
// round-trip form so parse(serialize(x)) is bit-exact.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "certhom/polynomial.hpp"
#include "certhom/search.hpp"

namespace certhom {

std::string format_double(double x);
// Whole-string parse; throws std::invalid_argument otherwise.
double parse_double(std::string_view text);

// Malformed input, with the 1-based line and the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// A non-homogeneous polynomial in x_1..x_n (exponent tuples of length n).
struct AffinePoly {
  int num_vars = 0;
  std::vector<std::pair<MultiIndex, Complex>> terms;
};

// X_0^{degree - |alpha|} x^alpha; degree defaults to the largest |alpha|.
HomoPoly homogenize(const AffinePoly& p, std::optional<int> degree = {});
// Sets X_0 = 1.
AffinePoly dehomogenize(const HomoPoly& p);

struct SystemFile {
  PolySystem system;
  // True when the file was given in affine form and homogenized on read.
  bool homogenized = false;
  std::string roots_name;
  // Raw coordinates as written; not renormalized so round trips are exact.
  std::vector<CVector> roots;

  std::vector<ProjectivePoint> projective_roots() const;
};

// Layout:
//   certhom-system 1
//   variables 3            (or "affine-variables 2" for the affine form)
//   degrees 2,2
//   homogenized 1          (optional)
//   poly 0 terms 2
//   2 0 0 1 0              exponent tuple, re, im
//   ...
//   roots start 4          (optional, name then count)
//   re0 im0 re1 im1 ...    one root per line
//   end
// '#' starts a comment; blank lines are ignored.
std::string serialize_system(const SystemFile& file);
SystemFile parse_system(std::string_view text);
SystemFile read_system_file(const std::filesystem::path& path);
void write_system_file(const std::filesystem::path& path,
                       const SystemFile& file);

struct Provenance {
  std::uint64_t seed = 0;
  std::string version;
  std::string git_hash = "unknown";
};

Provenance default_provenance(std::uint64_t seed);
std::string_view library_version();

// Deterministic: excludes wall-clock time, so equal inputs give equal bytes.
std::string report_json(const SearchReport& report,
                        const Provenance& provenance);
// One column per system, rows mu(g;z_i)..., mu(g), then steps per tracker.
std::string report_csv(const SearchReport& report);

// Writes <prefix>.json and <prefix>.csv.
void write_report(const SearchReport& report, const Provenance& provenance,
                  const std::filesystem::path& prefix);

// Reads an experiment config from JSON; missing keys keep their defaults.
ExperimentConfig parse_experiment_config(std::string_view json_text);

}  // namespace certhom
