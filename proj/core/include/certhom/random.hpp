#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "certhom/polynomial.hpp"

namespace certhom {

using Rng = std::mt19937_64;

// Independent sub-seed for a task identified by a path of integers. Streams
// depend only on (master, path), never on scheduling.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path);

// Complex Gaussian with E|c|^2 = 1.
class ComplexGaussian {
 public:
  Complex operator()(Rng& rng) { return {normal_(rng), normal_(rng)}; }

 private:
  std::normal_distribution<double> normal_{0.0, 0.7071067811865476};
};

// Uniform point on the unit sphere of C^dim.
CVector uniform_sphere_point(int dim, Rng& rng);

}  // namespace certhom
