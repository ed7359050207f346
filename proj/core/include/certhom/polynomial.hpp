#pragma once

// Dense homogeneous polynomials over C, polynomial systems, evaluation and
// the Bombieri-Weyl (BW) geometry on H_(d).

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace certhom {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Exponent tuple (alpha_0, ..., alpha_n) of a monomial.
using MultiIndex = std::vector<int>;

// All monomials of one degree in a fixed number of variables, enumerated in
// graded-lexicographic order (X0^l first). Instances are interned and shared.
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> get(int degree, int num_vars);

  int degree() const { return degree_; }
  int num_vars() const { return num_vars_; }
  std::size_t size() const { return multinomials_.size(); }

  // Exponents of monomial k as a contiguous span of num_vars entries.
  std::span<const int> exponents(std::size_t k) const {
    return {exponents_.data() + k * num_vars_,
            static_cast<std::size_t>(num_vars_)};
  }
  MultiIndex multi_index(std::size_t k) const;
  // Index of a monomial, or size() when alpha is not a valid exponent tuple.
  std::size_t index_of(std::span<const int> alpha) const;
  // l! / (alpha_0! ... alpha_n!)
  double multinomial(std::size_t k) const { return multinomials_[k]; }

  MonomialBasis(int degree, int num_vars);

 private:
  int degree_;
  int num_vars_;
  std::vector<int> exponents_;
  std::vector<double> multinomials_;
};

double multinomial_coefficient(std::span<const int> alpha);

// Homogeneous polynomial of a fixed degree, stored densely over its monomial
// basis. Absent coefficients are zero; the zero polynomial is representable.
class HomoPoly {
 public:
  using Term = std::pair<MultiIndex, Complex>;

  HomoPoly(int degree, int num_vars);
  HomoPoly(int degree, int num_vars, std::initializer_list<Term> terms);
  HomoPoly(int degree, int num_vars, std::span<const Term> terms);

  int degree() const { return basis_->degree(); }
  int num_vars() const { return basis_->num_vars(); }
  const MonomialBasis& basis() const { return *basis_; }

  Complex coeff(std::span<const int> alpha) const;
  Complex coeff(std::initializer_list<int> alpha) const {
    return coeff(std::span<const int>(alpha.begin(), alpha.size()));
  }
  void set_coeff(std::span<const int> alpha, Complex value);
  void set_coeff(std::initializer_list<int> alpha, Complex value) {
    set_coeff(std::span<const int>(alpha.begin(), alpha.size()), value);
  }
  std::span<const Complex> coeffs() const { return coeffs_; }
  // Replaces the whole coefficient vector (basis order).
  void set_coeffs(std::vector<Complex> coeffs);

  bool is_zero() const;
  // Nonzero terms in basis order.
  std::vector<Term> terms() const;

  Complex operator()(const CVector& z) const;

  HomoPoly& operator+=(const HomoPoly& other);
  HomoPoly& operator-=(const HomoPoly& other);
  HomoPoly& operator*=(Complex scale);
  friend HomoPoly operator+(HomoPoly a, const HomoPoly& b) { return a += b; }
  friend HomoPoly operator-(HomoPoly a, const HomoPoly& b) { return a -= b; }
  friend HomoPoly operator*(Complex s, HomoPoly a) { return a *= s; }
  friend HomoPoly operator*(HomoPoly a, Complex s) { return a *= s; }
  friend bool operator==(const HomoPoly& a, const HomoPoly& b);

 private:
  void check_compatible(const HomoPoly& other) const;

  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<Complex> coeffs_;
};

// Degrees (d_1, ..., d_n) of a square system; nonempty, all entries >= 1.
class DegreeVector {
 public:
  DegreeVector(std::vector<int> degrees);
  DegreeVector(std::initializer_list<int> degrees)
      : DegreeVector(std::vector<int>(degrees)) {}

  // Parses "2,2" or "4".
  static DegreeVector parse(std::string_view text);

  std::size_t size() const { return degrees_.size(); }
  int operator[](std::size_t i) const { return degrees_[i]; }
  int max() const;
  const std::vector<int>& values() const { return degrees_; }
  auto begin() const { return degrees_.begin(); }
  auto end() const { return degrees_.end(); }
  std::string to_string() const;

  friend bool operator==(const DegreeVector&, const DegreeVector&) = default;

 private:
  std::vector<int> degrees_;
};

std::uint64_t bezout_number(const DegreeVector& degrees);

// n homogeneous polynomials in n+1 variables.
class PolySystem {
 public:
  explicit PolySystem(std::vector<HomoPoly> polys);

  std::size_t size() const { return polys_.size(); }
  int num_vars() const { return polys_.front().num_vars(); }
  const DegreeVector& degrees() const { return degrees_; }
  const HomoPoly& operator[](std::size_t i) const { return polys_[i]; }
  const std::vector<HomoPoly>& polys() const { return polys_; }

  PolySystem& operator+=(const PolySystem& other);
  PolySystem& operator-=(const PolySystem& other);
  PolySystem& operator*=(Complex scale);
  friend PolySystem operator+(PolySystem a, const PolySystem& b) {
    return a += b;
  }
  friend PolySystem operator-(PolySystem a, const PolySystem& b) {
    return a -= b;
  }
  friend PolySystem operator*(Complex s, PolySystem a) { return a *= s; }
  friend PolySystem operator*(PolySystem a, Complex s) { return a *= s; }
  friend bool operator==(const PolySystem&, const PolySystem&) = default;

 private:
  void check_shape(const PolySystem& other) const;

  std::vector<HomoPoly> polys_;
  DegreeVector degrees_;
};

// Zero system with the given shape.
PolySystem zero_system(const DegreeVector& degrees);

CVector evaluate(const PolySystem& h, const CVector& z);
// n x (n+1) matrix of partial derivatives dh_i/dX_j at z.
CMatrix jacobian(const PolySystem& h, const CVector& z);
// Both at once, sharing the coordinate power table.
void evaluate_with_jacobian(const PolySystem& h, const CVector& z,
                            CVector& value, CMatrix& jac);

Complex bw_inner(const HomoPoly& v, const HomoPoly& w);
Complex bw_inner(const PolySystem& h, const PolySystem& h2);
double bw_norm(const HomoPoly& v);
double bw_norm(const PolySystem& h);

// h / ||h||. Throws std::domain_error on the zero system.
PolySystem normalize_to_sphere(const PolySystem& h);

// Reproducing kernel K_z = <X, z>^l for unit z: <p, K_z> = p(z).
HomoPoly kernel_poly(const CVector& z, int degree);

// h(D X) for D = diag(phases). Zeros of the result are D^{-1} times zeros of h.
PolySystem compose_diagonal(const PolySystem& h, const CVector& phases);

}  // namespace certhom
