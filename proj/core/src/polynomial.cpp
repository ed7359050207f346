#include "certhom/polynomial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace certhom {

namespace {

void enumerate(int remaining, int var, int num_vars, std::vector<int>& current,
               std::vector<int>& out) {
  if (var == num_vars - 1) {
    current[var] = remaining;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    current[var] = a;
    enumerate(remaining - a, var + 1, num_vars, current, out);
  }
}

bool is_finite(Complex c) {
  return std::isfinite(c.real()) && std::isfinite(c.imag());
}

// pow_table[j * (l+1) + e] = z_j^e
void fill_powers(const CVector& z, int max_degree,
                 std::vector<Complex>& table) {
  const auto stride = static_cast<std::size_t>(max_degree + 1);
  table.assign(static_cast<std::size_t>(z.size()) * stride, Complex(1.0));
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    Complex* row = table.data() + static_cast<std::size_t>(j) * stride;
    for (int e = 1; e <= max_degree; ++e) row[e] = row[e - 1] * z[j];
  }
}

}  // namespace

double multinomial_coefficient(std::span<const int> alpha) {
  // Built as a product of binomials to stay exact for the sizes in use.
  double result = 1.0;
  int total = 0;
  for (int a : alpha) {
    for (int k = 1; k <= a; ++k) {
      ++total;
      result = result * total / k;
    }
  }
  return std::round(result);
}

MonomialBasis::MonomialBasis(int degree, int num_vars)
    : degree_(degree), num_vars_(num_vars) {
  if (degree < 0 || num_vars < 1)
    throw std::invalid_argument("monomial basis needs degree >= 0, vars >= 1");
  std::vector<int> current(num_vars, 0);
  enumerate(degree, 0, num_vars, current, exponents_);
  const std::size_t count = exponents_.size() / num_vars;
  multinomials_.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    multinomials_.push_back(multinomial_coefficient(exponents(k)));
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int degree,
                                                        int num_vars) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>>
      cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{degree, num_vars}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(degree, num_vars);
  return slot;
}

MultiIndex MonomialBasis::multi_index(std::size_t k) const {
  auto e = exponents(k);
  return MultiIndex(e.begin(), e.end());
}

std::size_t MonomialBasis::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != num_vars_) return size();
  int sum = 0;
  for (int a : alpha) {
    if (a < 0) return size();
    sum += a;
  }
  if (sum != degree_) return size();
  // Rank in descending-lex order: count the tuples that precede alpha.
  std::size_t index = 0;
  int remaining = degree_;
  for (int j = 0; j + 1 < num_vars_; ++j) {
    const int vars_left = num_vars_ - j - 1;
    for (int a = remaining; a > alpha[j]; --a) {
      // number of tuples of (remaining - a) in vars_left variables
      const int m = remaining - a;
      double c = 1.0;
      for (int k = 1; k < vars_left; ++k) c = c * (m + k) / k;
      index += static_cast<std::size_t>(std::llround(c));
    }
    remaining -= alpha[j];
  }
  return index;
}

HomoPoly::HomoPoly(int degree, int num_vars)
    : basis_(MonomialBasis::get(degree, num_vars)),
      coeffs_(basis_->size(), Complex(0.0)) {}

HomoPoly::HomoPoly(int degree, int num_vars, std::initializer_list<Term> terms)
    : HomoPoly(degree, num_vars,
               std::span<const Term>(terms.begin(), terms.size())) {}

HomoPoly::HomoPoly(int degree, int num_vars, std::span<const Term> terms)
    : HomoPoly(degree, num_vars) {
  for (const auto& [alpha, value] : terms) {
    const std::size_t k = basis_->index_of(alpha);
    if (k == basis_->size())
      throw std::invalid_argument("exponent tuple does not match degree/vars");
    if (!is_finite(value))
      throw std::invalid_argument("non-finite polynomial coefficient");
    coeffs_[k] += value;
  }
}

Complex HomoPoly::coeff(std::span<const int> alpha) const {
  const std::size_t k = basis_->index_of(alpha);
  if (k == basis_->size())
    throw std::invalid_argument("exponent tuple does not match degree/vars");
  return coeffs_[k];
}

void HomoPoly::set_coeff(std::span<const int> alpha, Complex value) {
  const std::size_t k = basis_->index_of(alpha);
  if (k == basis_->size())
    throw std::invalid_argument("exponent tuple does not match degree/vars");
  if (!is_finite(value))
    throw std::invalid_argument("non-finite polynomial coefficient");
  coeffs_[k] = value;
}

void HomoPoly::set_coeffs(std::vector<Complex> coeffs) {
  if (coeffs.size() != coeffs_.size())
    throw std::invalid_argument("coefficient vector has wrong length");
  for (Complex c : coeffs)
    if (!is_finite(c))
      throw std::invalid_argument("non-finite polynomial coefficient");
  coeffs_ = std::move(coeffs);
}

bool HomoPoly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](Complex c) { return c == Complex(0.0); });
}

std::vector<HomoPoly::Term> HomoPoly::terms() const {
  std::vector<Term> out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (coeffs_[k] != Complex(0.0))
      out.emplace_back(basis_->multi_index(k), coeffs_[k]);
  return out;
}

Complex HomoPoly::operator()(const CVector& z) const {
  if (z.size() != num_vars())
    throw std::invalid_argument("point dimension does not match polynomial");
  std::vector<Complex> powers;
  fill_powers(z, degree(), powers);
  const auto stride = static_cast<std::size_t>(degree() + 1);
  Complex sum(0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == Complex(0.0)) continue;
    auto alpha = basis_->exponents(k);
    Complex term = coeffs_[k];
    for (int j = 0; j < num_vars(); ++j) term *= powers[j * stride + alpha[j]];
    sum += term;
  }
  return sum;
}

void HomoPoly::check_compatible(const HomoPoly& other) const {
  if (degree() != other.degree() || num_vars() != other.num_vars())
    throw std::invalid_argument("polynomials differ in degree or variables");
}

HomoPoly& HomoPoly::operator+=(const HomoPoly& other) {
  check_compatible(other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    coeffs_[k] += other.coeffs_[k];
  return *this;
}

HomoPoly& HomoPoly::operator-=(const HomoPoly& other) {
  check_compatible(other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    coeffs_[k] -= other.coeffs_[k];
  return *this;
}

HomoPoly& HomoPoly::operator*=(Complex scale) {
  if (!is_finite(scale)) throw std::invalid_argument("non-finite scale");
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

bool operator==(const HomoPoly& a, const HomoPoly& b) {
  return a.degree() == b.degree() && a.num_vars() == b.num_vars() &&
         a.coeffs_ == b.coeffs_;
}

DegreeVector::DegreeVector(std::vector<int> degrees)
    : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw std::invalid_argument("empty degree vector");
  for (int d : degrees_)
    if (d < 1) throw std::invalid_argument("degrees must be positive");
}

DegreeVector DegreeVector::parse(std::string_view text) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw std::invalid_argument("malformed degree list: " +
                                  std::string(text));
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return DegreeVector(std::move(out));
}

int DegreeVector::max() const {
  return *std::max_element(degrees_.begin(), degrees_.end());
}

std::string DegreeVector::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < degrees_.size(); ++i)
    os << (i ? "," : "") << degrees_[i];
  return os.str();
}

std::uint64_t bezout_number(const DegreeVector& degrees) {
  std::uint64_t product = 1;
  for (int d : degrees) product *= static_cast<std::uint64_t>(d);
  return product;
}

namespace {
std::vector<int> degrees_of(const std::vector<HomoPoly>& polys) {
  if (polys.empty()) throw std::invalid_argument("empty polynomial system");
  std::vector<int> out;
  for (const auto& p : polys) out.push_back(p.degree());
  return out;
}
}  // namespace

PolySystem::PolySystem(std::vector<HomoPoly> polys)
    : polys_(std::move(polys)), degrees_(degrees_of(polys_)) {
  const int vars = static_cast<int>(polys_.size()) + 1;
  for (const auto& p : polys_)
    if (p.num_vars() != vars)
      throw std::invalid_argument(
          "system of n polynomials must use n+1 variables");
}

void PolySystem::check_shape(const PolySystem& other) const {
  if (!(degrees_ == other.degrees_))
    throw std::invalid_argument("systems have different degree vectors");
}

PolySystem& PolySystem::operator+=(const PolySystem& other) {
  check_shape(other);
  for (std::size_t i = 0; i < polys_.size(); ++i) polys_[i] += other.polys_[i];
  return *this;
}

PolySystem& PolySystem::operator-=(const PolySystem& other) {
  check_shape(other);
  for (std::size_t i = 0; i < polys_.size(); ++i) polys_[i] -= other.polys_[i];
  return *this;
}

PolySystem& PolySystem::operator*=(Complex scale) {
  for (auto& p : polys_) p *= scale;
  return *this;
}

PolySystem zero_system(const DegreeVector& degrees) {
  std::vector<HomoPoly> polys;
  const int vars = static_cast<int>(degrees.size()) + 1;
  for (int d : degrees) polys.emplace_back(d, vars);
  return PolySystem(std::move(polys));
}

void evaluate_with_jacobian(const PolySystem& h, const CVector& z,
                            CVector& value, CMatrix& jac) {
  const int vars = h.num_vars();
  if (z.size() != vars)
    throw std::invalid_argument("point dimension does not match system");
  const int n = static_cast<int>(h.size());
  const int max_degree = h.degrees().max();
  const auto stride = static_cast<std::size_t>(max_degree + 1);
  thread_local std::vector<Complex> powers;
  fill_powers(z, max_degree, powers);

  value.setZero(n);
  jac.setZero(n, vars);
  for (int i = 0; i < n; ++i) {
    const HomoPoly& p = h[i];
    const MonomialBasis& basis = p.basis();
    auto coeffs = p.coeffs();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const Complex a = coeffs[k];
      if (a == Complex(0.0)) continue;
      auto alpha = basis.exponents(k);
      Complex mono = a;
      for (int j = 0; j < vars; ++j) mono *= powers[j * stride + alpha[j]];
      value[i] += mono;
      for (int j = 0; j < vars; ++j) {
        if (alpha[j] == 0) continue;
        Complex d = a * static_cast<double>(alpha[j]);
        for (int m = 0; m < vars; ++m)
          d *= powers[m * stride + (m == j ? alpha[m] - 1 : alpha[m])];
        jac(i, j) += d;
      }
    }
  }
}

CVector evaluate(const PolySystem& h, const CVector& z) {
  CVector value;
  CMatrix jac;
  evaluate_with_jacobian(h, z, value, jac);
  return value;
}

CMatrix jacobian(const PolySystem& h, const CVector& z) {
  CVector value;
  CMatrix jac;
  evaluate_with_jacobian(h, z, value, jac);
  return jac;
}

Complex bw_inner(const HomoPoly& v, const HomoPoly& w) {
  if (v.degree() != w.degree() || v.num_vars() != w.num_vars())
    throw std::invalid_argument("BW product needs equal degree and variables");
  const MonomialBasis& basis = v.basis();
  auto a = v.coeffs();
  auto b = w.coeffs();
  Complex sum(0.0);
  for (std::size_t k = 0; k < a.size(); ++k)
    sum += a[k] * std::conj(b[k]) / basis.multinomial(k);
  return sum;
}

Complex bw_inner(const PolySystem& h, const PolySystem& h2) {
  if (!(h.degrees() == h2.degrees()))
    throw std::invalid_argument("BW product needs equal degree vectors");
  Complex sum(0.0);
  for (std::size_t i = 0; i < h.size(); ++i) sum += bw_inner(h[i], h2[i]);
  return sum;
}

double bw_norm(const HomoPoly& v) {
  return std::sqrt(std::max(0.0, bw_inner(v, v).real()));
}

double bw_norm(const PolySystem& h) {
  return std::sqrt(std::max(0.0, bw_inner(h, h).real()));
}

PolySystem normalize_to_sphere(const PolySystem& h) {
  const double norm = bw_norm(h);
  if (!(norm > 0.0)) throw std::domain_error("cannot normalize zero system");
  return h * Complex(1.0 / norm);
}

HomoPoly kernel_poly(const CVector& z, int degree) {
  if (std::abs(z.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("kernel_poly needs a unit vector");
  HomoPoly out(degree, static_cast<int>(z.size()));
  const MonomialBasis& basis = out.basis();
  std::vector<Complex> coeffs(basis.size());
  const CVector zc = z.conjugate();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    auto alpha = basis.exponents(k);
    Complex c = basis.multinomial(k);
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (int e = 0; e < alpha[j]; ++e) c *= zc[static_cast<Eigen::Index>(j)];
    coeffs[k] = c;
  }
  out.set_coeffs(std::move(coeffs));
  return out;
}

PolySystem compose_diagonal(const PolySystem& h, const CVector& phases) {
  if (phases.size() != h.num_vars())
    throw std::invalid_argument("phase vector dimension mismatch");
  std::vector<HomoPoly> polys;
  for (const auto& p : h.polys()) {
    const MonomialBasis& basis = p.basis();
    std::vector<Complex> coeffs(p.coeffs().begin(), p.coeffs().end());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      auto alpha = basis.exponents(k);
      for (std::size_t j = 0; j < alpha.size(); ++j)
        for (int e = 0; e < alpha[j]; ++e)
          coeffs[k] *= phases[static_cast<Eigen::Index>(j)];
    }
    HomoPoly q(p.degree(), p.num_vars());
    q.set_coeffs(std::move(coeffs));
    polys.push_back(std::move(q));
  }
  return PolySystem(std::move(polys));
}

}  // namespace certhom
