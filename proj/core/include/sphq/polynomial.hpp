#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sphq/sphere_point.hpp"

namespace sphq {

using cplx = std::complex<double>;

/// x^a y^b z^c.
struct Monomial {
  int a = 0;
  int b = 0;
  int c = 0;

  int degree() const { return a + b + c; }
  auto operator<=>(const Monomial&) const = default;
};

/// Coefficients with magnitude below this are dropped on construction.
inline constexpr double kPruneThreshold = 1e-15;
inline constexpr int kDefaultMaxDegree = 64;

/// Sparse polynomial in the ambient coordinates (x, y, z), viewed as a function on S^2.
///
/// Values are immutable after construction. The canonical representative on the sphere
/// has every z exponent <= 1 (z^2 is rewritten as 1 - x^2 - y^2); `canonical()` reports
/// whether the stored terms already have that shape and `reduced()` produces it.
class SpherePolynomial {
 public:
  using TermMap = std::map<Monomial, cplx>;

  SpherePolynomial() = default;
  explicit SpherePolynomial(TermMap terms, int max_degree = kDefaultMaxDegree);

  static SpherePolynomial constant(cplx c) { return SpherePolynomial(TermMap{{Monomial{}, c}}); }
  static SpherePolynomial monomial(int a, int b, int c, cplx coeff = 1.0) {
    return SpherePolynomial(TermMap{{Monomial{a, b, c}, coeff}});
  }
  static SpherePolynomial x() { return monomial(1, 0, 0); }
  static SpherePolynomial y() { return monomial(0, 1, 0); }
  static SpherePolynomial z() { return monomial(0, 0, 1); }

  /// Parses `coeff x^a y^b z^c` terms, e.g. "-0.5 z^2 - 0.5 x". Throws ConfigError.
  static SpherePolynomial parse(std::string_view text, int max_degree = kDefaultMaxDegree);
  /// Prints in the same format, with round-trip precision.
  std::string to_string() const;

  const TermMap& terms() const { return terms_; }
  int max_degree() const { return max_degree_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  bool canonical() const;
  bool is_real(double tol = kPruneThreshold) const;
  /// Coefficient of x^a y^b z^c, zero when absent.
  cplx coeff(int a, int b, int c) const;

  /// Canonical representative modulo x^2 + y^2 + z^2 = 1.
  SpherePolynomial reduced() const;

  cplx evaluate(const Vec3& p) const;
  cplx evaluate(const SpherePoint& p) const { return evaluate(p.xyz()); }
  /// Real part of the value; callers use it for real polynomials.
  double value(const SpherePoint& p) const { return evaluate(p).real(); }

  /// Ambient partial derivative along axis 0 (x), 1 (y) or 2 (z).
  SpherePolynomial derivative(int axis) const;
  /// Ambient gradient evaluated at p (real part).
  Vec3 gradient(const Vec3& p) const;
  /// Ambient Hessian evaluated at p (real part), row-major.
  std::array<double, 9> hessian(const Vec3& p) const;

  SpherePolynomial conj() const;

  friend SpherePolynomial operator+(const SpherePolynomial& l, const SpherePolynomial& r);
  friend SpherePolynomial operator-(const SpherePolynomial& l, const SpherePolynomial& r);
  friend SpherePolynomial operator*(const SpherePolynomial& l, const SpherePolynomial& r);
  friend SpherePolynomial operator*(cplx s, const SpherePolynomial& p);
  friend SpherePolynomial operator*(const SpherePolynomial& p, cplx s) { return s * p; }
  SpherePolynomial operator-() const { return cplx(-1.0) * *this; }

  /// Largest coefficient difference; both sides are compared as stored.
  friend double max_coeff_diff(const SpherePolynomial& l, const SpherePolynomial& r);

 private:
  TermMap terms_;
  int max_degree_ = kDefaultMaxDegree;
};

/// Free-function spelling of SpherePolynomial::reduced().
inline SpherePolynomial reduce_mod_sphere(const SpherePolynomial& p) { return p.reduced(); }

inline cplx evaluate(const SpherePolynomial& p, const SpherePoint& pt) { return p.evaluate(pt); }

/// {f,g}(x) = sum eps_ab^c x_c d_a f d_b g, reduced to canonical form. f and g must be real.
SpherePolynomial poisson_bracket(const SpherePolynomial& f, const SpherePolynomial& g);

/// Canonical monomials of total degree <= d: every c <= 1. Sorted.
std::vector<Monomial> canonical_basis(int max_degree);

}  // namespace sphq
