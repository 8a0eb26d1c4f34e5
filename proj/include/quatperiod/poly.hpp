#pragma once

#include <map>
#include <string>
#include <vector>

#include "quatperiod/linalg.hpp"

namespace quatperiod {

using Monomial = std::vector<int>;

/// Sparse multivariate polynomial with rational coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}
  static Poly constant(int nvars, const Rational& c);
  static Poly variable(int nvars, int index);
  static Poly monomial(const Monomial& m, const Rational& c = 1);
  /// Linear form sum_i coeffs[i] * x_i.
  static Poly linear(const QVector& coeffs);

  int nvars() const { return nvars_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  bool is_homogeneous(int deg) const;

  Rational coefficient(const Monomial& m) const;
  void add_term(const Monomial& m, const Rational& c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Rational& c) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly pow(int e) const;
  bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Rational evaluate(const QVector& point) const;
  Poly derivative(int var) const;
  /// P(M x): variable i replaced by sum_j M(i,j) x_j, result in M.cols() variables.
  Poly linear_substitute(const QMatrix& m) const;
  /// Substitutes polynomials for the variables.
  Poly compose(const std::vector<Poly>& images) const;
  /// Same polynomial in n variables (trailing variables added, or unused ones dropped).
  Poly with_nvars(int n) const;

  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  int nvars_ = 0;
  std::map<Monomial, Rational> terms_;
};

/// p viewed in `total` variables, its own variables placed at positions offset, offset+1, ...
Poly embed(const Poly& p, int offset, int total);

/// All exponent vectors in n variables of total degree d, in lexicographically descending order.
std::vector<Monomial> monomials_of_degree(int nvars, int degree);

/// Coordinates of the homogeneous polynomial p in the monomial basis of the given degree.
QVector coordinates(const Poly& p, const std::vector<Monomial>& basis);
Poly from_coordinates(const QVector& c, const std::vector<Monomial>& basis);

/// Univariate polynomial helpers (coefficients low to high).
using UPoly = QVector;
UPoly upoly_trim(UPoly p);
UPoly upoly_mul(const UPoly& a, const UPoly& b);
Rational upoly_eval(const UPoly& p, const Rational& x);
/// Rational roots with multiplicity; remaining irreducible-over-Q part (monic) is returned in `rest`.
std::vector<Rational> rational_roots(const UPoly& p, UPoly* rest = nullptr);

}  // namespace quatperiod
