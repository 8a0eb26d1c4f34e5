#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "quatperiod/harmonics.hpp"
#include "quatperiod/orders.hpp"

namespace quatperiod {

/// Weight-nu forms on a class set, stored as the concatenation of the coordinates of the
/// values phi(y_i) in the basis of U_nu^(0): entry i * dim + s.
struct QuatForm {
  std::shared_ptr<const ClassSet> classes;
  int nu = 0;
  QVector values;

  std::size_t block() const { return static_cast<std::size_t>(2 * nu + 1); }
  QVector value(std::size_t i) const;
  Poly value_poly(std::size_t i) const;
};

/// Rows: a basis of the functions whose value at y_i is fixed by the units of the left order of I_i.
QMatrix form_space_basis(const ClassSet& cs, int nu);

/// Hecke operator on column vectors of concatenated values:
/// (T(p) phi)(i) = p^nu sum_j (1/e_j) sum_{x in I_i I_j^{-1}, q(x) = p} tau(x) phi(j).
/// The p^nu factor makes the eigenvalues the Fourier coefficients of weight 2 nu + 2 newforms.
QMatrix brandt_matrix(const ClassSet& cs, long p, int nu);

/// (w_p phi)(i) = tau(gamma) phi(k) where I_i P = gamma I_k for the two-sided ideal P over p.
QMatrix atkin_lehner(const ClassSet& cs, long p, int nu);

/// Gram matrix of sum_i <<phi(i), psi(i)>> / e_i on concatenated coordinates.
QMatrix inner_product_matrix(const ClassSet& cs, int nu);
Rational inner_product(const QuatForm& phi, const QuatForm& psi);

/// Rows: a basis of the forms orthogonal to everything pulled back from larger orders
/// (for maximal orders at nu = 0: orthogonal to the constants).
QMatrix essential_basis(const ClassSet& cs, int nu);

struct Eigenform {
  /// Values over Q(sqrt(field)); field = 1 for rational forms.
  long field = 1;
  std::vector<QuadSurd> values;
  /// Minimal polynomial (low to high) of the eigenvalue of the splitting operator.
  UPoly minimal_polynomial;
  std::map<long, QuadSurd> hecke;
  std::map<long, int> atkin_lehner;
  bool essential = true;
  /// False for eigen-systems whose field has degree > 2 (reported but not split).
  bool supported = true;

  bool rational() const { return field == 1; }
  /// Rational values (throws for quadratic forms).
  QVector rational_values() const;
};

/// Simultaneous eigenforms of the Hecke operators at good primes <= pmax on the essential part,
/// followed by the non-essential complement (essential = false). Rational eigenvectors are
/// primitive integral with first nonzero coordinate positive.
std::vector<Eigenform> eigenforms(const ClassSet& cs, int nu, long pmax = 13);

/// q-expansion coefficients a_0 .. a_prec of the theta lift of phi.
std::vector<Rational> eichler_theta(const QuatForm& phi, long prec);

/// Monic factors over Q of degree 1 and 2 (low to high) of a monic integral polynomial,
/// with the product of everything else in `rest`.
struct SmallFactorization {
  std::vector<UPoly> linear;
  std::vector<UPoly> quadratic;
  UPoly rest;
};
SmallFactorization factor_small(const UPoly& p);

}  // namespace quatperiod
