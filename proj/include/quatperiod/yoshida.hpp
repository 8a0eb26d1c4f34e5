#pragma once

#include <array>
#include <compare>
#include <map>
#include <utility>

#include "quatperiod/brandt.hpp"

namespace quatperiod {

/// [[n1, m2/2], [m2/2, n2]].
struct HalfIntMatrix {
  long n1 = 0, m2 = 0, n2 = 0;

  long trace() const { return n1 + n2; }
  /// 4 n1 n2 - m2^2.
  long discriminant() const { return 4 * n1 * n2 - m2 * m2; }
  auto operator<=>(const HalfIntMatrix&) const = default;
};

/// Fourier coefficients a(T), each a polynomial in (X1, X2) homogeneous of degree 2 nu2,
/// for all T with trace(T) <= prec.
struct FourierTable {
  int nu1 = 0, nu2 = 0;
  long prec = 0;
  std::map<HalfIntMatrix, Poly> coeffs;

  /// Zero polynomial for indices that do not occur.
  Poly at(const HalfIntMatrix& t) const;
};

/// Degree-2 lift of (phi1, phi2): the ij-term pairs the values phi1(y_i), phi2(y_j) through the
/// coefficient polynomials on pairs of elements of I_i I_j^{-1}; off-diagonal index tr(x1bar x2).
FourierTable yoshida_lift(const QuatForm& phi1, const QuatForm& phi2, long prec);

/// (n1, n2) -> sum over m2 of the X1^a1 X2^a2 coefficient of a(n1, m2, n2).
std::map<std::pair<long, long>, Rational> diagonal_restriction(const FourierTable& table, int alpha1, int alpha2);

/// Checks a(U^t T U)(X) = det(U)^(nu1 - nu2 + 2) a(T)(X U^t) for an integral U with det +-1.
bool unimodular_check(const FourierTable& table, const std::array<long, 4>& u, const HalfIntMatrix& t);

}  // namespace quatperiod
