#pragma once

#include <array>
#include <map>
#include <string>

#include "quatperiod/yoshida.hpp"

namespace quatperiod {

/// Truncated nearly holomorphic expansion sum_T c_T(V, X) e(tr TZ), where each c_T is a polynomial in
/// the entries (v1, v12, v2) of V = -(4 pi Im Z)^{-1} and in (X1, X2): five variables in that order.
struct FormalExpansion {
  long prec = 0;
  std::map<HalfIntMatrix, Poly> terms;

  static constexpr int kVars = 5;
  /// Largest total degree in the V entries.
  int nearly_holomorphic_degree() const;
  bool operator==(const FormalExpansion& o) const { return prec == o.prec && terms == o.terms; }
};

FormalExpansion operator+(const FormalExpansion& a, const FormalExpansion& b);
FormalExpansion scaled(const FormalExpansion& f, const Rational& c);

/// N F = V[X] F.
FormalExpansion maass_n(const FormalExpansion& f);
/// D F = (1/(2 pi i) dZ)[X] F.
FormalExpansion maass_d(const FormalExpansion& f);
/// delta_w F = w N F + D F for w = k + l.
FormalExpansion maass_delta(long w, const FormalExpansion& f);
/// sum_i Gamma(w + r) / Gamma(w + r - i) binom(r, i) N^i D^(r - i) F.
FormalExpansion delta_iterate(long w, int r, const FormalExpansion& f);

/// p(u1, u12, u2) with u1 = X1^2 d/dz1, u12 = X1 X2 d/dz12, u2 = X2^2 d/dz2, followed by z12 = 0 and
/// extraction of the X1^(a+r) X2^(b+r) coefficient. Coefficients refer to plain derivatives.
struct DiffOperator {
  int k = 2, a = 0, b = 0, r = 0;
  std::map<std::array<int, 3>, Rational> coeffs;

  /// Applies the operator to a polynomial in (z1, z12, z2, X1, X2); the result is in (z1, z2).
  Poly apply(const Poly& f) const;
  /// Value on z12^r X1^a X2^b.
  Rational z12_test() const;
};

/// Monomials u1^i u12^j u2^m of degree r that can contribute to the X1^(a+r) X2^(b+r) coefficient.
std::vector<Monomial> live_monomials(int a, int b, int r);

/// Basis (rows, indexed like live_monomials) of the p satisfying the lowering-operator
/// equivariance for both embedded SL2 factors.
QMatrix equivariant_operators(int k, int a, int b, int r);

/// The equivariant operator normalized by z12_test() = r!. Memoized.
const DiffOperator& projection_poly(int k, int a, int b, int r);

/// Q(T) = p(n1 X1^2, m2 X1 X2, n2 X2^2): the operator on e(tr TZ) with 1/(2 pi i)-normalized derivatives.
Poly q_poly(const DiffOperator& op, const HalfIntMatrix& t);

/// (n1, n2) -> sum over m2 of the X1^(a+r) X2^(b+r) coefficient of Q(T) a(T).
std::map<std::pair<long, long>, Rational> apply_to_table(const DiffOperator& op, const FourierTable& table,
                                                         int alpha1, int alpha2);

}  // namespace quatperiod
