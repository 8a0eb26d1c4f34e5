#pragma once

#include <vector>

#include "quatperiod/poly.hpp"
#include "quatperiod/quatalg.hpp"

namespace quatperiod {

/// Trace-zero quaternions use variables (x1, x2, x3) for the i, j, k coordinates;
/// the full space uses (x0, x1, x2, x3).
enum class Domain { TraceZero, Full };

/// Homogeneous harmonic polynomials of one degree with the invariant inner product
/// normalized so that the Gegenbauer kernel reproduces.
struct HarmonicSpace {
  Domain domain;
  int degree = 0;
  int nvars = 0;
  /// Diagonal of the norm form in the domain coordinates.
  QVector form;
  std::vector<Poly> basis;
  /// Scalar making c * P(A^{-1} d) R reproducing.
  Rational normalization;
  QMatrix gram;
  QMatrix gram_inverse;
  /// Dual basis: <<dual[m], basis[n]>> = delta_mn.
  std::vector<Poly> dual;

  std::size_t dim() const { return basis.size(); }
  Rational fischer(const Poly& p, const Poly& r) const;
  Rational inner(const Poly& p, const Poly& r) const { return normalization * fischer(p, r); }
  QVector coordinates(const Poly& p) const;
  Poly from_coordinates(const QVector& c) const;
};

/// Memoized; thread-safe.
const HarmonicSpace& harmonic_space(const QuaternionAlgebra& alg, Domain domain, int degree);

/// 2^a sum_j (-1)^j (a-j)! / (j! (a-2j)! 4^j) t^(a-2j), coefficients low to high.
UPoly gegenbauer_1d(int alpha);

/// Kernel on the full space: 2^a (n n')^(a/2) G1(tr(x x'bar) / (2 sqrt(n n'))).
Rational gegenbauer_kernel(const QuaternionAlgebra& alg, int alpha, const Quaternion& x, const Quaternion& xp);
/// Zonal kernel on the trace-zero space: (n n')^(nu/2) P_nu(B(x, x') / sqrt(n n')) with Legendre P.
Rational trace_zero_kernel(const QuaternionAlgebra& alg, int nu, const Quaternion& x, const Quaternion& xp);
/// The kernel as a polynomial in its first argument.
Poly kernel_poly(const QuaternionAlgebra& alg, Domain domain, int degree, const Quaternion& xp);

Poly norm_poly(const QuaternionAlgebra& alg, Domain domain);
Poly laplacian(const QuaternionAlgebra& alg, Domain domain, const Poly& p);
QVector domain_point(Domain domain, const Quaternion& x);

/// (tau(y) P)(x) = P(y^{-1} x y) on the trace-zero space.
Poly tau_action(const QuaternionAlgebra& alg, const Quaternion& y, const Poly& p);
/// Matrix of tau(y) on the basis of a trace-zero space (column c = image of basis[c]).
QMatrix tau_matrix(const QuaternionAlgebra& alg, const HarmonicSpace& space, const Quaternion& y);
/// x -> P(g x h) on the full space.
Poly sandwich_substitute(const QuaternionAlgebra& alg, const Quaternion& g, const Quaternion& h, const Poly& p);

/// F_{P,R}(x) = <<P(u), R(xbar u x)>>_u, identifying U_b^(0) (x) U_b^(0) with U_{2b}.
Poly identify(const QuaternionAlgebra& alg, const Poly& p, const Poly& r);

/// Invariant trilinear form on U_nu^(0) (x) U_a^(0) (x) U_b^(0).
class TrilinearForm {
 public:
  TrilinearForm(const QuaternionAlgebra& alg, int nu, int a, int b);
  bool is_zero() const { return zero_; }
  int nu() const { return nu_; }
  int a() const { return a_; }
  int b() const { return b_; }
  /// Value on basis elements of the three spaces.
  const Rational& at(std::size_t s, std::size_t t, std::size_t u) const;
  Rational operator()(const Poly& p, const Poly& q, const Poly& r) const;
  Rational on_coordinates(const QVector& p, const QVector& q, const QVector& r) const;

 private:
  int nu_, a_, b_;
  const HarmonicSpace* sn_ = nullptr;
  const HarmonicSpace* sa_ = nullptr;
  const HarmonicSpace* sb_ = nullptr;
  bool zero_ = true;
  std::size_t dn_ = 0, da_ = 0, db_ = 0;
  std::vector<Rational> tensor_;
};

/// Memoized trilinear form.
const TrilinearForm& trilinear_form(const QuaternionAlgebra& alg, int nu, int a, int b);

/// Balanced: nu, a, b are the side lengths of a (possibly degenerate) triangle.
bool balanced(int nu, int a, int b);

/// Coefficient kernel of c_{a1 a2}(x1, x2; Q) for Q = P1 (x) P2 on U_nu1^(0) (x) U_nu2^(0):
/// c(x1, x2) = sum_{m,m'} H_m(x1) K_{m m'} H'_m'(x2) with H, H' bases of U_{a1'}, U_{a2'}.
struct CoefficientKernel {
  int nu1 = 0, nu2 = 0, alpha1 = 0, alpha2 = 0;
  int deg1 = 0, deg2 = 0;  // a1' and a2'
  bool zero = true;
  /// kernels[s * dim(U_nu2) + t] is the dim(U_a1') x dim(U_a2') matrix for basis pair (s, t).
  std::vector<QMatrix> kernels;

  QMatrix kernel_for(const QMatrix& q) const;
};

const CoefficientKernel& coefficient_kernel(const QuaternionAlgebra& alg, int nu1, int nu2, int alpha1, int alpha2);

/// c_{a1 a2}(x1, x2; Q) as a polynomial in the eight coordinates of (x1, x2);
/// q is the coefficient matrix of Q in the bases of U_nu1^(0) and U_nu2^(0).
Poly c_coeff(const QuaternionAlgebra& alg, const QMatrix& q, int nu1, int nu2, int alpha1, int alpha2);

}  // namespace quatperiod
