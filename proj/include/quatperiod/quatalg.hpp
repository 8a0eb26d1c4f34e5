#pragma once

#include <array>
#include <string>
#include <vector>

#include "quatperiod/linalg.hpp"

namespace quatperiod {

/// Place of Q: a prime, or kInfinity for the real place.
constexpr long kInfinity = 0;

/// +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over Q_p (p = kInfinity for R).
int hilbert_symbol(const Rational& a, const Rational& b, long p);

/// Coordinates (w, x, y, z) with respect to 1, i, j, k.
using Quaternion = std::array<Rational, 4>;

Quaternion quat(const Rational& w, const Rational& x = 0, const Rational& y = 0, const Rational& z = 0);
Quaternion operator+(const Quaternion& p, const Quaternion& q);
Quaternion operator-(const Quaternion& p, const Quaternion& q);
Quaternion operator-(const Quaternion& p);
Quaternion operator*(const Rational& s, const Quaternion& q);
bool is_zero(const Quaternion& q);
QVector to_vector(const Quaternion& q);
Quaternion from_vector(const QVector& v);
std::string to_string(const Quaternion& q);

/// Q-algebra with i^2 = a, j^2 = b, k = ij = -ji.
class QuaternionAlgebra {
 public:
  QuaternionAlgebra(Rational a, Rational b);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  /// Finite ramified primes, sorted.
  const std::vector<long>& ramified_finite() const { return ramified_; }
  bool definite() const { return definite_; }
  /// Product of the finite ramified primes.
  long discriminant() const;

  Quaternion mul(const Quaternion& p, const Quaternion& q) const;
  Quaternion conj(const Quaternion& q) const;
  Rational trace(const Quaternion& q) const { return 2 * q[0]; }
  Rational norm(const Quaternion& q) const;
  Quaternion inverse(const Quaternion& q) const;
  /// x1 * y * x2^{-1}.
  Quaternion similitude_action(const Quaternion& x1, const Quaternion& x2, const Quaternion& y) const;

  /// Gram of the bilinear form tr(x conj(y)) in the basis 1, i, j, k (so q = norm).
  QMatrix norm_form() const;
  /// Matrix of left (resp. right) multiplication by q acting on row coordinate vectors: v -> (q v) or (v q).
  QMatrix left_mult_matrix(const Quaternion& q) const;
  QMatrix right_mult_matrix(const Quaternion& q) const;

  bool operator==(const QuaternionAlgebra& o) const { return a_ == o.a_ && b_ == o.b_; }

 private:
  Rational a_, b_;
  std::vector<long> ramified_;
  bool definite_;
};

/// Definite algebra ramified exactly at infinity and the primes dividing n1.
QuaternionAlgebra algebra_for_discriminant(long n1);

}  // namespace quatperiod
