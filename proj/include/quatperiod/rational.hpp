#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace quatperiod {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when an input violates a documented precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a structural invariant of a mathematical object fails
/// (rank deficiency, indefinite form, inconsistent class data).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p", "p/q" or "-p/q".
Rational parse_rational(const std::string& text);

/// Canonical "p/q" text ("p" when the denominator is 1).
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

Rational pow(const Rational& base, long exponent);
Integer pow(const Integer& base, unsigned long exponent);

long to_long(const Integer& z);
long to_long_checked(const Rational& r);

Integer lcm_of_denominators(const std::vector<Rational>& values);
Integer gcd_of_numerators(const std::vector<Rational>& values);

/// Largest integer s with s*s <= n (n >= 0).
Integer isqrt(const Integer& n);
bool is_square(const Integer& n);

std::vector<long> prime_factors(long n);
bool is_prime(long n);
bool is_squarefree(long n);
std::vector<long> primes_up_to(long bound);

/// Element a + b*sqrt(d) of Q(sqrt d) with a fixed squarefree d.
class QuadSurd {
 public:
  QuadSurd() = default;
  QuadSurd(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {}
  static QuadSurd rational(const Rational& a, long d) { return {a, 0, d}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long d() const { return d_; }

  QuadSurd operator+(const QuadSurd& o) const;
  QuadSurd operator-(const QuadSurd& o) const;
  QuadSurd operator*(const QuadSurd& o) const;
  QuadSurd operator/(const QuadSurd& o) const;
  QuadSurd operator-() const { return {-a_, -b_, d_}; }
  QuadSurd conjugate() const { return {a_, -b_, d_}; }
  Rational norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool operator==(const QuadSurd& o) const { return a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const QuadSurd& o) const { return !(*this == o); }
  double to_double() const;
  std::string str() const;

 private:
  void check(const QuadSurd& o) const;
  Rational a_ = 0;
  Rational b_ = 0;
  long d_ = 1;
};

}  // namespace quatperiod
