#include "quatperiod/rational.hpp"

#include <cmath>
#include <limits>

namespace quatperiod {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ArgumentError("empty rational literal");
  Rational r;
  if (r.set_str(text, 10) != 0) throw ArgumentError("malformed rational literal '" + text + "'");
  if (r.get_den() == 0) throw ArgumentError("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }
std::string to_string(const Integer& z) { return z.get_str(10); }

Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw ArgumentError("zero to a negative power");
    return Rational(1) / pow(base, -exponent);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return make_rational(num, den);
}

Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

long to_long(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in long: " + z.get_str());
  return z.get_si();
}

long to_long_checked(const Rational& r) {
  if (!is_integral(r)) throw ArgumentError("expected an integer, got " + to_string(r));
  return to_long(r.get_num());
}

Integer lcm_of_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

Integer gcd_of_numerators(const std::vector<Rational>& values) {
  Integer g = 0;
  for (const auto& v : values) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
  return g;
}

Integer isqrt(const Integer& n) {
  if (n < 0) throw ArgumentError("isqrt of a negative number");
  Integer s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  return s;
}

bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

std::vector<long> prime_factors(long n) {
  if (n <= 0) throw ArgumentError("prime_factors expects a positive integer");
  std::vector<long> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

bool is_squarefree(long n) {
  if (n <= 0) return false;
  for (long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound + 1), false);
  for (long p = 2; p <= bound; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    out.push_back(p);
    for (long m = p * p; m <= bound; m += p) composite[static_cast<std::size_t>(m)] = true;
  }
  return out;
}

void QuadSurd::check(const QuadSurd& o) const {
  if (d_ != o.d_ && b_ != 0 && o.b_ != 0)
    throw ArgumentError("QuadSurd operands live in different quadratic fields");
}

QuadSurd QuadSurd::operator+(const QuadSurd& o) const {
  check(o);
  return {a_ + o.a_, b_ + o.b_, b_ != 0 ? d_ : o.d_};
}

QuadSurd QuadSurd::operator-(const QuadSurd& o) const {
  check(o);
  return {a_ - o.a_, b_ - o.b_, b_ != 0 ? d_ : o.d_};
}

QuadSurd QuadSurd::operator*(const QuadSurd& o) const {
  check(o);
  const long d = b_ != 0 ? d_ : o.d_;
  return {a_ * o.a_ + Rational(d) * b_ * o.b_, a_ * o.b_ + b_ * o.a_, d};
}

QuadSurd QuadSurd::operator/(const QuadSurd& o) const {
  check(o);
  const long d = o.b_ != 0 ? o.d_ : d_;
  QuadSurd den = o;
  den.d_ = d;
  const Rational n = den.norm();
  if (n == 0) throw ArgumentError("division by zero in QuadSurd");
  QuadSurd num = *this;
  num.d_ = d;
  QuadSurd prod = num * den.conjugate();
  return {prod.a_ / n, prod.b_ / n, d};
}

double QuadSurd::to_double() const {
  return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_));
}

std::string QuadSurd::str() const {
  if (b_ == 0) return to_string(a_);
  return to_string(a_) + (b_ > 0 ? "+" : "-") + to_string(b_ > 0 ? b_ : Rational(-b_)) + "*sqrt(" +
         std::to_string(d_) + ")";
}

}  // namespace quatperiod
