#include "quatperiod/quatalg.hpp"

#include <algorithm>
#include <set>

namespace quatperiod {

namespace {

// Splits a nonzero integer as p^v * u with p not dividing u.
int valuation_split(Integer& n, long p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int legendre(const Integer& u, long p) {
  Integer pp(p);
  return mpz_legendre(u.get_mpz_t(), pp.get_mpz_t());
}

// Residue of u modulo 8, in 0..7 (u odd).
long mod8(const Integer& u) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), u.get_mpz_t(), 8);
  return r.get_si();
}

// Integer representative of the square class of r (multiply by den^2).
Integer square_class_integer(const Rational& r) {
  return r.get_num() * r.get_den();
}

}  // namespace

int hilbert_symbol(const Rational& a, const Rational& b, long p) {
  if (a == 0 || b == 0) throw ArgumentError("hilbert_symbol needs nonzero arguments");
  if (p == kInfinity) return (a < 0 && b < 0) ? -1 : 1;
  if (p < 0 || !is_prime(p)) throw ArgumentError("hilbert_symbol place must be a prime or infinity");
  Integer u = square_class_integer(a);
  Integer v = square_class_integer(b);
  const int alpha = valuation_split(u, p);
  const int beta = valuation_split(v, p);
  if (p != 2) {
    int sign = 1;
    if ((alpha * beta) % 2 == 1 && ((p - 1) / 2) % 2 == 1) sign = -sign;
    if (beta % 2 == 1) sign *= legendre(u, p);
    if (alpha % 2 == 1) sign *= legendre(v, p);
    return sign;
  }
  const long u8 = mod8(u), v8 = mod8(v);
  const int eps_u = ((u8 - 1) / 2) % 2;
  const int eps_v = ((v8 - 1) / 2) % 2;
  const int omega_u = ((u8 * u8 - 1) / 8) % 2;
  const int omega_v = ((v8 * v8 - 1) / 8) % 2;
  const int e = eps_u * eps_v + alpha * omega_v + beta * omega_u;
  return e % 2 == 0 ? 1 : -1;
}

Quaternion quat(const Rational& w, const Rational& x, const Rational& y, const Rational& z) { return {w, x, y, z}; }

Quaternion operator+(const Quaternion& p, const Quaternion& q) {
  return {p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]};
}
Quaternion operator-(const Quaternion& p, const Quaternion& q) {
  return {p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3]};
}
Quaternion operator-(const Quaternion& p) { return {-p[0], -p[1], -p[2], -p[3]}; }
Quaternion operator*(const Rational& s, const Quaternion& q) { return {s * q[0], s * q[1], s * q[2], s * q[3]}; }
bool is_zero(const Quaternion& q) { return q[0] == 0 && q[1] == 0 && q[2] == 0 && q[3] == 0; }
QVector to_vector(const Quaternion& q) { return {q[0], q[1], q[2], q[3]}; }
Quaternion from_vector(const QVector& v) {
  if (v.size() != 4) throw ArgumentError("quaternion needs four coordinates");
  return {v[0], v[1], v[2], v[3]};
}
std::string to_string(const Quaternion& q) {
  return "[" + to_string(q[0]) + ", " + to_string(q[1]) + ", " + to_string(q[2]) + ", " + to_string(q[3]) + "]";
}

QuaternionAlgebra::QuaternionAlgebra(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_ == 0 || b_ == 0) throw ArgumentError("structure constants must be nonzero");
  std::set<long> candidates{2};
  for (const Rational* r : {&a_, &b_}) {
    for (const Integer* z : {&r->get_num(), &r->get_den()}) {
      Integer n = abs(*z);
      if (n > 1) {
        if (!n.fits_slong_p()) throw ArgumentError("structure constants too large to factor");
        for (long p : prime_factors(n.get_si())) candidates.insert(p);
      }
    }
  }
  for (long p : candidates)
    if (hilbert_symbol(a_, b_, p) == -1) ramified_.push_back(p);
  definite_ = hilbert_symbol(a_, b_, kInfinity) == -1;
  if ((ramified_.size() + (definite_ ? 1 : 0)) % 2 != 0)
    throw StructuralError("Hilbert reciprocity violated; symbol computation is inconsistent");
}

long QuaternionAlgebra::discriminant() const {
  long d = 1;
  for (long p : ramified_) d *= p;
  return d;
}

Quaternion QuaternionAlgebra::mul(const Quaternion& p, const Quaternion& q) const {
  const Rational ab = a_ * b_;
  return {p[0] * q[0] + a_ * p[1] * q[1] + b_ * p[2] * q[2] - ab * p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] - b_ * p[2] * q[3] + b_ * p[3] * q[2],
          p[0] * q[2] + p[2] * q[0] + a_ * p[1] * q[3] - a_ * p[3] * q[1],
          p[0] * q[3] + p[3] * q[0] + p[1] * q[2] - p[2] * q[1]};
}

Quaternion QuaternionAlgebra::conj(const Quaternion& q) const { return {q[0], -q[1], -q[2], -q[3]}; }

Rational QuaternionAlgebra::norm(const Quaternion& q) const {
  return q[0] * q[0] - a_ * q[1] * q[1] - b_ * q[2] * q[2] + a_ * b_ * q[3] * q[3];
}

Quaternion QuaternionAlgebra::inverse(const Quaternion& q) const {
  const Rational n = norm(q);
  if (n == 0) throw ArgumentError("quaternion is not invertible");
  return (Rational(1) / n) * conj(q);
}

Quaternion QuaternionAlgebra::similitude_action(const Quaternion& x1, const Quaternion& x2,
                                                const Quaternion& y) const {
  if (is_zero(x2)) throw ArgumentError("similitude needs an invertible right factor");
  return mul(mul(x1, y), inverse(x2));
}

QMatrix QuaternionAlgebra::norm_form() const {
  QMatrix g(4, 4);
  g(0, 0) = 2;
  g(1, 1) = -2 * a_;
  g(2, 2) = -2 * b_;
  g(3, 3) = 2 * a_ * b_;
  return g;
}

QMatrix QuaternionAlgebra::left_mult_matrix(const Quaternion& q) const {
  // Row r is the image of basis element e_r, so v * M = coordinates of q v.
  QMatrix m(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    Quaternion e{0, 0, 0, 0};
    e[r] = 1;
    Quaternion img = mul(q, e);
    for (std::size_t c = 0; c < 4; ++c) m(r, c) = img[c];
  }
  return m;
}

QMatrix QuaternionAlgebra::right_mult_matrix(const Quaternion& q) const {
  QMatrix m(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    Quaternion e{0, 0, 0, 0};
    e[r] = 1;
    Quaternion img = mul(e, q);
    for (std::size_t c = 0; c < 4; ++c) m(r, c) = img[c];
  }
  return m;
}

QuaternionAlgebra algebra_for_discriminant(long n1) {
  if (n1 < 2 || !is_squarefree(n1)) throw ArgumentError("discriminant must be a squarefree integer > 1");
  const std::vector<long> primes = prime_factors(n1);
  if (primes.size() % 2 == 0)
    throw ArgumentError("a definite algebra needs an odd number of finite ramified primes");
  if (n1 == 2) return QuaternionAlgebra(-1, -1);
  if (primes.size() == 1 && n1 % 4 == 3) return QuaternionAlgebra(-1, -n1);
  for (long s = 2;; ++s) {
    for (long x = 1; x < s; ++x) {
      const long y = s - x;
      QuaternionAlgebra alg(-x, -y);
      if (alg.definite() && alg.ramified_finite() == primes) return alg;
    }
  }
}

}  // namespace quatperiod
