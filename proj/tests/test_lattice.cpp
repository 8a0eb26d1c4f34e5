#include <random>
#include <set>

#include "doctest.h"
#include "quatperiod/lattice.hpp"
#include "quatperiod/orders.hpp"
#include "quatperiod/quatalg.hpp"

using namespace quatperiod;

namespace {

IntLattice standard_z4() { return IntLattice(QMatrix::identity(4), QMatrix::identity(4).scaled(2)); }

// D4: integer vectors with even coordinate sum.
IntLattice d4() {
  QMatrix b{{1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}, {0, 0, 1, 1}};
  return IntLattice(b, QMatrix::identity(4).scaled(2));
}

QMatrix random_unimodular(std::mt19937& rng) {
  QMatrix m = QMatrix::identity(4);
  std::uniform_int_distribution<int> idx(0, 3), coef(-2, 2);
  for (int step = 0; step < 12; ++step) {
    std::size_t i = static_cast<std::size_t>(idx(rng)), j = static_cast<std::size_t>(idx(rng));
    if (i == j) continue;
    const int c = coef(rng);
    QVector row = m.row(i);
    for (std::size_t k = 0; k < 4; ++k) row[k] += c * m(j, k);
    m.set_row(i, row);
  }
  return m;
}

// Every lattice vector with q <= bound by scanning the box |c_k| <= sqrt(2 bound (G^-1)_kk).
std::multiset<std::pair<std::vector<long>, Rational>> box_search(const IntLattice& l, const Rational& bound) {
  const QMatrix ginv = inverse(l.gram());
  std::vector<long> r(l.rank());
  for (std::size_t k = 0; k < l.rank(); ++k) r[k] = to_long(isqrt(floor_of(2 * bound * ginv(k, k)))) + 1;
  std::multiset<std::pair<std::vector<long>, Rational>> out;
  std::vector<long> c(l.rank());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == c.size()) {
      QVector v(c.begin(), c.end());
      Rational q = dot(v, l.gram().apply(v)) / 2;
      if (q != 0 && q <= bound) out.insert({c, q});
      return;
    }
    for (long x = -r[k]; x <= r[k]; ++x) {
      c[k] = x;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

std::multiset<std::pair<std::vector<long>, Rational>> as_set(const std::vector<ShortVector>& v) {
  std::multiset<std::pair<std::vector<long>, Rational>> out;
  for (const auto& s : v) out.insert({s.coords, s.norm});
  return out;
}

// Primitive solution of z^2 = a x^2 + b y^2 modulo p^k, by exhaustive search.
int local_solvability(long a, long b, long p) {
  const long mod = p == 2 ? 64 : p * p * p;
  auto md = [&](long v) { return ((v % mod) + mod) % mod; };
  std::set<long> unit_squares, all_squares;
  for (long z = 0; z < mod; ++z) {
    all_squares.insert(md(z * z));
    if (z % p != 0) unit_squares.insert(md(z * z));
  }
  for (long x = 0; x < mod; ++x)
    for (long y = 0; y < mod; ++y) {
      const long v = md(md(a * x % mod * x) + md(b * y % mod * y));
      const bool primitive_xy = x % p != 0 || y % p != 0;
      if (primitive_xy ? all_squares.count(v) > 0 : unit_squares.count(v) > 0) return 1;
    }
  return -1;
}

Quaternion random_quaternion(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
  Quaternion q;
  for (auto& c : q) c = make_rational(num(rng), den(rng));
  return q;
}

}  // namespace

TEST_CASE("canonical bases") {
  CHECK(canonical_basis(standard_z4()).basis() == QMatrix::identity(4));
  std::mt19937 rng(1);
  const IntLattice base = canonical_basis(d4());
  for (int trial = 0; trial < 5; ++trial) {
    QMatrix u = random_unimodular(rng);
    REQUIRE((determinant(u) == 1 || determinant(u) == -1));
    IntLattice moved(u * d4().basis(), d4().form());
    IntLattice canon = canonical_basis(moved);
    CHECK(canon.basis() == base.basis());
    CHECK(canonical_basis(canon).basis() == canon.basis());
    // Both generate the same vectors up to norm 4.
    std::set<QVector> a, b;
    for (const auto& v : short_vectors(moved, 4)) a.insert(moved.to_ambient(v.coords));
    for (const auto& v : short_vectors(d4(), 4)) b.insert(d4().to_ambient(v.coords));
    CHECK(a == b);
  }
  QMatrix deficient{{1, 0, 0, 0}, {2, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  CHECK_THROWS_AS(IntLattice(deficient, QMatrix::identity(4)), StructuralError);
}

TEST_CASE("short vector enumeration") {
  auto z4 = standard_z4();
  CHECK(short_vectors(z4, 1).size() == 8);
  auto two = short_vectors(z4, 2);
  CHECK(two.size() == 32);
  long ones = 0;
  for (const auto& v : two) ones += v.norm == 1;
  CHECK(ones == 8);
  for (std::size_t i = 1; i < two.size(); ++i) CHECK(two[i - 1].coords < two[i].coords);
  CHECK(short_vectors(z4, 0).empty());

  auto hurwitz = maximal_order(QuaternionAlgebra(-1, -1)).lattice;
  auto units = short_vectors(hurwitz, 1);
  CHECK(units.size() == 24);
  CHECK(as_set(units) == box_search(hurwitz, 1));

  std::mt19937 rng(2);
  for (const auto& l : {d4(), hurwitz, maximal_order(algebra_for_discriminant(11)).lattice}) {
    CHECK(as_set(short_vectors(l, 5)) == box_search(l, 5));
    IntLattice moved(random_unimodular(rng) * l.basis(), l.form());
    std::multiset<Rational> n1, n2;
    for (const auto& v : short_vectors(l, 6)) n1.insert(v.norm);
    for (const auto& v : short_vectors(moved, 6)) n2.insert(v.norm);
    CHECK(n1 == n2);
  }
  QMatrix indefinite{{2, 0}, {0, -2}};
  CHECK_THROWS_AS(short_vectors(IntLattice(QMatrix::identity(2), indefinite), 3), StructuralError);
}

TEST_CASE("theta coefficients") {
  auto t = theta_coeffs(standard_z4(), std::nullopt, 2);
  CHECK(t == std::map<long, Rational>{{0, 1}, {1, 8}, {2, 24}});
  Poly harmonic = Poly::variable(4, 0) * Poly::variable(4, 1);
  CHECK(theta_coeffs(d4(), harmonic, 3).at(0) == 0);
  auto order = maximal_order(algebra_for_discriminant(11)).lattice;
  auto th = theta_coeffs(order, std::nullopt, 3);
  for (long n = 1; n <= 3; ++n) {
    long count = 0;
    for (const auto& v : short_vectors(order, 3)) count += v.norm == n;
    CHECK(th.at(n) == count);
  }
  CHECK(th.at(0) == 1);
}

TEST_CASE("Hilbert symbols") {
  CHECK(hilbert_symbol(1, 7, 5) == 1);
  CHECK(hilbert_symbol(-1, -1, kInfinity) == -1);
  CHECK(hilbert_symbol(-1, -11, 11) == -1);
  CHECK(hilbert_symbol(-1, -11, 2) == 1);
  for (long p : {2L, 3L, 5L, 7L})
    for (long a : {-1L, -2L, -3L, 5L, 6L, -10L})
      for (long b : {-1L, -3L, -5L, 7L, 14L})
        CHECK(hilbert_symbol(a, b, p) == local_solvability(a, b, p));
  CHECK_THROWS_AS(hilbert_symbol(1, 1, 6), ArgumentError);
}

TEST_CASE("algebras from discriminants") {
  auto two = algebra_for_discriminant(2);
  CHECK(two.a() == -1);
  CHECK(two.b() == -1);
  auto eleven = algebra_for_discriminant(11);
  CHECK(eleven.a() == -1);
  CHECK(eleven.b() == -11);
  CHECK_THROWS_AS(algebra_for_discriminant(6), ArgumentError);
  for (long d : {2L, 3L, 5L, 7L, 11L, 13L, 30L, 37L, 42L, 103L}) {
    auto alg = algebra_for_discriminant(d);
    CHECK(alg.definite());
    CHECK(alg.discriminant() == d);
    int bad = hilbert_symbol(alg.a(), alg.b(), kInfinity) == -1;
    std::vector<long> ramified;
    for (long p : primes_up_to(200))
      if (hilbert_symbol(alg.a(), alg.b(), p) == -1) ramified.push_back(p);
    CHECK(ramified == prime_factors(d));
    CHECK((bad + ramified.size()) % 2 == 0);
  }
}

TEST_CASE("quaternion arithmetic") {
  QuaternionAlgebra h(-1, -1);
  CHECK(h.norm(quat(1, 1, 1, 1)) == 4);
  CHECK(h.conj(h.mul(quat(0, 1), quat(0, 0, 1))) == h.mul(quat(0, 0, 1), quat(0, 1)));
  std::mt19937 rng(4);
  QuaternionAlgebra alg(-2, -5);
  for (int trial = 0; trial < 100; ++trial) {
    Quaternion p = random_quaternion(rng), q = random_quaternion(rng), y = random_quaternion(rng);
    CHECK(alg.norm(alg.mul(p, q)) == alg.norm(p) * alg.norm(q));
    CHECK(alg.mul(p, alg.conj(p)) == quat(alg.norm(p)));
    CHECK(alg.conj(alg.mul(p, q)) == alg.mul(alg.conj(q), alg.conj(p)));
    if (is_zero(q)) continue;
    Quaternion s = alg.similitude_action(p, q, y);
    CHECK(alg.norm(s) == alg.norm(p) / alg.norm(q) * alg.norm(y));
    Quaternion pure = y;
    pure[0] = 0;
    Quaternion c = alg.similitude_action(q, q, pure);
    CHECK(alg.trace(c) == 0);
    CHECK(alg.norm(c) == alg.norm(pure));
  }
  CHECK(alg.similitude_action(quat(1), quat(1), quat(3, 1)) == quat(3, 1));
  CHECK_THROWS_AS(alg.similitude_action(quat(1), quat(0), quat(1)), ArgumentError);
}
