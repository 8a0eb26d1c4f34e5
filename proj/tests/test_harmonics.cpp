#include <random>

#include "doctest.h"
#include "quatperiod/harmonics.hpp"

using namespace quatperiod;

namespace {

Quaternion random_quaternion(std::mt19937& rng, bool pure = false) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  Quaternion q;
  for (std::size_t k = 0; k < 4; ++k) q[k] = make_rational(num(rng), den(rng));
  if (pure) q[0] = 0;
  if (is_zero(q)) q[1] = 1;
  return q;
}

QVector random_vector(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(-5, 5);
  QVector v(n);
  for (auto& x : v) x = num(rng);
  return v;
}

QVector point8(const Quaternion& a, const Quaternion& b) { return {a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]}; }

}  // namespace

TEST_CASE("one-dimensional Gegenbauer polynomials") {
  CHECK(gegenbauer_1d(0) == UPoly{1});
  CHECK(gegenbauer_1d(1) == UPoly{0, 2});
  CHECK(gegenbauer_1d(2) == UPoly{-1, 0, 4});
  // Chebyshev recurrence U_{n+1} = 2t U_n - U_{n-1}
  for (int n = 1; n < 8; ++n) {
    UPoly lhs = gegenbauer_1d(n + 1);
    UPoly rhs = upoly_mul(UPoly{0, 2}, gegenbauer_1d(n));
    UPoly prev = gegenbauer_1d(n - 1);
    for (std::size_t i = 0; i < prev.size(); ++i) rhs[i] -= prev[i];
    CHECK(upoly_trim(lhs) == upoly_trim(rhs));
  }
}

TEST_CASE("Gegenbauer kernel values and symmetry") {
  QuaternionAlgebra alg(-1, -3);
  CHECK(gegenbauer_kernel(alg, 1, quat(1), quat(1)) == 4);
  CHECK(gegenbauer_kernel(alg, 0, quat(2, 1), quat(0, 0, 3)) == 1);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Quaternion x = random_quaternion(rng), y = random_quaternion(rng);
    for (int a = 0; a <= 4; ++a) CHECK(gegenbauer_kernel(alg, a, x, y) == gegenbauer_kernel(alg, a, y, x));
  }
}

TEST_CASE("kernel polynomials are harmonic and agree with the kernel") {
  std::mt19937 rng(11);
  for (auto [a, b] : {std::pair<int, int>{-1, -1}, {-2, -5}, {-1, -11}}) {
    QuaternionAlgebra alg(a, b);
    for (int deg = 0; deg <= 8; ++deg) {
      Quaternion xp = random_quaternion(rng), x = random_quaternion(rng);
      Poly k = kernel_poly(alg, Domain::Full, deg, xp);
      CHECK(k.is_homogeneous(deg));
      CHECK(laplacian(alg, Domain::Full, k).is_zero());
      CHECK(k.evaluate(domain_point(Domain::Full, x)) == gegenbauer_kernel(alg, deg, x, xp));
      Quaternion yp = random_quaternion(rng, true), y = random_quaternion(rng, true);
      Poly k0 = kernel_poly(alg, Domain::TraceZero, deg, yp);
      CHECK(laplacian(alg, Domain::TraceZero, k0).is_zero());
      CHECK(k0.evaluate(domain_point(Domain::TraceZero, y)) == trace_zero_kernel(alg, deg, y, yp));
    }
  }
}

TEST_CASE("harmonic space dimensions") {
  QuaternionAlgebra alg(-1, -3);
  for (int d = 0; d <= 6; ++d) {
    CHECK(harmonic_space(alg, Domain::Full, d).dim() == static_cast<std::size_t>((d + 1) * (d + 1)));
    CHECK(harmonic_space(alg, Domain::TraceZero, d).dim() == static_cast<std::size_t>(2 * d + 1));
  }
  CHECK(harmonic_space(alg, Domain::Full, 0).normalization == 1);
  CHECK(harmonic_space(alg, Domain::TraceZero, 0).normalization == 1);
}

TEST_CASE("the normalized kernel reproduces on a full basis") {
  std::mt19937 rng(3);
  QuaternionAlgebra alg(-2, -5);
  for (Domain dom : {Domain::Full, Domain::TraceZero}) {
    for (int deg = 0; deg <= 6; ++deg) {
      const auto& sp = harmonic_space(alg, dom, deg);
      for (int trial = 0; trial < 2; ++trial) {
        Quaternion xp = random_quaternion(rng, dom == Domain::TraceZero);
        Poly k = kernel_poly(alg, dom, deg, xp);
        for (const auto& q : sp.basis) CHECK(sp.inner(k, q) == q.evaluate(domain_point(dom, xp)));
      }
    }
    // double reproduction
    const auto& sp = harmonic_space(alg, dom, 3);
    Quaternion x = random_quaternion(rng, dom == Domain::TraceZero);
    Quaternion y = random_quaternion(rng, dom == Domain::TraceZero);
    Rational expected = dom == Domain::Full ? gegenbauer_kernel(alg, 3, x, y) : trace_zero_kernel(alg, 3, x, y);
    CHECK(sp.inner(kernel_poly(alg, dom, 3, x), kernel_poly(alg, dom, 3, y)) == expected);
  }
}

TEST_CASE("tau action is a homomorphism and an isometry") {
  std::mt19937 rng(5);
  QuaternionAlgebra alg(-1, -3);
  const auto& sp = harmonic_space(alg, Domain::TraceZero, 3);
  Poly p = sp.from_coordinates(random_vector(rng, sp.dim()));
  Poly q = sp.from_coordinates(random_vector(rng, sp.dim()));
  CHECK(tau_action(alg, quat(1), p) == p);
  CHECK(tau_action(alg, quat(Rational(-7, 3)), p) == p);
  CHECK_THROWS_AS(tau_action(alg, quat(0), p), ArgumentError);
  for (int trial = 0; trial < 5; ++trial) {
    Quaternion y1 = random_quaternion(rng), y2 = random_quaternion(rng);
    Poly t = tau_action(alg, y1, p);
    CHECK(laplacian(alg, Domain::TraceZero, t).is_zero());
    CHECK(tau_action(alg, y1, tau_action(alg, y2, p)) == tau_action(alg, alg.mul(y1, y2), p));
    CHECK(sp.inner(t, tau_action(alg, y1, q)) == sp.inner(p, q));
  }
}

TEST_CASE("trilinear forms vanish exactly off balanced triples") {
  QuaternionAlgebra alg(-1, -1);
  CHECK(trilinear_form(alg, 0, 0, 0).at(0, 0, 0) == 1);
  CHECK(trilinear_form(alg, 1, 0, 0).is_zero());
  CHECK_FALSE(trilinear_form(alg, 1, 1, 1).is_zero());
  for (int nu = 0; nu <= 5; ++nu)
    for (int a = 0; a <= 5; ++a)
      for (int b = 0; b <= 5; ++b) {
        bool triangle = nu <= a + b && a <= nu + b && b <= nu + a;
        CHECK(trilinear_form(alg, nu, a, b).is_zero() == !triangle);
      }
}

TEST_CASE("trilinear forms are rotation invariant") {
  std::mt19937 rng(13);
  QuaternionAlgebra alg(-2, -5);
  for (auto [nu, a, b] : {std::tuple<int, int, int>{1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {3, 2, 2}, {1, 2, 2}}) {
    const auto& t = trilinear_form(alg, nu, a, b);
    const auto& sn = harmonic_space(alg, Domain::TraceZero, nu);
    const auto& sa = harmonic_space(alg, Domain::TraceZero, a);
    const auto& sb = harmonic_space(alg, Domain::TraceZero, b);
    Poly p = sn.from_coordinates(random_vector(rng, sn.dim()));
    Poly q = sa.from_coordinates(random_vector(rng, sa.dim()));
    Poly r = sb.from_coordinates(random_vector(rng, sb.dim()));
    Rational base = t(p, q, r);
    for (int trial = 0; trial < 3; ++trial) {
      Quaternion y = random_quaternion(rng);
      CHECK(t(tau_action(alg, y, p), tau_action(alg, y, q), tau_action(alg, y, r)) == base);
    }
  }
}

TEST_CASE("identification of tensor products with full harmonic spaces") {
  QuaternionAlgebra alg(-1, -3);
  for (int beta = 0; beta <= 2; ++beta) {
    const auto& s0 = harmonic_space(alg, Domain::TraceZero, beta);
    const auto& full = harmonic_space(alg, Domain::Full, 2 * beta);
    QMatrix images(s0.dim() * s0.dim(), full.dim());
    for (std::size_t a = 0; a < s0.dim(); ++a)
      for (std::size_t b = 0; b < s0.dim(); ++b) {
        Poly f = identify(alg, s0.basis[a], s0.basis[b]);
        CHECK(f.is_homogeneous(2 * beta));
        CHECK(laplacian(alg, Domain::Full, f).is_zero());
        images.set_row(a * s0.dim() + b, full.coordinates(f));
      }
    CHECK(rank(images) == full.dim());
  }
}

TEST_CASE("coefficient polynomials") {
  std::mt19937 rng(17);
  QuaternionAlgebra alg(-1, -1);
  SUBCASE("constant case") {
    QMatrix q{{Rational(5, 3)}};
    Poly c = c_coeff(alg, q, 0, 0, 0, 0);
    CHECK(c == Poly::constant(8, Rational(5, 3)));
  }
  SUBCASE("harmonic in each argument") {
    const auto& s1 = harmonic_space(alg, Domain::TraceZero, 2);
    const auto& s2 = harmonic_space(alg, Domain::TraceZero, 1);
    QMatrix q(s1.dim(), s2.dim());
    for (std::size_t i = 0; i < q.rows(); ++i) q.set_row(i, random_vector(rng, q.cols()));
    Poly c = c_coeff(alg, q, 2, 1, 1, 1);
    REQUIRE_FALSE(c.is_zero());
    Poly lap1(8), lap2(8);
    const QVector f = {1, 1, 1, 1};
    for (int k = 0; k < 4; ++k) {
      lap1 += c.derivative(k).derivative(k).scaled(Rational(1) / f[static_cast<std::size_t>(k)]);
      lap2 += c.derivative(k + 4).derivative(k + 4);
    }
    CHECK(lap1.is_zero());
    CHECK(lap2.is_zero());
  }
  SUBCASE("parity violations are rejected") {
    QMatrix q(3, 3);
    CHECK_THROWS_AS(c_coeff(alg, q, 1, 1, 1, 1), ArgumentError);
  }
  SUBCASE("equivariance under left and right rotations") {
    // Norm-one rational quaternions.
    Quaternion g = quat(Rational(3, 5), Rational(4, 5));
    Quaternion h = quat(Rational(1, 3), Rational(2, 3), Rational(2, 3));
    const int nu1 = 2, nu2 = 1, a1 = 1, a2 = 1;
    const auto& s1 = harmonic_space(alg, Domain::TraceZero, nu1);
    const auto& s2 = harmonic_space(alg, Domain::TraceZero, nu2);
    QMatrix q(s1.dim(), s2.dim());
    for (std::size_t i = 0; i < q.rows(); ++i) q.set_row(i, random_vector(rng, q.cols()));
    QMatrix moved = tau_matrix(alg, s1, alg.inverse(g)) * q * tau_matrix(alg, s2, h).transpose();
    Poly c = c_coeff(alg, q, nu1, nu2, a1, a2);
    Poly cm = c_coeff(alg, moved, nu1, nu2, a1, a2);
    for (int trial = 0; trial < 4; ++trial) {
      Quaternion x1 = random_quaternion(rng), x2 = random_quaternion(rng);
      Quaternion y1 = alg.mul(alg.mul(g, x1), h), y2 = alg.mul(alg.mul(g, x2), h);
      CHECK(c.evaluate(point8(y1, y2)) == cm.evaluate(point8(x1, x2)));
    }
  }
  SUBCASE("injective on the tensor product") {
    for (auto [nu1, nu2, a1, a2] : {std::tuple<int, int, int, int>{2, 0, 0, 0}, {1, 1, 0, 2}, {2, 2, 2, 2}}) {
      const auto& ck = coefficient_kernel(alg, nu1, nu2, a1, a2);
      REQUIRE_FALSE(ck.zero);
      QMatrix flat(ck.kernels.size(), ck.kernels[0].rows() * ck.kernels[0].cols());
      for (std::size_t s = 0; s < ck.kernels.size(); ++s) {
        QVector row;
        for (std::size_t i = 0; i < ck.kernels[s].rows(); ++i)
          for (std::size_t j = 0; j < ck.kernels[s].cols(); ++j) row.push_back(ck.kernels[s](i, j));
        flat.set_row(s, row);
      }
      CHECK(rank(flat) == ck.kernels.size());
    }
  }
}
