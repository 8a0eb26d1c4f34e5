#include "doctest.h"
#include "quatperiod/linalg.hpp"
#include "quatperiod/poly.hpp"
#include "quatperiod/rational.hpp"

using namespace quatperiod;

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("-6/4") == make_rational(-3, 2));
  CHECK(to_string(parse_rational("10/5")) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), ArgumentError);
  CHECK_THROWS_AS(parse_rational("x"), ArgumentError);
  CHECK(floor_of(make_rational(-3, 2)) == -2);
  CHECK(ceil_of(make_rational(-3, 2)) == -1);
}

TEST_CASE("integer helpers") {
  CHECK(prime_factors(60) == std::vector<long>{2, 3, 5});
  CHECK(is_squarefree(30));
  CHECK_FALSE(is_squarefree(12));
  CHECK(primes_up_to(20) == std::vector<long>{2, 3, 5, 7, 11, 13, 17, 19});
  CHECK(isqrt(Integer(99)) == 9);
  CHECK(is_square(Integer(144)));
}

TEST_CASE("quadratic surds") {
  QuadSurd x(1, 1, 5);  // 1 + sqrt 5
  QuadSurd y = x * x.conjugate();
  CHECK(y == QuadSurd::rational(-4, 5));
  CHECK((x / x) == QuadSurd::rational(1, 5));
  CHECK(x.norm() == -4);
}

TEST_CASE("matrix kernel, inverse and determinant") {
  QMatrix m{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  CHECK(determinant(m) == 0);
  CHECK(rank(m) == 2);
  QMatrix k = kernel(m);
  REQUIRE(k.rows() == 1);
  CHECK(m.apply(k.row(0)) == QVector{0, 0, 0});
  QMatrix a{{2, 1}, {1, 3}};
  CHECK(a * inverse(a) == QMatrix::identity(2));
  CHECK(determinant(a) == 5);
  CHECK_THROWS_AS(inverse(m), StructuralError);
}

TEST_CASE("characteristic polynomial matches the determinant definition") {
  QMatrix a{{1, 2}, {3, 0}};
  // det(xI - A) = x^2 - x - 6
  CHECK(characteristic_polynomial(a) == QVector{-6, -1, 1});
  auto roots = rational_roots(characteristic_polynomial(a));
  CHECK(roots == std::vector<Rational>{-2, 3});
}

TEST_CASE("rational roots leave the irreducible remainder") {
  UPoly rest;
  // (x - 1/2)(x^2 - 5)
  UPoly p{Rational(5, 2), -5, Rational(-1, 2), 1};
  auto roots = rational_roots(p, &rest);
  CHECK(roots == std::vector<Rational>{Rational(1, 2)});
  CHECK(rest == UPoly{-5, 0, 1});
}

TEST_CASE("hermite normal form is basis independent") {
  ZMatrix a{{2, 0}, {0, 3}};
  ZMatrix u{{1, 1}, {1, 2}};
  CHECK(hermite_normal_form(a) == hermite_normal_form(u * a));
  ZMatrix dup{{2, 4}, {1, 2}, {0, 3}};
  ZMatrix h = hermite_normal_form(dup);
  CHECK(h.rows() == 2);
  CHECK(h == ZMatrix{{1, 2}, {0, 3}});
}

TEST_CASE("polynomial arithmetic") {
  Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
  Poly p = (x + y).pow(2);
  CHECK(p.coefficient({1, 1}) == 2);
  CHECK(p.evaluate({1, 2}) == 9);
  CHECK(p.derivative(0) == (x + y).scaled(2));
  QMatrix swap{{0, 1}, {1, 0}};
  CHECK((x * y * y).linear_substitute(swap) == x * x * y);
  CHECK(monomials_of_degree(3, 2).size() == 6);
}
