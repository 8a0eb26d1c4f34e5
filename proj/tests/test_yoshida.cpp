#include <random>

#include "doctest.h"
#include "quatperiod/yoshida.hpp"

using namespace quatperiod;

namespace {

std::shared_ptr<ClassSet> classes(long disc, long n2) {
  return std::make_shared<ClassSet>(eichler_order(maximal_order(algebra_for_discriminant(disc)), n2));
}

// Number of vectors of each norm up to bound, the zero vector included.
std::vector<long> counts(const IntLattice& l, long bound) {
  std::vector<long> c(static_cast<std::size_t>(bound + 1), 0);
  c[0] = 1;
  for (const auto& v : short_vectors(l, bound)) ++c[static_cast<std::size_t>(to_long_checked(v.norm))];
  return c;
}

int eigenvalue(const QMatrix& w, const QVector& v) {
  QVector image = w.apply(v);
  if (image == v) return 1;
  for (auto& x : image) x = -x;
  REQUIRE(image == v);
  return -1;
}

std::array<long, 4> random_unimodular(std::mt19937& rng) {
  std::array<long, 4> u{1, 0, 0, 1};
  std::uniform_int_distribution<int> pick(0, 3);
  for (int step = 0; step < 3; ++step) {
    std::array<long, 4> e{1, 0, 0, 1};
    switch (pick(rng)) {
      case 0: e = {1, 1, 0, 1}; break;
      case 1: e = {1, 0, -1, 1}; break;
      case 2: e = {0, 1, 1, 0}; break;
      default: e = {-1, 0, 0, 1}; break;
    }
    u = {u[0] * e[0] + u[1] * e[2], u[0] * e[1] + u[1] * e[3], u[2] * e[0] + u[3] * e[2], u[2] * e[1] + u[3] * e[3]};
  }
  return u;
}

// Covariance on every index whose image stays within precision; returns the number checked.
int covariance_sweep(const FourierTable& table, const std::array<long, 4>& u) {
  int checked = 0;
  for (const auto& [t, p] : table.coeffs) {
    const long n1 = u[0] * u[0] * t.n1 + u[0] * u[2] * t.m2 + u[2] * u[2] * t.n2;
    const long n2 = u[1] * u[1] * t.n1 + u[1] * u[3] * t.m2 + u[3] * u[3] * t.n2;
    if (n1 + n2 > table.prec) continue;
    CHECK(unimodular_check(table, u, t));
    ++checked;
  }
  return checked;
}

}  // namespace

TEST_CASE("constant terms at discriminant 11") {
  auto cs = classes(11, 1);
  QuatForm e{cs, 0, {2, -3}};
  QuatForm one{cs, 0, {1, 1}};
  auto cusp = yoshida_lift(e, e, 4);
  CHECK(cusp.at({0, 0, 0}).is_zero());
  auto constant = yoshida_lift(one, one, 4);
  CHECK(constant.at({0, 0, 0}) == Poly::constant(2, Rational(25, 144)));
  for (const auto& [t, p] : cusp.coeffs) {
    CHECK(t.discriminant() >= 0);
    CHECK(t.n1 >= 0);
    CHECK(t.n2 >= 0);
    CHECK(t.trace() <= 4);
    CHECK(p.is_homogeneous(0));
  }
}

TEST_CASE("lifts of forms with different involution signs vanish") {
  auto cs = classes(11, 1);
  const QMatrix w = atkin_lehner(*cs, 11, 0);
  const QVector ev{2, -3}, cv{1, 1};
  QuatForm e{cs, 0, ev};
  QuatForm one{cs, 0, cv};
  const bool differ = eigenvalue(w, ev) != eigenvalue(w, cv);
  auto mixed = yoshida_lift(e, one, 4);
  CHECK(mixed.coeffs.empty() == differ);
  CHECK(yoshida_lift(one, e, 4).coeffs.empty() == differ);
}

TEST_CASE("diagonal restriction factors through theta series") {
  auto cs = classes(11, 1);
  QuatForm e{cs, 0, {2, -3}};
  const long prec = 6;
  auto table = yoshida_lift(e, e, prec);
  auto restricted = diagonal_restriction(table, 0, 0);
  std::map<std::pair<long, long>, Rational> oracle;
  for (std::size_t i = 0; i < cs->size(); ++i)
    for (std::size_t j = 0; j < cs->size(); ++j) {
      const auto th = counts(cs->connecting(i, j), prec);
      const Rational w = e.values[i] * e.values[j] / (cs->unit_counts()[i] * cs->unit_counts()[j]);
      for (long n1 = 0; n1 <= prec; ++n1)
        for (long n2 = 0; n1 + n2 <= prec; ++n2) oracle[{n1, n2}] += w * th[n1] * th[n2];
    }
  CHECK(restricted == oracle);
  // The first row is the scalar theta lift of e.
  const auto theta = eichler_theta(e, prec);
  for (long n = 0; n <= prec; ++n) CHECK(restricted.at({0, n}) == theta[static_cast<std::size_t>(n)]);
  CHECK(restricted.at({0, 0}) == 0);
  CHECK_THROWS_AS(diagonal_restriction(table, 1, 0), ArgumentError);
}

TEST_CASE("parity gate") {
  CHECK_THROWS_AS(coefficient_kernel(algebra_for_discriminant(2), 3, 1, 1, 1), ArgumentError);
  auto cs = classes(2, 1);
  QuatForm one{cs, 0, {1}};
  QuatForm odd{cs, 1, QVector(3, Rational(0))};
  CHECK_THROWS_AS(yoshida_lift(odd, one, 3), ArgumentError);
  CHECK_THROWS_AS(yoshida_lift(one, odd, 3), ArgumentError);
  auto f3 = form_space_basis(*cs, 3);
  auto f1 = form_space_basis(*cs, 1);
  if (f3.rows() > 0 && f1.rows() > 0) {
    auto table = yoshida_lift(QuatForm{cs, 3, f3.row(0)}, QuatForm{cs, 1, f1.row(0)}, 3);
    for (const auto& [t, p] : table.coeffs) CHECK(p.coefficient({1, 1}) == 0);
    for (const auto& [key, value] : diagonal_restriction(table, 1, 1)) CHECK(value == 0);
  }
}

TEST_CASE("unimodular covariance in the scalar case") {
  auto cs = classes(11, 1);
  QuatForm e{cs, 0, {2, -3}};
  QuatForm mixed{cs, 0, {5, 1}};
  auto table = yoshida_lift(e, e, 6);
  for (const auto& [t, p] : table.coeffs) {
    CHECK(table.at({t.n2, t.m2, t.n1}) == p);
    CHECK(unimodular_check(table, {1, 0, 0, 1}, t));
    CHECK(unimodular_check(table, {0, 1, 1, 0}, t));
  }
  std::mt19937 rng(11);
  auto other = yoshida_lift(mixed, e, 6);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = random_unimodular(rng);
    checked += covariance_sweep(table, u);
    checked += covariance_sweep(other, u);
  }
  CHECK(checked > 100);
  CHECK(covariance_sweep(table, {1, 1, 0, 1}) > 0);
  CHECK_THROWS_AS(unimodular_check(table, {2, 0, 0, 1}, {1, 0, 1}), ArgumentError);
  CHECK_THROWS_AS(unimodular_check(table, {1, 0, 0, 1}, {4, 0, 4}), ArgumentError);
}

TEST_CASE("bilinearity and denominators") {
  auto cs = classes(37, 1);
  const QVector a{1, 2, -1}, b{0, 3, 1}, c{2, -1, 1};
  auto lift = [&](const QVector& x, const QVector& y) { return yoshida_lift({cs, 0, x}, {cs, 0, y}, 4); };
  QVector sum(3);
  for (std::size_t k = 0; k < 3; ++k) sum[k] = a[k] + 3 * b[k];
  auto lhs = lift(sum, c), first = lift(a, c), second = lift(b, c);
  for (const auto& [t, p] : lhs.coeffs) CHECK(p == first.at(t) + second.at(t).scaled(3));
  for (const auto& [t, p] : first.coeffs) CHECK(lhs.at(t) - second.at(t).scaled(3) == p);
  long l = 1;
  for (long e : cs->unit_counts()) l = std::lcm(l, e);
  for (const auto& [t, p] : first.coeffs)
    for (const auto& [m, v] : p.terms()) CHECK(l * l % to_long(Integer(v.get_den())) == 0);
}

TEST_CASE("vector-valued lifts") {
  SUBCASE("equal weights at discriminant 5") {
    auto cs = classes(5, 1);
    auto forms = eigenforms(*cs, 1);
    REQUIRE(forms.size() == 1);
    QuatForm phi{cs, 1, forms[0].rational_values()};
    auto table = yoshida_lift(phi, phi, 4);
    REQUIRE_FALSE(table.coeffs.empty());
    CHECK(table.at({0, 0, 0}).is_zero());
    for (const auto& [t, p] : table.coeffs) CHECK(p.is_homogeneous(2));
    // Only signed permutations preserve the separated shape of the coefficients.
    int checked = 0;
    for (const auto& u : {std::array<long, 4>{0, 1, 1, 0}, {-1, 0, 0, 1}, {1, 0, 0, -1}, {0, -1, 1, 0}})
      checked += covariance_sweep(table, u);
    CHECK(checked > 0);
    for (const auto& [t, p] : table.coeffs) CHECK(p.coefficient({1, 1}) == 0);
    auto r = diagonal_restriction(table, 2, 0);
    CHECK(r.at({0, 0}) == 0);
  }
  SUBCASE("unequal weights at discriminant 3") {
    auto cs = classes(3, 1);
    auto forms = eigenforms(*cs, 2);
    REQUIRE_FALSE(forms.empty());
    QuatForm phi{cs, 2, forms[0].rational_values()};
    QuatForm one{cs, 0, {1}};
    auto table = yoshida_lift(phi, one, 4);
    REQUIRE_FALSE(table.coeffs.empty());
    for (const auto& [t, p] : table.coeffs) CHECK(p.is_homogeneous(0));
    std::mt19937 rng(3);
    int checked = 0;
    for (int trial = 0; trial < 6; ++trial) checked += covariance_sweep(table, random_unimodular(rng));
    CHECK(checked > 0);
  }
}
