#include "doctest.h"
#include "quatperiod/orders.hpp"

using namespace quatperiod;

namespace {

// Square root of |det(tr(b_i conj(b_j)))| computed straight from the definition.
Rational trace_form_root(const QuaternionAlgebra& alg, const IntLattice& l) {
  auto el = lattice_elements(l);
  QMatrix g(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) g(i, j) = alg.trace(alg.mul(el[i], el[j]));
  Rational d = determinant(g);
  if (d < 0) d = -d;
  REQUIRE(is_integral(d));
  REQUIRE(is_square(d.get_num()));
  return Rational(isqrt(d.get_num()));
}

bool closed_under_products(const QuaternionAlgebra& alg, const IntLattice& l) {
  auto el = lattice_elements(l);
  for (const auto& x : el)
    for (const auto& y : el)
      if (!l.contains(to_vector(alg.mul(x, y)))) return false;
  return l.contains(to_vector(quat(1)));
}

}  // namespace

TEST_CASE("maximal orders") {
  auto hurwitz = maximal_order(QuaternionAlgebra(-1, -1));
  CHECK(trace_form_root(hurwitz.algebra, hurwitz.lattice) == 2);
  const QMatrix expected{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}};
  CHECK(canonical_basis(hurwitz.lattice) == canonical_basis(IntLattice(expected, hurwitz.algebra.norm_form())));
  for (long d : {2L, 3L, 5L, 7L, 11L, 13L, 37L, 30L}) {
    auto o = maximal_order(algebra_for_discriminant(d));
    CHECK(trace_form_root(o.algebra, o.lattice) == d);
    CHECK(closed_under_products(o.algebra, o.lattice));
    CHECK(reduced_discriminant(o.algebra, o.lattice) == d);
  }
}

TEST_CASE("Eichler orders") {
  auto hurwitz = maximal_order(QuaternionAlgebra(-1, -1));
  auto same = eichler_order(hurwitz, 1);
  CHECK(same.lattice == hurwitz.lattice);
  for (auto [disc, n2] : {std::pair<long, long>{2, 11}, {11, 2}, {2, 33}, {3, 35}, {13, 2}}) {
    auto m = maximal_order(algebra_for_discriminant(disc));
    auto e = eichler_order(m, n2);
    CHECK(trace_form_root(e.algebra, e.lattice) == disc * n2);
    CHECK(closed_under_products(e.algebra, e.lattice));
    CHECK(covolume(e.lattice) / covolume(m.lattice) == n2);
    for (const auto& x : lattice_elements(e.lattice)) CHECK(m.lattice.contains(to_vector(x)));
  }
  CHECK_THROWS_AS(eichler_order(hurwitz, 4), ArgumentError);
  CHECK_THROWS_AS(eichler_order(hurwitz, 6), ArgumentError);
}

TEST_CASE("class sets satisfy the mass formula") {
  struct Case {
    long disc, n2;
    std::size_t classes;
  };
  for (auto c : {Case{2, 1, 1}, Case{3, 1, 1}, Case{11, 1, 2}, Case{37, 1, 3}, Case{2, 11, 1}, Case{11, 2, 3},
                 Case{2, 13, 3}, Case{3, 5, 2}, Case{103, 1, 9}, Case{3, 35, 8}}) {
    ClassSet cs(eichler_order(maximal_order(algebra_for_discriminant(c.disc)), c.n2));
    CHECK(cs.size() == c.classes);
    Rational total = 0;
    for (long e : cs.unit_counts()) {
      total += Rational(1, e);
      CHECK((e == 2 || e == 4 || e == 6 || e == 8 || e == 12 || e == 24));
    }
    Rational mass = 1;
    for (long p : prime_factors(c.disc)) mass *= p - 1;
    for (long p : prime_factors(c.n2)) mass *= p + 1;
    CHECK(total == mass / 24);
    CHECK(cs.reps()[0] == cs.order().lattice);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& conn = cs.connecting(i, i);
      CHECK(canonical_basis(conn).basis() == cs.left_orders()[i].basis());
      CHECK(conn.scale() == 1);
      for (std::size_t j = 0; j < cs.size(); ++j) {
        auto sv = short_vectors(cs.connecting(i, j), 4);
        for (const auto& v : sv) {
          CHECK(v.norm >= 1);
          CHECK(is_integral(v.norm));
        }
      }
      // unit counts from norm-one vectors of the left order
      CHECK(static_cast<long>(short_vectors(cs.left_orders()[i], 1).size()) == cs.unit_counts()[i]);
    }
  }
}

TEST_CASE("discriminant 2 and 11 class sets") {
  ClassSet two(maximal_order(algebra_for_discriminant(2)));
  CHECK(two.unit_counts() == std::vector<long>{24});
  ClassSet eleven(maximal_order(algebra_for_discriminant(11)));
  auto e = eleven.unit_counts();
  std::sort(e.begin(), e.end());
  CHECK(e == std::vector<long>{4, 6});
  ClassSet level22(eichler_order(maximal_order(algebra_for_discriminant(2)), 11));
  CHECK(level22.mass() == Rational(1, 2));
}

TEST_CASE("class set construction is deterministic") {
  auto order = eichler_order(maximal_order(algebra_for_discriminant(3)), 35);
  ClassSet a(order), b(order);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.reps()[i] == b.reps()[i]);
}

TEST_CASE("ideal classes are recognised") {
  ClassSet cs(maximal_order(algebra_for_discriminant(37)));
  const auto& alg = cs.algebra();
  for (std::size_t k = 0; k < cs.size(); ++k) {
    auto left_multiple = [&](const Quaternion& g) {
      std::vector<Quaternion> gens;
      for (const auto& x : lattice_elements(cs.reps()[k])) gens.push_back(alg.mul(g, x));
      return canonical_basis(quaternion_lattice(alg, gens));
    };
    IntLattice moved = left_multiple(quat(1, 2, -1, 1));
    auto found = cs.find_class(moved);
    REQUIRE(found.has_value());
    CHECK(found->first == k);
    CHECK(left_multiple(found->second).basis() == moved.basis());
  }
}

TEST_CASE("essential complements") {
  SUBCASE("maximal order removes the constants") {
    ClassSet cs(maximal_order(algebra_for_discriminant(37)));
    QMatrix p = essential_complement(cs);
    CHECK(p * p == p);
    CHECK(p.apply(QVector(cs.size(), Rational(1))) == QVector(cs.size(), Rational(0)));
    CHECK(rank(p) == cs.size() - 1);
  }
  SUBCASE("level 22 annihilates pullbacks") {
    ClassSet cs(eichler_order(maximal_order(algebra_for_discriminant(11)), 2));
    QMatrix p = essential_complement(cs);
    CHECK(p * p == p);
    QMatrix w(cs.size(), cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) w(i, i) = Rational(1, cs.unit_counts()[i]);
    CHECK(w * p == (w * p).transpose());
    for (const auto& m : superorder_maps(cs))
      for (std::size_t k = 0; k < m.super->size(); ++k) {
        QVector v(cs.size(), Rational(0));
        for (std::size_t i = 0; i < cs.size(); ++i) v[i] = m.target[i] == k ? 1 : 0;
        CHECK(p.apply(v) == QVector(cs.size(), Rational(0)));
      }
    CHECK(rank(p) == 0);
  }
}
