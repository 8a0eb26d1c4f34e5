#include "doctest.h"
#include "quatperiod/periods.hpp"

using namespace quatperiod;

namespace {

std::shared_ptr<ClassSet> classes(long disc, long n2) {
  return std::make_shared<ClassSet>(eichler_order(maximal_order(algebra_for_discriminant(disc)), n2));
}

SignData uniform(long level, int shared, int first, int second) {
  SignData s;
  s.level = level;
  for (long p : prime_factors(level)) {
    s.shared[p] = shared;
    s.first[p] = first;
    s.second[p] = second;
  }
  return s;
}

// All sign data at a level, one bit per (prime, form).
std::vector<SignData> all_patterns(long level) {
  const auto ps = prime_factors(level);
  const std::size_t bits = 3 * ps.size();
  std::vector<SignData> out;
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    SignData s;
    s.level = level;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      auto bit = [&](std::size_t b) { return (mask >> (3 * k + b)) & 1u ? -1 : 1; };
      s.shared[ps[k]] = bit(0);
      s.first[ps[k]] = bit(1);
      s.second[ps[k]] = bit(2);
    }
    out.push_back(s);
  }
  return out;
}

QuatForm negated(const QuatForm& f) {
  QuatForm g = f;
  for (auto& x : g.values) x = -x;
  return g;
}

}  // namespace

TEST_CASE("sign gates") {
  CHECK_FALSE(sign_gate(uniform(11, 1, 1, 1), 11));
  CHECK(sign_gate(uniform(11, -1, 1, 1), 11));
  CHECK_FALSE(sign_gate(uniform(11, -1, 1, 1), 1));
  CHECK(admissible_discriminants(30) == std::vector<long>{2, 3, 5, 30});
  for (long level : {14L, 15L, 30L, 11L}) {
    for (const auto& s : all_patterns(level)) {
      int passing = 0;
      for (long d : admissible_discriminants(level)) passing += sign_gate(s, d);
      CHECK(passing <= 1);
      if (s.global_product() == 1) CHECK(passing == 0);
      else CHECK(passing == 1);
    }
  }
}

TEST_CASE("choosing the algebra") {
  CHECK(select_algebra(uniform(11, -1, 1, 1)).disc == 11);
  SignData fourteen = uniform(14, 1, 1, 1);
  fourteen.first[2] = -1;
  CHECK(select_algebra(fourteen).disc == 2);
  fourteen.second[7] = -1;
  auto rejected = select_algebra(fourteen);
  CHECK_FALSE(rejected.disc.has_value());
  CHECK(rejected.reason.find("zero") != std::string::npos);
  CHECK_THROWS_AS(admissible_discriminants(12), ArgumentError);
}

TEST_CASE("period sums at discriminant 11") {
  auto cs = classes(11, 1);
  QuatForm e{cs, 0, {2, -3}};
  QuatForm one{cs, 0, {1, 1}};
  CHECK(trilinear_form(cs->algebra(), 0, 0, 0).at(0, 0, 0) == 1);

  // Direct cubic sums over the class values.
  Rational cubic = 0, weighted_cubic = 0;
  for (std::size_t j = 0; j < 2; ++j) {
    cubic += pow(e.values[j], 3);
    weighted_cubic += pow(e.values[j], 3) / cs->unit_counts()[j];
  }
  auto r = period_sums(e, e, e, e, 0, 0);
  CHECK(r.s1 == cubic);
  CHECK(r.s1 == -19);
  CHECK(r.s2 == -19);
  CHECK(r.proxy == 130321);
  CHECK(r.vanishing == Vanishing::None);
  CHECK(r.k1 == 2);
  CHECK(r.k2 == 2);
  auto w = period_sums(e, e, e, e, 0, 0, {true, true});
  CHECK(w.s1 == weighted_cubic);
  CHECK(w.s1 == Rational(-5, 2));

  CHECK(trilinear_sum(e, one, one) == -1);
  CHECK(trilinear_sum(e, one, one, true) == 0);

  auto flipped = period_sums(e, e, negated(e), e, 0, 0);
  CHECK(flipped.s1 == 19);
  CHECK(flipped.proxy == r.proxy);
  CHECK(period_sums(e, e, e, e, 1, 0).vanishing == Vanishing::WeightGate);
}

TEST_CASE("degenerate cases") {
  auto cs = classes(11, 1);
  QuatForm e{cs, 0, {2, -3}};
  QuatForm one{cs, 0, {1, 1}};
  SUBCASE("Eisenstein second form") {
    auto same = degenerate_eisenstein(e, e, e);
    CHECK(same.s2 == Rational(156, 5));
    CHECK(same.s1 == -19);
    // Distinct eigenforms are orthogonal only for the invariant measure.
    auto distinct = degenerate_eisenstein(e, e, one, {true, true});
    CHECK(distinct.product == 0);
    CHECK(distinct.s2 == 0);
    CHECK(degenerate_eisenstein(e, e, e, {true, true}).product != 0);
    CHECK(degenerate_eisenstein(e, e, one).s2 == Rational(-12, 5));
    QuatForm scaled{cs, 0, {6, -9}};
    CHECK(degenerate_eisenstein(scaled, e, e).product == 3 * same.product);
  }
  SUBCASE("Klingen case") {
    auto k = klingen_case(e, e, e);
    CHECK(k.s1 == k.s2);
    CHECK(k.product == 361);
    CHECK(k.product >= 0);
  }
}

TEST_CASE("sign gate soundness on quaternionic data") {
  int gated = 0;
  for (auto [disc, n2] : {std::pair<long, long>{2, 7}, {7, 2}, {3, 5}, {5, 3}, {2, 13}, {13, 2}}) {
    auto cs = classes(disc, n2);
    std::vector<QuatForm> forms;
    for (const auto& f : eigenforms(*cs, 0))
      if (f.rational()) forms.push_back({cs, 0, f.rational_values()});
    REQUIRE(forms.size() >= 2);
    for (const auto& a : forms)
      for (const auto& b : forms)
        for (const auto& c : forms)
          for (const auto& d : forms) {
            auto gate = period_sums(a, b, c, d, 0, 0);
            for (bool weighted : {false, true}) {
              auto direct = period_sums(a, b, c, d, 0, 0, {weighted, false});
              if (gate.vanishing == Vanishing::SignGate) CHECK(direct.product == 0);
            }
            gated += gate.vanishing == Vanishing::SignGate;
          }
  }
  CHECK(gated > 0);
}

TEST_CASE("positive weight periods") {
  auto cs = classes(5, 1);
  auto forms = eigenforms(*cs, 1);
  REQUIRE(forms.size() == 1);
  QuatForm phi{cs, 1, forms[0].rational_values()};
  QuatForm one{cs, 0, QVector(cs->size(), Rational(1))};
  auto r = period_sums(phi, phi, phi, one, 2, 0);
  CHECK(r.k1 == 4);
  CHECK(r.k2 == 2);
  CHECK(r.vanishing == Vanishing::None);
  CHECK(r.s1 != 0);
  CHECK(r.proxy > 0);
  CHECK(period_sums(phi, phi, one, one, 2, 0).vanishing == Vanishing::WeightGate);
  // Invariance makes the pairing of phi with itself a positive multiple of the inner product.
  const auto& t = trilinear_form(cs->algebra(), 1, 1, 0);
  const auto& space = harmonic_space(cs->algebra(), Domain::TraceZero, 1);
  for (std::size_t j = 0; j < cs->size(); ++j) {
    const Poly p = phi.value_poly(j);
    if (p.is_zero()) continue;
    CHECK(t(p, p, Poly::constant(3, 1)) * space.inner(space.basis[0], space.basis[0]) ==
          t(space.basis[0], space.basis[0], Poly::constant(3, 1)) * space.inner(p, p));
  }
}

TEST_CASE("eigenform lookup") {
  auto cs = classes(11, 1);
  auto e = find_eigenform(cs, 0, {{2, -2}, {3, -1}, {5, 1}});
  REQUIRE(e.has_value());
  CHECK((e->values == QVector{2, -3} || e->values == QVector{-2, 3}));
  CHECK_FALSE(find_eigenform(cs, 0, {{2, 5}}).has_value());
}
