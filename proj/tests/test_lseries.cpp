#include <boost/multiprecision/cpp_complex.hpp>
#include <random>
#include <sstream>

#include "doctest.h"
#include "quatperiod/lseries.hpp"

using namespace quatperiod;

namespace {

long legendre(long a, long p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  long r = 1, b = a;
  for (long e = (p - 1) / 2; e > 0; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return r == 1 ? 1 : -1;
}

// a_p = p - #{(x, y) : y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6}; odd p by completing the square.
long ap_by_count(const std::array<long, 5>& a, long p) {
  auto mod = [p](long v) { return ((v % p) + p) % p; };
  if (p > 2) {
    long s = 0;
    for (long x = 0; x < p; ++x) {
      const long t = mod(a[0] * x + a[2]);
      const long rhs = mod(mod(mod(x * x) * x) + mod(a[1] * mod(x * x)) + a[3] * x + a[4]);
      s += legendre(4 * rhs + t * t, p);
    }
    return -s;
  }
  long count = 0;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y)
      if (mod(y * y + a[0] * x * y + a[2] * y - (x * x * x + a[1] * x * x + a[3] * x + a[4])) == 0) ++count;
  return p - count;
}

// y^2 + y = x^3 - x^2 - 10x - 20.
const std::array<long, 5> kCurve11{0, -1, 1, -10, -20};

NewformRecord curve_record(const std::string& label, long level, const std::array<long, 5>& curve, long pmax) {
  NewformRecord r;
  r.label = label;
  r.level = level;
  r.weight = 2;
  for (long p : primes_up_to(pmax)) r.ap[p] = ap_by_count(curve, p);
  for (long p : prime_factors(level)) r.signs[p] = static_cast<int>(-r.ap[p]);
  return r;
}

// alpha random, beta = p^(k-1) / alpha.
SatakeParams random_satake(std::mt19937& rng, long p, int k) {
  std::uniform_int_distribution<int> num(1, 9), den(1, 4), sign(0, 1);
  const Rational alpha = make_rational((sign(rng) ? 1 : -1) * num(rng), den(rng));
  return SatakeParams::from_roots(p, alpha, pow(Rational(p), k - 1) / alpha);
}

}  // namespace

TEST_CASE("newform ingestion") {
  const auto f = curve_record("11a", 11, kCurve11, 50);
  CHECK(f.a(2) == -2);
  CHECK(f.a(3) == -1);
  std::istringstream good(format_newform(f) + "\n# comment\n\n");
  const auto records = parse_newforms(good, "memory");
  REQUIRE(records.size() == 1);
  CHECK(records[0].ap == f.ap);
  CHECK(records[0].signs == std::map<long, int>{{11, -1}});
  CHECK(find_newform(records, "11a").level == 11);
  CHECK_THROWS_AS(find_newform(records, "37a"), ArgumentError);

  std::istringstream bad("# header\n11a|11|2|11:-1|2:-2,3:-1\nbad|11|2||2:5,3:0\n");
  try {
    parse_newforms(bad, "memory");
    FAIL("Ramanujan violation accepted");
  } catch (const IngestError& e) {
    CHECK(e.row() == 3);
  }
  std::istringstream empty("");
  CHECK(parse_newforms(empty).empty());
  std::istringstream malformed("x|11|2|11:-1\n");
  CHECK_THROWS_AS(parse_newforms(malformed), IngestError);
  std::istringstream wrong_sign("x|11|2|11:+1|11:1\n");
  CHECK_THROWS_AS(parse_newforms(wrong_sign), IngestError);
  std::istringstream composite("x|11|2||4:1\n");
  CHECK_THROWS_AS(parse_newforms(composite), IngestError);
}

TEST_CASE("triple product factors") {
  const auto f = curve_record("11a", 11, kCurve11, 50);
  for (long p : {2L, 3L, 5L, 7L, 13L}) {
    const EulerFactor t = triple_factor(f, f, f, p);
    CHECK(t.degree() == 8);
    CHECK(t.coeffs[0] == 1);
    CHECK(t.shift == make_rational(3, 2));
    CHECK(is_self_dual(t));
  }
  CHECK_THROWS_AS(triple_factor(f, f, f, 11), ArgumentError);

  SUBCASE("a_p = 0 gives an even polynomial") {
    const SatakeParams z{5, 0, 5};
    const EulerFactor t = triple_factor(z, 2, z, 2, z, 2);
    CHECK(t.degree() == 8);
    for (std::size_t i = 1; i < t.coeffs.size(); i += 2) CHECK(t.coeffs[i] == 0);
  }

  SUBCASE("numeric root expansion at 60 digits") {
    using C = boost::multiprecision::cpp_complex<60>;
    const long p = 2;
    const long a = f.a(p);
    const C disc = C(a * a - 4 * p);
    const C root = sqrt(disc);
    const std::array<C, 2> sat{(C(a) + root) / 2, (C(a) - root) / 2};
    std::vector<C> poly{C(1)};
    for (const auto& x : sat)
      for (const auto& y : sat)
        for (const auto& z : sat) {
          const C g = x * y * z;
          std::vector<C> next(poly.size() + 1, C(0));
          for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= g * poly[i];
          }
          poly = next;
        }
    const EulerFactor t = triple_factor(f, f, f, p);
    REQUIRE(poly.size() == t.coeffs.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto exact = boost::multiprecision::cpp_bin_float_50(t.coeffs[i].get_str());
      CHECK(abs(poly[i].real() - exact) < 1e-40);
      CHECK(abs(poly[i].imag()) < 1e-40);
    }
  }
}

TEST_CASE("spin and symmetric-square identities") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const long p = primes_up_to(30)[static_cast<std::size_t>(trial % 10)];
    const int k2 = 2 + 2 * (trial % 2), k1 = k2 + 2 * (trial % 3);
    const auto h1 = random_satake(rng, p, k1), h2 = random_satake(rng, p, k2);
    CHECK(spin_split_check(h1, k1, h2, k2));
    CHECK(sym2_identity_check(h1, k1, h2, k2));
    CHECK(spin_factor(h1, k1, h2, k2).degree() == 4);
    CHECK(standard_factor(h1, k1, h2, k2).degree() == 5);
    CHECK(standard_exterior_square(h1, k1, h2, k2).degree() == 10);
  }
  // Degree bookkeeping 10 = 3 + 3 + 4 and 5 = 1 + 4.
  const SatakeParams g{3, 1, 3};
  CHECK(sym2_factor(g, 2).degree() + sym2_factor(g, 2).degree() + tensor_factor(g, 2, g, 2).degree() == 10);
  // h1 = h2: the spin factor is a square.
  const EulerFactor l = gl2_factor(g, 2);
  CHECK(spin_factor(g, 2, g, 2) == l * l);
  // a_p = 0 for both.
  const SatakeParams z{7, 0, 7};
  CHECK(spin_split_check(z, 2, z, 2));
  CHECK(sym2_identity_check(z, 2, z, 2));
  // Specializations from point counts (11a, 37a: y^2 + y = x^3 - x).
  const auto f = curve_record("11a", 11, kCurve11, 60);
  const auto e = curve_record("37a", 37, {0, 0, 1, -1, 0}, 60);
  int count = 0;
  for (long p : primes_up_to(60)) {
    if (p == 11 || p == 37) continue;
    CHECK(sym2_identity_check(SatakeParams::of(f, p), 2, SatakeParams::of(e, p), 2));
    CHECK(spin_split_check(SatakeParams::of(f, p), 2, SatakeParams::of(e, p), 2));
    ++count;
  }
  CHECK(count >= 15);
}

TEST_CASE("Asai combination") {
  const SatakeParams s = SatakeParams::from_roots(3, make_rational(2, 3), make_rational(-5, 2));
  CHECK(asai_combination(UPoly{1}, s).coeffs == UPoly{1});
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> num(-6, 6);
  for (int trial = 0; trial < 20; ++trial) {
    UPoly asai{1};
    for (int i = 0; i < 4; ++i) asai.push_back(make_rational(num(rng), 1 + trial % 3));
    const Rational alpha = make_rational(num(rng), 2), beta = make_rational(num(rng), 3);
    // Direct substitution A(alpha X) A(beta X).
    UPoly sa, sb;
    for (std::size_t i = 0; i < asai.size(); ++i) {
      sa.push_back(asai[i] * pow(alpha, static_cast<long>(i)));
      sb.push_back(asai[i] * pow(beta, static_cast<long>(i)));
    }
    const auto combined = asai_combination(asai, SatakeParams::from_roots(5, alpha, beta));
    CHECK(combined.coeffs == upoly_mul(sa, sb));
    if (asai.back() != 0 && alpha != 0 && beta != 0) CHECK(combined.degree() == 8);
    // alpha = beta: square of one substitution.
    const auto twin = asai_combination(asai, SatakeParams::from_roots(5, alpha, alpha));
    CHECK(twin.coeffs == upoly_mul(sa, sa));
  }
  CHECK_THROWS_AS(asai_combination(UPoly{2, 1}, s), ArgumentError);
}

TEST_CASE("complex log gamma") {
  CHECK(std::abs(std::exp(log_gamma({5.0L, 0})) - std::complex<long double>(24)) < 1e-15L);
  CHECK(std::abs(std::exp(log_gamma({0.5L, 0})) - std::complex<long double>(std::sqrt(3.14159265358979323846264338L))) <
        1e-16L);
  // |Gamma(1/2 + it)|^2 = pi / cosh(pi t).
  const long double t = 3.7L, pi = 3.14159265358979323846264338L;
  CHECK(std::fabs(2 * log_gamma({0.5L, t}).real() - std::log(pi / std::cosh(pi * t))) < 1e-15L);
  // Gamma(z + 1) = z Gamma(z) off the axis.
  const std::complex<long double> z(-2.3L, 1.1L);
  CHECK(std::abs(std::exp(log_gamma(z + 1.0L) - log_gamma(z)) - z) < 1e-14L);
}

TEST_CASE("central values") {
  SUBCASE("zeta(2)") {
    LData zeta;
    for (long p : primes_up_to(200)) zeta.factors[p] = EulerFactor{p, UPoly{1, -1}, 0};
    zeta.gamma_shifts = {0};
    zeta.poles = {{1, 1}, {0, -1}};
    const long double pi = 3.14159265358979323846264338L;
    for (double kernel : {1.0, 0.5}) {
      const auto v = central_value(zeta, {2.0, kernel, 1e-14});
      CHECK(std::fabs(v.value - pi * pi / 6) < 1e-8L);
      CHECK(v.error < 1e-8L);
    }
    const auto at3 = central_value(zeta, {3.0, 1.0, 1e-14});
    CHECK(std::fabs(at3.value - 1.2020569031595942854L) < 1e-8L);
  }

  SUBCASE("level 11 at the center") {
    const auto f = curve_record("11a", 11, kCurve11, 400);
    const LData d = gl2_data(f, 400);
    CHECK(d.sign == 1);
    const auto v1 = central_value(d, {0.5, 1.0, 1e-13});
    const auto v2 = central_value(d, {0.5, 0.5, 1e-13});
    // L(E, 1) = Omega / 5 for the curve of conductor 11.
    CHECK(std::fabs(v1.value - 0.25384186085591068434L) < 1e-10L);
    CHECK(std::fabs(v1.value - v2.value) < 1e-6L);
    CHECK(std::fabs(v1.value - v2.value) < v1.error + v2.error + 1e-12L);
    LData odd = d;
    odd.sign = -1;
    CHECK(std::fabs(central_value(odd).value) <= central_value(odd).error);
    LData few = d;
    few.factors.erase(few.factors.upper_bound(5), few.factors.end());
    CHECK_THROWS_AS(central_value(few), InsufficientData);
  }

  SUBCASE("sign -1 curve vanishes, and more factors do not move the value") {
    const auto e = curve_record("37a", 37, {0, 0, 1, -1, 0}, 600);
    const LData d = gl2_data(e, 600);
    CHECK(d.sign == -1);
    const auto v = central_value(d);
    CHECK(std::fabs(v.value) <= v.error);
    const auto g = curve_record("37b", 37, {0, 1, 1, -23, -50}, 600);
    const LData db = gl2_data(g, 300), dbig = gl2_data(g, 600);
    CHECK(db.sign == 1);
    const auto small = central_value(db), big = central_value(dbig);
    CHECK(std::fabs(small.value - big.value) <= small.error);
    CHECK(std::fabs(small.value) > 0.1L);
  }
}

TEST_CASE("functional-equation data is kernel independent") {
  const auto f = curve_record("11a", 11, kCurve11, 9000);
  LData t = triple_data(f, f, f, 9000);
  CHECK(t.sign == 1);
  CHECK(t.factors.at(11).coeffs == upoly_mul(UPoly{1, -1}, upoly_mul(UPoly{1, -11}, UPoly{1, -11})));
  const auto v1 = central_value(t, {0.5, 1.0, 1e-9}), v2 = central_value(t, {0.5, 1.25, 1e-9});
  CHECK(std::fabs(v1.value - v2.value) < v1.error + v2.error);
  CHECK(v1.value > 0.01L);
  // The opposite sign is detected: the value moves with the kernel.
  t.sign = -t.sign;
  CHECK(std::fabs(central_value(t, {0.5, 1.0, 1e-9}).value - central_value(t, {0.5, 1.25, 1e-9}).value) > 1e-4L);

  const LData s = sym2_data(f, 400);
  CHECK(s.conductor == 121);
  const auto w1 = central_value(s, {1.0, 1.0, 1e-12}), w2 = central_value(s, {1.0, 0.8, 1e-12});
  CHECK(std::fabs(w1.value - w2.value) < w1.error + w2.error);
  CHECK(w1.value > 0.5L);
}

TEST_CASE("shipped newform table") {
  const auto records = ingest(std::string(QUATPERIOD_DATA_DIR) + "/newforms.txt");
  CHECK(records.size() >= 8);
  const std::map<std::string, std::array<long, 5>> models{{"11a", kCurve11},
                                                          {"26a", {1, 0, 1, -5, -8}},
                                                          {"26b", {1, -1, 1, -3, 3}},
                                                          {"37a", {0, 0, 1, -1, 0}}};
  for (const auto& [label, curve] : models) {
    const auto& r = find_newform(records, label);
    for (long p : primes_up_to(1000)) CHECK(r.a(p) == ap_by_count(curve, p));
  }
  CHECK(find_newform(records, "26a").max_prime() >= 70000);
  const auto& w4 = find_newform(records, "5k4a");
  CHECK(w4.weight == 4);
  CHECK(w4.a(2) == -4);
  CHECK(w4.a(3) == 2);
  CHECK(w4.signs.at(5) == 1);
  CHECK_THROWS_AS(find_newform(records, "99z"), ArgumentError);
}
