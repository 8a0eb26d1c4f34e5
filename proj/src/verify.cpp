#include <cmath>
#include <filesystem>
#include <functional>
#include <random>

#include "pipeline_internal.hpp"
#include "quatperiod/diffop.hpp"

namespace quatperiod {

using namespace detail;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

// Integer q-expansion coefficients a_1 .. a_n from the a_p of a newform.
std::vector<Integer> q_expansion(const NewformRecord& f, long n) {
  std::vector<Integer> a(static_cast<std::size_t>(n + 1), 0);
  a[1] = 1;
  for (long m = 2; m <= n; ++m) {
    long p = 2;
    while (m % p != 0) ++p;
    long pk = 1;
    int k = 0;
    while (m % (pk * p) == 0) {
      pk *= p;
      ++k;
    }
    const long rest = m / pk;
    Integer local;
    if (k == 1) {
      local = f.a(p);
    } else {
      const Integer chi = f.level % p == 0 ? 0 : pow(Integer(p), static_cast<unsigned long>(f.weight - 1));
      local = Integer(f.a(p)) * a[static_cast<std::size_t>(pk / p)] - chi * a[static_cast<std::size_t>(pk / p / p)];
    }
    a[static_cast<std::size_t>(m)] = local * a[static_cast<std::size_t>(rest)];
  }
  return a;
}

Outcome mass_formula() {
  for (long d : {2L, 3L, 5L, 7L, 11L, 13L}) {
    const auto cs = class_set(d, 1);
    if (cs->mass() != eichler_mass(d, 1)) return {false, "mass mismatch at discriminant " + std::to_string(d)};
  }
  const auto cs = class_set(11, 2);
  if (cs->mass() != eichler_mass(11, 2)) return {false, "mass mismatch at level 22"};
  return {true, "discriminants 2..13 and level 22"};
}

Outcome level_eleven(const NewformRecord& f, long pmax) {
  const auto cs = class_set(11, 1);
  if (cs->size() != 2) return {false, "class number " + std::to_string(cs->size())};
  for (const auto& e : eigenforms(*cs, 0, pmax)) {
    if (!e.essential) continue;
    const QVector v = e.rational_values();
    if (v != QVector{2, -3}) return {false, "cuspidal eigenvector " + rat(v[0]) + ", " + rat(v[1])};
    for (const auto& [p, a] : e.hecke)
      if (a != QuadSurd::rational(Rational(f.a(p)), 1)) return {false, "a_" + std::to_string(p) + " differs"};
    return {true, "eigenvalues match " + f.label + " for p <= " + std::to_string(pmax)};
  }
  return {false, "no essential eigenform"};
}

Outcome theta_proportional(const NewformRecord& f) {
  const auto cs = class_set(11, 1);
  const auto theta = eichler_theta(QuatForm{cs, 0, {2, -3}}, 30);
  const auto a = q_expansion(f, 30);
  if (theta[0] != 0 || theta[1] == 0) return {false, "constant term or first coefficient"};
  const Rational c = theta[1];
  for (long n = 1; n <= 30; ++n)
    if (theta[static_cast<std::size_t>(n)] != c * Rational(a[static_cast<std::size_t>(n)]))
      return {false, "coefficient " + std::to_string(n)};
  return {true, "30 coefficients, factor " + rat(c)};
}

Outcome balance() {
  QuaternionAlgebra alg(-1, -1);
  for (int nu = 0; nu <= 3; ++nu)
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b)
        if (trilinear_form(alg, nu, a, b).is_zero() == balanced(nu, a, b))
          return {false, "triple (" + std::to_string(nu) + ", " + std::to_string(a) + ", " + std::to_string(b) + ")"};
  return {true, "degrees <= 3"};
}

Outcome yoshida_constant_terms(long prec) {
  const auto cs = class_set(11, 1);
  const QuatForm e{cs, 0, {2, -3}}, one{cs, 0, {1, 1}};
  const auto cusp = yoshida_lift(e, e, prec);
  if (!cusp.at({0, 0, 0}).is_zero()) return {false, "a(0) of the cuspidal lift"};
  const auto eis = yoshida_lift(one, one, prec);
  if (eis.at({0, 0, 0}).coefficient({0, 0}) != Rational(25, 144)) return {false, "a(0) of the constant lift"};
  for (const auto& [t, p] : cusp.coeffs) {
    if (t.n1 + t.n2 > prec) continue;
    const HalfIntMatrix swapped{t.n2, t.m2, t.n1};
    if (cusp.at(swapped) != p) return {false, "swap symmetry"};
  }
  return {true, "trace <= " + std::to_string(prec)};
}

Outcome period_eleven() {
  const auto cs = class_set(11, 1);
  const QuatForm e{cs, 0, {2, -3}};
  const auto r = period_sums(e, e, e, e, 0, 0);
  Rational cubic = 0;
  for (const auto& x : e.values) cubic += x * x * x;
  if (r.s1 != cubic || r.s1 != -19 || r.product != 361) return {false, "S = " + rat(r.s1)};
  return {true, "S = -19 on both routes"};
}

Outcome gate_uniqueness() {
  for (long level : {14L, 15L}) {
    const auto ps = prime_factors(level);
    for (unsigned mask = 0; mask < (1u << (3 * ps.size())); ++mask) {
      SignData s;
      s.level = level;
      for (std::size_t k = 0; k < ps.size(); ++k) {
        auto bit = [&](unsigned b) { return (mask >> (3 * k + b)) & 1u ? -1 : 1; };
        s.shared[ps[k]] = bit(0);
        s.first[ps[k]] = bit(1);
        s.second[ps[k]] = bit(2);
      }
      int passing = 0;
      for (long d : admissible_discriminants(level)) passing += sign_gate(s, d);
      if (passing > 1 || (passing == 1) != (s.global_product() == -1))
        return {false, "level " + std::to_string(level) + " pattern " + std::to_string(mask)};
    }
  }
  return {true, "levels 14 and 15, all patterns"};
}

Outcome eisenstein_orthogonality() {
  const auto cs = class_set(11, 1);
  const QuatForm e{cs, 0, {2, -3}}, one{cs, 0, {1, 1}};
  if (degenerate_eisenstein(e, e, one, {true, true}).product != 0) return {false, "distinct pair"};
  if (degenerate_eisenstein(e, e, e, {true, true}).product == 0) return {false, "equal pair"};
  return {true, "vanishes exactly for distinct forms"};
}

Outcome z12_tests() {
  for (int k = 2; k <= 4; ++k)
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 2; ++b)
        for (int r = 0; r <= 2; ++r) {
          Rational fact = 1;
          for (int i = 2; i <= r; ++i) fact *= i;
          if (projection_poly(k, a, b, r).z12_test() != fact)
            return {false, "(k, a, b, r) = (" + std::to_string(k) + ", " + std::to_string(a) + ", " + std::to_string(b) +
                               ", " + std::to_string(r) + ")"};
        }
  return {true, "k <= 4, a + b <= 2, r <= 2"};
}

Outcome satake_identities(unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> prime_pick(0, 4), weight_pick(1, 3), num(-9, 9), den(1, 5);
  const long primes[] = {2, 3, 5, 7, 11};
  for (int trial = 0; trial < 20; ++trial) {
    const long p = primes[prime_pick(rng)];
    int k1 = 2 * weight_pick(rng), k2 = 2 * weight_pick(rng);
    if (k1 < k2) std::swap(k1, k2);
    auto satake = [&](int k) {
      int n = 0;
      while (n == 0) n = num(rng);
      const Rational alpha = make_rational(n, den(rng));
      return SatakeParams::from_roots(p, alpha, pow(Rational(p), k - 1) / alpha);
    };
    const auto h1 = satake(k1), h2 = satake(k2);
    if (!spin_split_check(h1, k1, h2, k2) || !sym2_identity_check(h1, k1, h2, k2))
      return {false, "trial " + std::to_string(trial)};
  }
  return {true, "20 random datasets"};
}

Outcome numeric(long double value, long double expected, double tol) {
  const long double err = std::fabs(value - expected);
  char buf[96];
  std::snprintf(buf, sizeof buf, "error %.3Le against tolerance %.3e", err, tol);
  return {err <= tol, buf};
}

Outcome zeta_two(double tol) {
  LData z;
  for (long p : primes_up_to(2000)) z.factors[p] = EulerFactor{p, {1, -1}, 0};
  z.gamma_shifts = {0};
  z.poles = {{1.0, 1.0}, {0.0, -1.0}};
  const auto v = central_value(z, {2.0, 1.0, std::max(tol, 1e-15)});
  return numeric(v.value, std::acos(-1.0L) * std::acos(-1.0L) / 6, tol);
}

Outcome eleven_at_one(const NewformRecord& f, double tol) {
  const auto v = central_value(gl2_data(f, f.max_prime()), {0.5, 1.0, std::max(tol, 1e-15)});
  return numeric(v.value, 0.25384186085591068434L, tol);
}

Outcome pipeline_eleven(const JobConfig& base) {
  JobConfig c = base;
  c.command = "period";
  c.labels = {"11a", "11a", "11a", "11a"};
  c.level = 11;
  c.weighting = PeriodWeighting::Plain;
  c.lvalues = false;
  const auto r = run_pipeline(c);
  if (!r.choice.disc || *r.choice.disc != 11) return {false, "selected discriminant"};
  if (r.report.product != 361 && r.report.product != -361) return {false, "S1 S2 = " + rat(r.report.product)};
  return {true, "|S1 S2| = 361 at discriminant 11"};
}

Outcome cache_roundtrip(const JobConfig& c) {
  const auto dir = std::filesystem::temp_directory_path() / ("quatperiod-verify-" + std::to_string(c.seed));
  std::filesystem::remove_all(dir);
  const Cache cache(dir.string());
  const auto cs = class_set(11, 1);
  const Json cold = eigen_json(cs, 0, 13, cache), warm = eigen_json(cs, 0, 13, cache);
  const auto files = std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator());
  std::filesystem::remove_all(dir);
  if (files != 1) return {false, "cache file not written"};
  return {cold.dump() == warm.dump(), "cold and warm eigen data"};
}

}  // namespace

std::vector<Check> verify(const JobConfig& config) {
  config.validate();
  const auto records = load_newforms(config);
  const NewformRecord& f11 = find_newform(records, "11a");
  const long pmax = std::min(config.pmax, f11.max_prime());
  std::vector<Check> out;
  auto run = [&](const std::string& module, const std::string& name, const std::string& kind,
                 const std::function<Outcome()>& fn) {
    Check c{module, name, false, kind, ""};
    try {
      const Outcome o = fn();
      c.passed = o.passed;
      c.detail = o.detail;
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(c);
  };
  run("lattice", "Z^4 theta series", "logic", [] {
    const auto t = theta_coeffs(IntLattice(QMatrix::identity(4), QMatrix::identity(4).scaled(2)), std::nullopt, 2);
    return Outcome{t.at(0) == 1 && t.at(1) == 8 && t.at(2) == 24, "1 + 8q + 24q^2"};
  });
  run("quatalg", "Hurwitz order units", "logic", [] {
    const auto cs = class_set(2, 1);
    return Outcome{cs->size() == 1 && cs->unit_counts()[0] == 24, "24 units"};
  });
  run("orders", "mass formula", "logic", mass_formula);
  run("harmonics", "trilinear forms exist exactly on balanced triples", "logic", balance);
  run("brandt", "level 11 eigenvalues", "logic", [&] { return level_eleven(f11, pmax); });
  run("brandt", "theta lift proportional to the newform", "logic", [&] { return theta_proportional(f11); });
  run("yoshida", "constant terms and swap symmetry", "logic",
      [&] { return yoshida_constant_terms(std::min<long>(config.prec, 4)); });
  run("periods", "level 11 period sum", "logic", period_eleven);
  run("periods", "sign gate uniqueness", "logic", gate_uniqueness);
  run("periods", "Eisenstein degenerate case", "logic", eisenstein_orthogonality);
  run("diffop", "z12 normalization", "logic", z12_tests);
  run("lseries", "Euler factor identities", "logic", [&] { return satake_identities(config.seed); });
  run("lseries", "zeta(2)", "tolerance", [&] { return zeta_two(config.tolerance); });
  run("lseries", "L(11a, 1)", "tolerance", [&] { return eleven_at_one(f11, config.tolerance); });
  run("cli", "level 11 pipeline", "logic", [&] { return pipeline_eleven(config); });
  run("cli", "cache round trip", "logic", [&] { return cache_roundtrip(config); });
  return out;
}

}  // namespace quatperiod
