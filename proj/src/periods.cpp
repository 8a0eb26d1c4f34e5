#include "quatperiod/periods.hpp"

#include <algorithm>

namespace quatperiod {

int SignData::product(long p) const {
  auto sign = [&](const std::map<long, int>& m) {
    auto it = m.find(p);
    if (it == m.end() || (it->second != 1 && it->second != -1)) throw ArgumentError("missing or invalid sign at " + std::to_string(p));
    return it->second;
  };
  return sign(shared) * sign(first) * sign(second);
}

int SignData::global_product() const {
  int s = 1;
  for (long p : prime_factors(level)) s *= product(p);
  return s;
}

std::vector<long> admissible_discriminants(long level) {
  if (level < 1 || !is_squarefree(level)) throw ArgumentError("level must be squarefree");
  const auto ps = prime_factors(level);
  std::vector<long> out;
  for (unsigned mask = 1; mask < (1u << ps.size()); ++mask) {
    if (__builtin_popcount(mask) % 2 == 0) continue;
    long d = 1;
    for (std::size_t k = 0; k < ps.size(); ++k)
      if (mask & (1u << k)) d *= ps[k];
    out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool sign_gate(const SignData& signs, long n1) {
  if (n1 < 1 || signs.level % n1 != 0 || prime_factors(n1).size() % 2 == 0) return false;
  for (long p : prime_factors(signs.level))
    if (signs.product(p) != (n1 % p == 0 ? -1 : 1)) return false;
  return true;
}

AlgebraChoice select_algebra(const SignData& signs) {
  if (signs.global_product() == 1) return {std::nullopt, "sign +1 => central value zero"};
  for (long d : admissible_discriminants(signs.level))
    if (sign_gate(signs, d)) return {d, "ramified where the sign product is -1"};
  throw StructuralError("global sign -1 but no discriminant passes the gate");
}

std::string to_string(Vanishing v) {
  switch (v) {
    case Vanishing::None: return "none";
    case Vanishing::SignGate: return "sign-gate";
    case Vanishing::WeightGate: return "weight-gate";
    case Vanishing::Unbalanced: return "unbalanced";
    case Vanishing::NumericZero: return "numeric-zero";
  }
  return "unknown";
}

std::map<long, int> involution_signs(const QuatForm& phi) {
  const ClassSet& cs = *phi.classes;
  std::map<long, int> out;
  for (long p : prime_factors(cs.order().level())) {
    const QVector image = atkin_lehner(cs, p, phi.nu).apply(phi.values);
    int s = 0;
    if (image == phi.values) {
      s = 1;
    } else {
      QVector neg = phi.values;
      for (auto& x : neg) x = -x;
      if (image == neg) s = -1;
    }
    out[p] = s;
  }
  return out;
}

Rational trilinear_sum(const QuatForm& phi, const QuatForm& psi1, const QuatForm& psi2, bool weighted) {
  if (phi.classes != psi1.classes || phi.classes != psi2.classes) throw ArgumentError("forms live on different class sets");
  const ClassSet& cs = *phi.classes;
  const auto& t = trilinear_form(cs.algebra(), phi.nu, psi1.nu, psi2.nu);
  if (t.is_zero()) return 0;
  Rational s = 0;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    Rational v = t.on_coordinates(phi.value(j), psi1.value(j), psi2.value(j));
    if (weighted) v /= cs.unit_counts()[j];
    s += v;
  }
  return s;
}

PeriodReport period_sums(const QuatForm& phi1, const QuatForm& phi2, const QuatForm& psi1, const QuatForm& psi2,
                         int alpha1, int alpha2, const PeriodOptions& options) {
  for (const QuatForm* f : {&phi2, &psi1, &psi2})
    if (f->classes != phi1.classes) throw ArgumentError("forms live on different class sets");
  const ClassSet& cs = *phi1.classes;
  PeriodReport r;
  r.disc = cs.order().n1;
  r.n2 = cs.order().n2;
  r.nu1 = phi1.nu;
  r.nu2 = phi2.nu;
  r.alpha1 = alpha1;
  r.alpha2 = alpha2;
  r.weighted = options.weighted;
  const int shift = r.nu1 - r.nu2;
  r.k1 = alpha1 + shift + 2;
  r.k2 = alpha2 + shift + 2;
  auto vanish = [&](Vanishing v) {
    r.s1 = r.s2 = r.product = r.proxy = 0;
    r.vanishing = v;
    return r;
  };
  const int a1 = alpha1 + shift, a2 = alpha2 + shift;
  if (alpha1 < 0 || alpha2 < 0 || alpha1 + alpha2 != 2 * r.nu2 || a1 < 0 || a2 < 0 || a1 % 2 != 0 || a2 % 2 != 0 ||
      psi1.nu != a1 / 2 || psi2.nu != a2 / 2)
    return vanish(Vanishing::WeightGate);
  if (!balanced(r.nu1, psi1.nu, psi2.nu) || !balanced(r.nu2, psi1.nu, psi2.nu)) return vanish(Vanishing::Unbalanced);
  if (options.use_gate) {
    const auto s1 = involution_signs(phi1), s2 = involution_signs(phi2), t1 = involution_signs(psi1),
               t2 = involution_signs(psi2);
    for (const auto& [p, e] : s1) {
      const int prod1 = e * t1.at(p) * t2.at(p), prod2 = s2.at(p) * t1.at(p) * t2.at(p);
      if (prod1 == 0 || prod2 == 0) {
        r.gate_skipped = true;
        continue;
      }
      if (prod1 == -1 || prod2 == -1) return vanish(Vanishing::SignGate);
    }
  }
  r.s1 = trilinear_sum(phi1, psi1, psi2, options.weighted);
  r.s2 = trilinear_sum(phi2, psi1, psi2, options.weighted);
  r.product = r.s1 * r.s2;
  r.proxy = r.product * r.product;
  if (r.product == 0) r.vanishing = Vanishing::NumericZero;
  return r;
}

PeriodReport degenerate_eisenstein(const QuatForm& phi1, const QuatForm& psi1, const QuatForm& psi2,
                                   const PeriodOptions& options) {
  const ClassSet& cs = *phi1.classes;
  QuatForm eis{phi1.classes, 0, QVector(cs.size(), Rational(1) / cs.mass())};
  return period_sums(phi1, eis, psi1, psi2, 0, 0, options);
}

PeriodReport klingen_case(const QuatForm& phi, const QuatForm& psi1, const QuatForm& psi2, const PeriodOptions& options) {
  // With nu1 = nu2 the shifted degrees are the alphas themselves.
  return period_sums(phi, phi, psi1, psi2, 2 * psi1.nu, 2 * psi2.nu, options);
}

std::optional<QuatForm> find_eigenform(const std::shared_ptr<const ClassSet>& cs, int nu, const std::map<long, long>& ap,
                                       const std::map<long, int>& signs) {
  long pmax = 2;
  for (const auto& [p, a] : ap) pmax = std::max(pmax, p);
  const long level = cs->order().level();
  for (const auto& f : eigenforms(*cs, nu, pmax)) {
    if (!f.supported || !f.rational()) continue;
    bool match = true;
    for (const auto& [p, a] : ap) {
      if (level % p == 0) continue;
      auto it = f.hecke.find(p);
      if (it != f.hecke.end() && it->second != QuadSurd::rational(Rational(a), 1)) match = false;
    }
    for (const auto& [p, s] : signs) {
      auto it = f.atkin_lehner.find(p);
      if (it != f.atkin_lehner.end() && it->second != s) match = false;
    }
    if (match) return QuatForm{cs, nu, f.rational_values()};
  }
  return std::nullopt;
}

}  // namespace quatperiod
