#include "quatperiod/diffop.hpp"

#include <mutex>
#include <tuple>

namespace quatperiod {

namespace {

constexpr int kV1 = 0, kV12 = 1, kV2 = 2, kX1 = 3, kX2 = 4;
// Variables of test functions for the equivariance system.
constexpr int kZ1 = 0, kZ12 = 1, kZ2 = 2;

Poly var(int i) { return Poly::variable(FormalExpansion::kVars, i); }

Poly index_form(const HalfIntMatrix& t) {
  return (var(kX1) * var(kX1)).scaled(t.n1) + (var(kX1) * var(kX2)).scaled(t.m2) + (var(kX2) * var(kX2)).scaled(t.n2);
}

// D on the V entries: D V = -V X^t X V.
Poly d_nearly(const Poly& c) {
  const Poly vx1 = var(kV1) * var(kX1) + var(kV12) * var(kX2);
  const Poly vx2 = var(kV12) * var(kX1) + var(kV2) * var(kX2);
  return -(c.derivative(kV1) * vx1 * vx1 + c.derivative(kV12) * vx1 * vx2 + c.derivative(kV2) * vx2 * vx2);
}

FormalExpansion cleaned(FormalExpansion f) {
  for (auto it = f.terms.begin(); it != f.terms.end();)
    it = it->second.is_zero() ? f.terms.erase(it) : std::next(it);
  return f;
}

Rational falling(long top, int count) {
  Rational r = 1;
  for (int i = 0; i < count; ++i) r *= top - i;
  return r;
}

Poly nth_derivative(Poly p, int v, int times) {
  for (int i = 0; i < times && !p.is_zero(); ++i) p = p.derivative(v);
  return p;
}

// u1^i u12^j u2^m, z12 = 0, then the X1^e1 X2^e2 coefficient; result in (z1, z2).
Poly apply_monomial(const Poly& f, const Monomial& kappa, int e1, int e2) {
  Poly out(2);
  const int i = kappa[0], j = kappa[1], m = kappa[2];
  const int x1 = e1 - 2 * i - j, x2 = e2 - j - 2 * m;
  if (x1 < 0 || x2 < 0) return out;
  Poly g = nth_derivative(nth_derivative(nth_derivative(f, kZ1, i), kZ12, j), kZ2, m);
  for (const auto& [mono, c] : g.terms())
    if (mono[kZ12] == 0 && mono[3] == x1 && mono[4] == x2) out.add_term({mono[kZ1], mono[kZ2]}, c);
  return out;
}

// Infinitesimal slash by [[1, 0], [C, 1]] with C = E_11 (first factor) or E_22 (second factor)
// on C[X1, X2]-valued functions of weight k: the derivative of det(CZ+1)^-k F((Z(CZ+1)^-1))(X (CZ+1)^-1).
Poly siegel_lowering(const Poly& f, int k, int factor) {
  const Poly z1 = Poly::variable(5, kZ1), z12 = Poly::variable(5, kZ12), z2 = Poly::variable(5, kZ2);
  const Poly x1 = Poly::variable(5, 3), x2 = Poly::variable(5, 4);
  if (factor == 0)
    return -((z1 * f).scaled(k) + z1 * z1 * f.derivative(kZ1) + z1 * z12 * f.derivative(kZ12) +
             z12 * z12 * f.derivative(kZ2) + x1 * z1 * f.derivative(3) + x1 * z12 * f.derivative(4));
  return -((z2 * f).scaled(k) + z12 * z12 * f.derivative(kZ1) + z12 * z2 * f.derivative(kZ12) +
           z2 * z2 * f.derivative(kZ2) + x2 * z12 * f.derivative(3) + x2 * z2 * f.derivative(4));
}

// The same generator on scalar functions of (z1, z2) with weight w in the chosen variable.
Poly lowering(const Poly& f, int w, int factor) {
  const Poly z = Poly::variable(2, factor);
  return -((z * f).scaled(w) + z * z * f.derivative(factor));
}

}  // namespace

int FormalExpansion::nearly_holomorphic_degree() const {
  int d = 0;
  for (const auto& [t, p] : terms)
    for (const auto& [m, c] : p.terms()) d = std::max(d, m[kV1] + m[kV12] + m[kV2]);
  return d;
}

FormalExpansion operator+(const FormalExpansion& a, const FormalExpansion& b) {
  if (a.prec != b.prec) throw ArgumentError("expansions truncated differently");
  FormalExpansion out = a;
  for (const auto& [t, p] : b.terms) {
    auto [it, inserted] = out.terms.try_emplace(t, Poly(FormalExpansion::kVars));
    it->second += p;
  }
  return cleaned(out);
}

FormalExpansion scaled(const FormalExpansion& f, const Rational& c) {
  FormalExpansion out = f;
  for (auto& [t, p] : out.terms) p = p.scaled(c);
  return cleaned(out);
}

FormalExpansion maass_n(const FormalExpansion& f) {
  const Poly vx = var(kV1) * var(kX1) * var(kX1) + (var(kV12) * var(kX1) * var(kX2)).scaled(2) +
                  var(kV2) * var(kX2) * var(kX2);
  FormalExpansion out = f;
  for (auto& [t, p] : out.terms) p = vx * p;
  return cleaned(out);
}

FormalExpansion maass_d(const FormalExpansion& f) {
  FormalExpansion out = f;
  for (auto& [t, p] : out.terms) p = index_form(t) * p + d_nearly(p);
  return cleaned(out);
}

FormalExpansion maass_delta(long w, const FormalExpansion& f) { return scaled(maass_n(f), w) + maass_d(f); }

FormalExpansion delta_iterate(long w, int r, const FormalExpansion& f) {
  if (r < 0) throw ArgumentError("negative iterate");
  std::vector<FormalExpansion> d_powers{f};
  for (int i = 1; i <= r; ++i) d_powers.push_back(maass_d(d_powers.back()));
  FormalExpansion out;
  out.prec = f.prec;
  for (int i = 0; i <= r; ++i) {
    FormalExpansion term = d_powers[static_cast<std::size_t>(r - i)];
    for (int n = 0; n < i; ++n) term = maass_n(term);
    Rational binom = 1;
    for (int n = 0; n < i; ++n) binom = binom * (r - n) / (n + 1);
    out = out + scaled(term, falling(w + r - 1, i) * binom);
  }
  return out;
}

Poly DiffOperator::apply(const Poly& f) const {
  if (f.nvars() != 5) throw ArgumentError("operator input must be a polynomial in (z1, z12, z2, X1, X2)");
  Poly out(2);
  for (const auto& [kappa, c] : coeffs)
    out += apply_monomial(f, Monomial(kappa.begin(), kappa.end()), a + r, b + r).scaled(c);
  return out;
}

Rational DiffOperator::z12_test() const {
  const Poly test = Poly::monomial({0, r, 0, a, b});
  return apply(test).coefficient({0, 0});
}

std::vector<Monomial> live_monomials(int a, int b, int r) {
  std::vector<Monomial> out;
  for (const auto& m : monomials_of_degree(3, r))
    if (a + r - 2 * m[0] - m[1] >= 0 && b + r - m[1] - 2 * m[2] >= 0) out.push_back(m);
  return out;
}

QMatrix equivariant_operators(int k, int a, int b, int r) {
  if (a < 0 || b < 0 || r < 0) throw ArgumentError("operator parameters must be nonnegative");
  const auto kappas = live_monomials(a, b, r);
  const int l = a + b, e1 = a + r, e2 = b + r;
  const int w1 = k + a + r, w2 = k + b + r;
  std::vector<QVector> rows;
  for (int deg = 0; deg <= r + 2; ++deg)
    for (const auto& zm : monomials_of_degree(3, deg))
      for (int alpha = 0; alpha <= l; ++alpha) {
        const Poly f = Poly::monomial({zm[0], zm[1], zm[2], alpha, l - alpha});
        for (int factor = 0; factor < 2; ++factor) {
          const Poly moved = siegel_lowering(f, k, factor);
          std::map<Monomial, QVector> eqs;
          for (std::size_t c = 0; c < kappas.size(); ++c) {
            const Poly res = apply_monomial(moved, kappas[c], e1, e2) -
                             lowering(apply_monomial(f, kappas[c], e1, e2), factor == 0 ? w1 : w2, factor);
            for (const auto& [m, v] : res.terms()) {
              auto [it, inserted] = eqs.try_emplace(m, QVector(kappas.size(), Rational(0)));
              it->second[c] += v;
            }
          }
          for (auto& [m, row] : eqs) rows.push_back(std::move(row));
        }
      }
  QMatrix system(rows.size(), kappas.size());
  for (std::size_t i = 0; i < rows.size(); ++i) system.set_row(i, rows[i]);
  if (rows.empty()) return QMatrix::identity(kappas.size());
  return kernel(system);
}

const DiffOperator& projection_poly(int k, int a, int b, int r) {
  if (k < 2) throw ArgumentError("differential operators need k >= 2");
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int, int>, DiffOperator> cache;
  const auto key = std::make_tuple(k, a, b, r);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const QMatrix sol = equivariant_operators(k, a, b, r);
  if (sol.rows() != 1) throw StructuralError("equivariant operator is not unique");
  const auto kappas = live_monomials(a, b, r);
  DiffOperator op{k, a, b, r, {}};
  for (std::size_t c = 0; c < kappas.size(); ++c)
    if (sol(0, c) != 0) op.coeffs[{kappas[c][0], kappas[c][1], kappas[c][2]}] = sol(0, c);
  const Rational t = op.z12_test();
  if (t == 0) throw StructuralError("equivariant operator vanishes on the z12 test function");
  Rational fact = 1;
  for (int i = 2; i <= r; ++i) fact *= i;
  for (auto& [kappa, c] : op.coeffs) c *= fact / t;
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(op)).first->second;
}

Poly q_poly(const DiffOperator& op, const HalfIntMatrix& t) {
  Poly out(2);
  for (const auto& [kappa, c] : op.coeffs) {
    const auto [i, j, m] = kappa;
    out.add_term({2 * i + j, j + 2 * m}, c * pow(Rational(t.n1), i) * pow(Rational(t.m2), j) * pow(Rational(t.n2), m));
  }
  return out;
}

std::map<std::pair<long, long>, Rational> apply_to_table(const DiffOperator& op, const FourierTable& table, int alpha1,
                                                         int alpha2) {
  if (alpha1 != op.a || alpha2 != op.b || alpha1 + alpha2 != 2 * table.nu2 || op.k != table.nu1 - table.nu2 + 2)
    throw ArgumentError("operator weights do not match the Fourier table");
  std::map<std::pair<long, long>, Rational> out;
  for (long n1 = 0; n1 <= table.prec; ++n1)
    for (long n2 = 0; n1 + n2 <= table.prec; ++n2) out[{n1, n2}] = 0;
  for (const auto& [t, p] : table.coeffs)
    out[{t.n1, t.n2}] += (q_poly(op, t) * p).coefficient({op.a + op.r, op.b + op.r});
  return out;
}

}  // namespace quatperiod
