#include "quatperiod/harmonics.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace quatperiod {

namespace {

Rational factorial(int n) {
  Integer f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Rational(f);
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

QVector domain_form(const QuaternionAlgebra& alg, Domain d) {
  if (d == Domain::Full) return {1, -alg.a(), -alg.b(), alg.a() * alg.b()};
  return {-alg.a(), -alg.b(), alg.a() * alg.b()};
}

int domain_vars(Domain d) { return d == Domain::Full ? 4 : 3; }

// Diagonal Fischer pairing: sum_m P_m R_m prod_k m_k! / A_k^{m_k}.
Rational fischer_diag(const QVector& form, const Poly& p, const Poly& r) {
  Rational s = 0;
  const auto& small = p.terms().size() <= r.terms().size() ? p : r;
  const auto& big = p.terms().size() <= r.terms().size() ? r : p;
  for (const auto& [m, c] : small.terms()) {
    auto it = big.terms().find(m);
    if (it == big.terms().end()) continue;
    Rational w = c * it->second;
    for (std::size_t k = 0; k < m.size(); ++k)
      if (m[k]) w *= factorial(m[k]) / pow(form[k], m[k]);
    s += w;
  }
  return s;
}

// Polynomial-valued quaternion arithmetic for symbolic substitutions.
using PQuat = std::array<Poly, 4>;

PQuat pmul(const QuaternionAlgebra& alg, const PQuat& p, const PQuat& q) {
  const Rational a = alg.a(), b = alg.b(), ab = a * b;
  return {p[0] * q[0] + (p[1] * q[1]).scaled(a) + (p[2] * q[2]).scaled(b) - (p[3] * q[3]).scaled(ab),
          p[0] * q[1] + p[1] * q[0] - (p[2] * q[3]).scaled(b) + (p[3] * q[2]).scaled(b),
          p[0] * q[2] + p[2] * q[0] + (p[1] * q[3]).scaled(a) - (p[3] * q[1]).scaled(a),
          p[0] * q[3] + p[3] * q[0] + p[1] * q[2] - p[2] * q[1]};
}

using SpaceKey = std::tuple<std::string, std::string, int, int>;

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Rational HarmonicSpace::fischer(const Poly& p, const Poly& r) const { return fischer_diag(form, p, r); }

QVector HarmonicSpace::coordinates(const Poly& p) const {
  QVector pairings(basis.size());
  for (std::size_t s = 0; s < basis.size(); ++s) pairings[s] = inner(basis[s], p);
  return gram_inverse.apply(pairings);
}

Poly HarmonicSpace::from_coordinates(const QVector& c) const {
  Poly p(nvars);
  for (std::size_t s = 0; s < basis.size(); ++s)
    if (c[s] != 0) p += basis[s].scaled(c[s]);
  return p;
}

Poly norm_poly(const QuaternionAlgebra& alg, Domain domain) {
  const QVector f = domain_form(alg, domain);
  const int n = domain_vars(domain);
  Poly p(n);
  for (int k = 0; k < n; ++k) {
    Monomial m(static_cast<std::size_t>(n), 0);
    m[static_cast<std::size_t>(k)] = 2;
    p.add_term(m, f[static_cast<std::size_t>(k)]);
  }
  return p;
}

Poly laplacian(const QuaternionAlgebra& alg, Domain domain, const Poly& p) {
  const QVector f = domain_form(alg, domain);
  Poly out(p.nvars());
  for (int k = 0; k < p.nvars(); ++k)
    out += p.derivative(k).derivative(k).scaled(Rational(1) / f[static_cast<std::size_t>(k)]);
  return out;
}

QVector domain_point(Domain domain, const Quaternion& x) {
  if (domain == Domain::Full) return {x[0], x[1], x[2], x[3]};
  if (x[0] != 0) throw ArgumentError("trace-zero domain needs a pure quaternion");
  return {x[1], x[2], x[3]};
}

UPoly gegenbauer_1d(int alpha) {
  if (alpha < 0) throw ArgumentError("negative Gegenbauer degree");
  UPoly g(static_cast<std::size_t>(alpha + 1), Rational(0));
  for (int j = 0; 2 * j <= alpha; ++j) {
    Rational c = pow(Rational(2), alpha) * (j % 2 ? -1 : 1) * factorial(alpha - j) /
                 (factorial(j) * factorial(alpha - 2 * j) * pow(Rational(4), j));
    g[static_cast<std::size_t>(alpha - 2 * j)] = c;
  }
  return g;
}

Rational gegenbauer_kernel(const QuaternionAlgebra& alg, int alpha, const Quaternion& x, const Quaternion& xp) {
  const Rational nn = alg.norm(x) * alg.norm(xp);
  const Rational t = alg.trace(alg.mul(x, alg.conj(xp)));
  Rational s = 0;
  for (int j = 0; 2 * j <= alpha; ++j)
    s += (j % 2 ? -1 : 1) * factorial(alpha - j) / (factorial(j) * factorial(alpha - 2 * j)) * pow(nn, j) *
         pow(t, alpha - 2 * j);
  return pow(Rational(2), alpha) * s;
}

Rational trace_zero_kernel(const QuaternionAlgebra& alg, int nu, const Quaternion& x, const Quaternion& xp) {
  if (x[0] != 0 || xp[0] != 0) throw ArgumentError("trace-zero kernel needs pure quaternions");
  const Rational nn = alg.norm(x) * alg.norm(xp);
  const Rational bb = alg.trace(alg.mul(x, alg.conj(xp))) / 2;
  Rational s = 0;
  for (int j = 0; 2 * j <= nu; ++j)
    s += (j % 2 ? -1 : 1) * binomial(nu, j) * binomial(2 * nu - 2 * j, nu) * pow(nn, j) * pow(bb, nu - 2 * j);
  return s / pow(Rational(2), nu);
}

Poly kernel_poly(const QuaternionAlgebra& alg, Domain domain, int degree, const Quaternion& xp) {
  const QVector f = domain_form(alg, domain);
  const QVector pt = domain_point(domain, xp);
  const int n = domain_vars(domain);
  QVector lin(static_cast<std::size_t>(n));
  Rational nxp = 0;
  for (std::size_t k = 0; k < lin.size(); ++k) {
    lin[k] = f[k] * pt[k];
    nxp += f[k] * pt[k] * pt[k];
  }
  const Poly bil = Poly::linear(lin);  // B(x, x') with B(x, x) = n(x)
  const Poly nx = norm_poly(alg, domain);
  Poly out(n);
  if (domain == Domain::Full) {
    const Poly t = bil.scaled(2);
    for (int j = 0; 2 * j <= degree; ++j) {
      Rational c = (j % 2 ? -1 : 1) * factorial(degree - j) / (factorial(j) * factorial(degree - 2 * j)) *
                   pow(nxp, j) * pow(Rational(2), degree);
      out += (nx.pow(j) * t.pow(degree - 2 * j)).scaled(c);
    }
  } else {
    for (int j = 0; 2 * j <= degree; ++j) {
      Rational c = (j % 2 ? -1 : 1) * binomial(degree, j) * binomial(2 * degree - 2 * j, degree) * pow(nxp, j) /
                   pow(Rational(2), degree);
      out += (nx.pow(j) * bil.pow(degree - 2 * j)).scaled(c);
    }
  }
  return out;
}

const HarmonicSpace& harmonic_space(const QuaternionAlgebra& alg, Domain domain, int degree) {
  if (degree < 0) throw ArgumentError("negative harmonic degree");
  static std::map<SpaceKey, std::unique_ptr<HarmonicSpace>> cache;
  const SpaceKey key{to_string(alg.a()), to_string(alg.b()), domain == Domain::Full ? 1 : 0, degree};
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto space = std::make_unique<HarmonicSpace>();
  space->domain = domain;
  space->degree = degree;
  space->nvars = domain_vars(domain);
  space->form = domain_form(alg, domain);
  const auto mons = monomials_of_degree(space->nvars, degree);
  if (degree < 2) {
    for (const auto& m : mons) space->basis.push_back(Poly::monomial(m));
  } else {
    const auto lower = monomials_of_degree(space->nvars, degree - 2);
    QMatrix lap(lower.size(), mons.size());
    for (std::size_t c = 0; c < mons.size(); ++c) {
      QVector col = quatperiod::coordinates(laplacian(alg, domain, Poly::monomial(mons[c])), lower);
      for (std::size_t r = 0; r < lower.size(); ++r) lap(r, c) = col[r];
    }
    QMatrix ker = kernel(lap);
    for (std::size_t r = 0; r < ker.rows(); ++r) {
      // Clear denominators for tidier bases.
      QVector row = ker.row(r);
      const Integer den = lcm_of_denominators(row);
      for (auto& v : row) v *= den;
      space->basis.push_back(quatperiod::from_coordinates(row, mons));
    }
  }
  const Quaternion probe = domain == Domain::Full ? quat(1) : quat(0, 1);
  const Poly k = kernel_poly(alg, domain, degree, probe);
  const Rational kval = domain == Domain::Full ? gegenbauer_kernel(alg, degree, probe, probe)
                                               : trace_zero_kernel(alg, degree, probe, probe);
  space->normalization = kval / fischer_diag(space->form, k, k);
  const std::size_t d = space->basis.size();
  space->gram = QMatrix(d, d);
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t t = s; t < d; ++t) {
      space->gram(s, t) = space->inner(space->basis[s], space->basis[t]);
      space->gram(t, s) = space->gram(s, t);
    }
  space->gram_inverse = inverse(space->gram);
  for (std::size_t m = 0; m < d; ++m) space->dual.push_back(space->from_coordinates(space->gram_inverse.row(m)));
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto [it, inserted] = cache.emplace(key, std::move(space));
  return *it->second;
}

Poly tau_action(const QuaternionAlgebra& alg, const Quaternion& y, const Poly& p) {
  if (is_zero(y)) throw ArgumentError("tau action needs an invertible quaternion");
  if (p.nvars() != 3) throw ArgumentError("tau action acts on trace-zero polynomials");
  const Quaternion yi = alg.inverse(y);
  QMatrix mat(3, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    Quaternion e{0, 0, 0, 0};
    e[k + 1] = 1;
    Quaternion img = alg.mul(alg.mul(yi, e), y);
    for (std::size_t l = 0; l < 3; ++l) mat(l, k) = img[l + 1];
  }
  return p.linear_substitute(mat);
}

QMatrix tau_matrix(const QuaternionAlgebra& alg, const HarmonicSpace& space, const Quaternion& y) {
  if (space.domain != Domain::TraceZero) throw ArgumentError("tau acts on trace-zero spaces");
  const std::size_t d = space.dim();
  QMatrix m(d, d);
  if (space.degree == 0) {
    if (is_zero(y)) throw ArgumentError("tau action needs an invertible quaternion");
    m(0, 0) = 1;
    return m;
  }
  for (std::size_t c = 0; c < d; ++c) {
    QVector v = space.coordinates(tau_action(alg, y, space.basis[c]));
    for (std::size_t r = 0; r < d; ++r) m(r, c) = v[r];
  }
  return m;
}

Poly sandwich_substitute(const QuaternionAlgebra& alg, const Quaternion& g, const Quaternion& h, const Poly& p) {
  if (p.nvars() != 4) throw ArgumentError("sandwich substitution acts on full-space polynomials");
  QMatrix mat(4, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    Quaternion e{0, 0, 0, 0};
    e[k] = 1;
    Quaternion img = alg.mul(alg.mul(g, e), h);
    for (std::size_t l = 0; l < 4; ++l) mat(l, k) = img[l];
  }
  return p.linear_substitute(mat);
}

Poly identify(const QuaternionAlgebra& alg, const Poly& p, const Poly& r) {
  if (p.nvars() != 3 || r.nvars() != 3) throw ArgumentError("identify expects trace-zero polynomials");
  const int deg = p.degree();
  if (deg != r.degree() && !(p.is_zero() || r.is_zero())) throw ArgumentError("identify expects equal degrees");
  if (p.is_zero() || r.is_zero()) return Poly(4);
  // Variables: u1..u3 (0..2), x0..x3 (3..6).
  PQuat u{Poly(7), Poly::variable(7, 0), Poly::variable(7, 1), Poly::variable(7, 2)};
  PQuat x{Poly::variable(7, 3), Poly::variable(7, 4), Poly::variable(7, 5), Poly::variable(7, 6)};
  PQuat xbar{x[0], -x[1], -x[2], -x[3]};
  PQuat v = pmul(alg, pmul(alg, xbar, u), x);
  const Poly rv = r.compose({v[1], v[2], v[3]});
  const HarmonicSpace& space = harmonic_space(alg, Domain::TraceZero, deg);
  Poly out(4);
  for (const auto& [m, c] : rv.terms()) {
    Monomial um{m[0], m[1], m[2]};
    if (um[0] + um[1] + um[2] != deg) continue;
    const Rational pc = p.coefficient(um);
    if (pc == 0) continue;
    Rational w = pc * c * space.normalization;
    for (std::size_t k = 0; k < 3; ++k)
      if (um[k]) w *= factorial(um[k]) / pow(space.form[k], um[k]);
    out.add_term({m[3], m[4], m[5], m[6]}, w);
  }
  return out;
}

bool balanced(int nu, int a, int b) {
  return nu >= 0 && a >= 0 && b >= 0 && nu <= a + b && a <= nu + b && b <= nu + a;
}

TrilinearForm::TrilinearForm(const QuaternionAlgebra& alg, int nu, int a, int b) : nu_(nu), a_(a), b_(b) {
  if (nu < 0 || a < 0 || b < 0) throw ArgumentError("trilinear form degrees must be nonnegative");
  const auto& sn = harmonic_space(alg, Domain::TraceZero, nu);
  const auto& sa = harmonic_space(alg, Domain::TraceZero, a);
  const auto& sb = harmonic_space(alg, Domain::TraceZero, b);
  sn_ = &sn;
  sa_ = &sa;
  sb_ = &sb;
  dn_ = sn.dim();
  da_ = sa.dim();
  db_ = sb.dim();
  tensor_.assign(dn_ * da_ * db_, Rational(0));
  if (!balanced(nu, a, b)) return;
  const Poly n0 = norm_poly(alg, Domain::TraceZero);
  const QVector& form = sn.form;
  const bool even = (nu + a + b) % 2 == 0;
  const int k = even ? (a + b - nu) / 2 : (a + b - 1 - nu) / 2;
  std::vector<Poly> lifted;
  for (const auto& p : sn.basis) lifted.push_back(n0.pow(k) * p);
  auto grad = [&](const Poly& p) {
    std::array<Poly, 3> g;
    for (int i = 0; i < 3; ++i) g[static_cast<std::size_t>(i)] = p.derivative(i).scaled(Rational(1) / form[static_cast<std::size_t>(i)]);
    return g;
  };
  for (std::size_t t = 0; t < da_; ++t)
    for (std::size_t u = 0; u < db_; ++u) {
      Poly coupled(3);
      if (even) {
        coupled = sa.basis[t] * sb.basis[u];
      } else {
        auto g = grad(sa.basis[t]);
        auto h = grad(sb.basis[u]);
        const Poly x1 = Poly::variable(3, 0), x2 = Poly::variable(3, 1), x3 = Poly::variable(3, 2);
        coupled = x1 * (g[1] * h[2] - g[2] * h[1]) + x2 * (g[2] * h[0] - g[0] * h[2]) + x3 * (g[0] * h[1] - g[1] * h[0]);
      }
      for (std::size_t s = 0; s < dn_; ++s) {
        Rational v = fischer_diag(form, lifted[s], coupled);
        tensor_[(s * da_ + t) * db_ + u] = v;
        if (v != 0) zero_ = false;
      }
    }
}

const Rational& TrilinearForm::at(std::size_t s, std::size_t t, std::size_t u) const {
  return tensor_.at((s * da_ + t) * db_ + u);
}

Rational TrilinearForm::on_coordinates(const QVector& p, const QVector& q, const QVector& r) const {
  if (p.size() != dn_ || q.size() != da_ || r.size() != db_) throw ArgumentError("trilinear form dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < dn_; ++i) {
    if (p[i] == 0) continue;
    for (std::size_t j = 0; j < da_; ++j) {
      if (q[j] == 0) continue;
      Rational pq = p[i] * q[j];
      for (std::size_t k = 0; k < db_; ++k)
        if (r[k] != 0) s += pq * r[k] * tensor_[(i * da_ + j) * db_ + k];
    }
  }
  return s;
}

namespace {
std::map<std::tuple<std::string, std::string, int, int, int>, std::unique_ptr<TrilinearForm>>& trilinear_cache() {
  static std::map<std::tuple<std::string, std::string, int, int, int>, std::unique_ptr<TrilinearForm>> cache;
  return cache;
}
std::mutex& trilinear_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

const TrilinearForm& trilinear_form(const QuaternionAlgebra& alg, int nu, int a, int b) {
  const auto key = std::make_tuple(to_string(alg.a()), to_string(alg.b()), nu, a, b);
  {
    std::lock_guard<std::mutex> lock(trilinear_mutex());
    auto it = trilinear_cache().find(key);
    if (it != trilinear_cache().end()) return *it->second;
  }
  auto form = std::make_unique<TrilinearForm>(alg, nu, a, b);
  std::lock_guard<std::mutex> lock(trilinear_mutex());
  auto [it, inserted] = trilinear_cache().emplace(key, std::move(form));
  return *it->second;
}

Rational TrilinearForm::operator()(const Poly& p, const Poly& q, const Poly& r) const {
  return on_coordinates(sn_->coordinates(p), sa_->coordinates(q), sb_->coordinates(r));
}

QMatrix CoefficientKernel::kernel_for(const QMatrix& q) const {
  if (kernels.empty()) return QMatrix();
  QMatrix out(kernels[0].rows(), kernels[0].cols());
  const std::size_t d2 = q.cols();
  for (std::size_t s = 0; s < q.rows(); ++s)
    for (std::size_t t = 0; t < d2; ++t)
      if (q(s, t) != 0) out = out + kernels[s * d2 + t].scaled(q(s, t));
  return out;
}

namespace {

// Coordinates, in the pair basis (A_a (x) B_b) of U_beta^(0) (x) U_beta^(0), of each dual basis
// element of U_{2 beta}: row m, column a * dim + b.
QMatrix dual_in_pair_basis(const QuaternionAlgebra& alg, int deg) {
  const int beta = deg / 2;
  const auto& s0 = harmonic_space(alg, Domain::TraceZero, beta);
  const auto& full = harmonic_space(alg, Domain::Full, deg);
  const std::size_t d0 = s0.dim(), df = full.dim();
  if (d0 * d0 != df) throw StructuralError("dimension mismatch in the tensor identification");
  QMatrix f(df, df);  // column = pair, row = coordinate in the full basis
  for (std::size_t a = 0; a < d0; ++a)
    for (std::size_t b = 0; b < d0; ++b) {
      QVector c = full.coordinates(identify(alg, s0.basis[a], s0.basis[b]));
      for (std::size_t r = 0; r < df; ++r) f(r, a * d0 + b) = c[r];
    }
  QMatrix finv = inverse(f);
  QMatrix out(df, df);
  for (std::size_t m = 0; m < df; ++m) {
    // dual[m] has coordinates gram_inverse.row(m) in the basis.
    QVector pair = finv.apply(full.gram_inverse.row(m));
    out.set_row(m, pair);
  }
  return out;
}

}  // namespace

const CoefficientKernel& coefficient_kernel(const QuaternionAlgebra& alg, int nu1, int nu2, int alpha1, int alpha2) {
  using Key = std::tuple<std::string, std::string, int, int, int, int>;
  static std::map<Key, std::unique_ptr<CoefficientKernel>> cache;
  static std::mutex mutex;
  const Key key{to_string(alg.a()), to_string(alg.b()), nu1, nu2, alpha1, alpha2};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  if (nu1 < nu2) throw ArgumentError("coefficient kernel needs nu1 >= nu2");
  if (alpha1 < 0 || alpha2 < 0 || alpha1 + alpha2 != 2 * nu2)
    throw ArgumentError("coefficient kernel needs alpha1 + alpha2 = 2 nu2");
  if ((alpha1 + nu1 - nu2) % 2 != 0 || (alpha2 + nu1 - nu2) % 2 != 0)
    throw ArgumentError("coefficient kernel needs even shifted degrees");
  auto ck = std::make_unique<CoefficientKernel>();
  ck->nu1 = nu1;
  ck->nu2 = nu2;
  ck->alpha1 = alpha1;
  ck->alpha2 = alpha2;
  ck->deg1 = alpha1 + nu1 - nu2;
  ck->deg2 = alpha2 + nu1 - nu2;
  const auto& sp1 = harmonic_space(alg, Domain::TraceZero, nu1);
  const auto& sp2 = harmonic_space(alg, Domain::TraceZero, nu2);
  const auto& u1 = harmonic_space(alg, Domain::Full, ck->deg1);
  const auto& u2 = harmonic_space(alg, Domain::Full, ck->deg2);
  ck->kernels.assign(sp1.dim() * sp2.dim(), QMatrix(u1.dim(), u2.dim()));
  if (ck->deg1 % 2 == 0 && ck->deg2 % 2 == 0) {
    const int b1 = ck->deg1 / 2, b2 = ck->deg2 / 2;
    const auto& t1 = trilinear_form(alg, nu1, b1, b2);
    const auto& t2 = trilinear_form(alg, nu2, b1, b2);
    if (!t1.is_zero() && !t2.is_zero()) {
      ck->zero = false;
      const QMatrix h1 = dual_in_pair_basis(alg, ck->deg1);
      const QMatrix h2 = dual_in_pair_basis(alg, ck->deg2);
      const std::size_t e1 = harmonic_space(alg, Domain::TraceZero, b1).dim();
      const std::size_t e2 = harmonic_space(alg, Domain::TraceZero, b2).dim();
      for (std::size_t s = 0; s < sp1.dim(); ++s)
        for (std::size_t t = 0; t < sp2.dim(); ++t) {
          QMatrix& k = ck->kernels[s * sp2.dim() + t];
          // M[m][(b, c)] = sum_a h1[m][(a, b)] T1(s, a, c)
          for (std::size_t m = 0; m < u1.dim(); ++m) {
            std::vector<Rational> mid(e1 * e2, Rational(0));
            for (std::size_t a = 0; a < e1; ++a)
              for (std::size_t b = 0; b < e1; ++b) {
                const Rational& hv = h1(m, a * e1 + b);
                if (hv == 0) continue;
                for (std::size_t c = 0; c < e2; ++c) {
                  const Rational& tv = t1.at(s, a, c);
                  if (tv != 0) mid[b * e2 + c] += hv * tv;
                }
              }
            // N[(c, d)] = sum_b M[(b, c)] T2(t, b, d)
            std::vector<Rational> full(e2 * e2, Rational(0));
            for (std::size_t b = 0; b < e1; ++b)
              for (std::size_t c = 0; c < e2; ++c) {
                const Rational& mv = mid[b * e2 + c];
                if (mv == 0) continue;
                for (std::size_t d = 0; d < e2; ++d) {
                  const Rational& tv = t2.at(t, b, d);
                  if (tv != 0) full[c * e2 + d] += mv * tv;
                }
              }
            for (std::size_t mp = 0; mp < u2.dim(); ++mp) {
              Rational v = 0;
              for (std::size_t cd = 0; cd < e2 * e2; ++cd)
                if (full[cd] != 0) v += full[cd] * h2(mp, cd);
              k(m, mp) = v;
            }
          }
        }
    }
  }
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(ck));
  return *it->second;
}

Poly c_coeff(const QuaternionAlgebra& alg, const QMatrix& q, int nu1, int nu2, int alpha1, int alpha2) {
  if ((alpha1 + nu1 - nu2) % 2 != 0 || (alpha2 + nu1 - nu2) % 2 != 0)
    throw ArgumentError("c_coeff: shifted degrees must be even");
  const auto& ck = coefficient_kernel(alg, nu1, nu2, alpha1, alpha2);
  Poly out(8);
  if (ck.zero) return out;
  const QMatrix k = ck.kernel_for(q);
  const auto& u1 = harmonic_space(alg, Domain::Full, ck.deg1);
  const auto& u2 = harmonic_space(alg, Domain::Full, ck.deg2);
  for (std::size_t m = 0; m < u1.dim(); ++m) {
    Poly right(8);
    for (std::size_t mp = 0; mp < u2.dim(); ++mp)
      if (k(m, mp) != 0) right += embed(u2.basis[mp], 4, 8).scaled(k(m, mp));
    if (!right.is_zero()) out += embed(u1.basis[m], 0, 8) * right;
  }
  return out;
}

}  // namespace quatperiod
