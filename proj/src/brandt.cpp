#include "quatperiod/brandt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace quatperiod {

namespace {

const HarmonicSpace& space_for(const ClassSet& cs, int nu) {
  if (nu < 0) throw ArgumentError("weight must be nonnegative");
  return harmonic_space(cs.algebra(), Domain::TraceZero, nu);
}

void add_block(QMatrix& m, std::size_t i, std::size_t j, const QMatrix& block, const Rational& c) {
  const std::size_t d = block.rows();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t s = 0; s < d; ++s)
      if (block(r, s) != 0) m(i * d + r, j * d + s) += c * block(r, s);
}

QMatrix stack(const std::vector<QVector>& rows, std::size_t n) {
  QMatrix m(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

// Rows of `basis` combined by the kernel of `constraint * basis^T`.
QMatrix restrict_rows(const QMatrix& basis, const QMatrix& constraint) {
  if (constraint.rows() == 0 || basis.rows() == 0) return basis;
  QMatrix c = kernel(constraint * basis.transpose());
  return c * basis;
}

QVector primitive(QVector v) {
  const Integer den = lcm_of_denominators(v);
  for (auto& x : v) x *= den;
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, Integer(x.get_num()));
  if (g != 0)
    for (auto& x : v) x /= g;
  for (const auto& x : v)
    if (x != 0) {
      if (x < 0)
        for (auto& y : v) y = -y;
      break;
    }
  return v;
}

// M with op * W^T = W^T * M for a row basis W of an invariant subspace.
QMatrix restrict_operator(const QMatrix& op, const QMatrix& w) {
  const QMatrix wt = w.transpose();
  const QMatrix left = inverse(w * wt) * w;
  return left * op * wt;
}

QMatrix poly_of_matrix(const UPoly& p, const QMatrix& m) {
  QMatrix out(m.rows(), m.cols());
  for (std::size_t k = p.size(); k-- > 0;) out = out * m + QMatrix::identity(m.rows()).scaled(p[k]);
  return out;
}

std::pair<UPoly, UPoly> divmod(UPoly a, const UPoly& b) {
  UPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, Rational(0));
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
    const std::size_t shift = a.size() - b.size();
    const Rational c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= c * b[k];
    a = upoly_trim(a);
    if (a.size() < b.size() || shift == 0) break;
  }
  return {upoly_trim(q), upoly_trim(a)};
}

bool is_zero_poly(const UPoly& p) { return p.empty() || (p.size() == 1 && p[0] == 0); }

std::vector<std::complex<long double>> numeric_roots(const UPoly& p) {
  const std::size_t n = p.size() - 1;
  std::vector<long double> c(n + 1);
  for (std::size_t k = 0; k <= n; ++k) c[k] = static_cast<long double>(Rational(p[k] / p[n]).get_d());
  auto eval = [&](std::complex<long double> z) {
    std::complex<long double> v = 0;
    for (std::size_t k = n + 1; k-- > 0;) v = v * z + c[k];
    return v;
  };
  std::vector<std::complex<long double>> z(n);
  const std::complex<long double> seed(0.4L, 0.9L);
  z[0] = 1;
  for (std::size_t k = 1; k < n; ++k) z[k] = z[k - 1] * seed;
  long double radius = 1;
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, 1 + std::abs(c[k]));
  for (auto& x : z) x *= radius / 2;
  for (int iter = 0; iter < 2000; ++iter) {
    long double change = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<long double> den = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const auto step = eval(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15L) break;
  }
  return z;
}

bool integral_poly(const UPoly& p) {
  return std::all_of(p.begin(), p.end(), [](const Rational& c) { return is_integral(c); });
}

long squarefree_part(const Integer& disc, Integer& square_root_of_rest) {
  Integer d = disc;
  Integer s = 1;
  for (long f = 2; Integer(f) * f <= d; ++f)
    while (d % (f * f) == 0) {
      d /= f * f;
      s *= f;
    }
  square_root_of_rest = s;
  return to_long_checked(d);
}

QuadSurd ratio(const std::vector<QuadSurd>& num, const std::vector<QuadSurd>& den) {
  for (std::size_t k = 0; k < den.size(); ++k)
    if (!den[k].is_zero()) return num[k] / den[k];
  throw StructuralError("zero eigenvector");
}

std::vector<QuadSurd> apply_surd(const QMatrix& op, const QVector& a, const QVector& b, long d) {
  QVector ta = op.apply(a), tb = op.apply(b);
  std::vector<QuadSurd> out;
  for (std::size_t k = 0; k < ta.size(); ++k) out.emplace_back(ta[k], tb[k], d);
  return out;
}

struct Operators {
  std::vector<long> hecke_primes;
  std::vector<QMatrix> hecke;
  std::vector<long> al_primes;
  std::vector<QMatrix> al;
};

void emit_rational(const QVector& v, const Operators& ops, bool essential, std::vector<Eigenform>& out) {
  Eigenform f;
  f.essential = essential;
  const QVector pv = primitive(v);
  for (const auto& x : pv) f.values.push_back(QuadSurd::rational(x, 1));
  const std::vector<QuadSurd> vs = f.values;
  for (std::size_t k = 0; k < ops.hecke.size(); ++k) {
    QVector tv = ops.hecke[k].apply(pv);
    std::vector<QuadSurd> ts;
    for (const auto& x : tv) ts.push_back(QuadSurd::rational(x, 1));
    f.hecke[ops.hecke_primes[k]] = ratio(ts, vs);
  }
  for (std::size_t k = 0; k < ops.al.size(); ++k) {
    QVector tv = ops.al[k].apply(pv);
    std::vector<QuadSurd> ts;
    for (const auto& x : tv) ts.push_back(QuadSurd::rational(x, 1));
    f.atkin_lehner[ops.al_primes[k]] = to_long(floor_of(ratio(ts, vs).a()));
  }
  out.push_back(std::move(f));
}

// Splits the invariant subspace with row basis w into simultaneous eigenspaces.
void decompose(const QMatrix& w, const Operators& ops, bool essential, int attempt, std::vector<Eigenform>& out) {
  if (w.rows() == 0) return;
  std::vector<QMatrix> restricted;
  for (const auto& t : ops.hecke) restricted.push_back(restrict_operator(t, w));
  for (const auto& t : ops.al) restricted.push_back(restrict_operator(t, w));
  QMatrix l(w.rows(), w.rows());
  for (std::size_t k = 0; k < restricted.size(); ++k) {
    const long c = static_cast<long>(1 + (k * (k + 3 + 2 * static_cast<std::size_t>(attempt))) % 17);
    l = l + restricted[k].scaled(c);
  }
  const UPoly chi = characteristic_polynomial(l);
  const SmallFactorization fac = factor_small(chi);
  auto handle_multiple = [&](const QMatrix& sub_coords, const UPoly& factor) {
    QMatrix sub = sub_coords * w;
    if (attempt < 4) {
      decompose(sub, ops, essential, attempt + 1, out);
      return;
    }
    // Every operator is scalar on a persistent multiple eigenspace.
    if (factor.size() == 2) {
      for (std::size_t r = 0; r < sub.rows(); ++r) emit_rational(sub.row(r), ops, essential, out);
    } else {
      Eigenform f;
      f.essential = essential;
      f.supported = false;
      f.minimal_polynomial = factor;
      out.push_back(std::move(f));
    }
  };
  std::vector<UPoly> linear = fac.linear;
  std::sort(linear.begin(), linear.end(), [](const UPoly& a, const UPoly& b) { return a[0] > b[0]; });
  linear.erase(std::unique(linear.begin(), linear.end()), linear.end());
  for (const auto& f : linear) {
    QMatrix k = kernel(poly_of_matrix(f, l));
    if (k.rows() == 1) {
      emit_rational(w.transpose().apply(k.row(0)), ops, essential, out);
    } else {
      handle_multiple(k, f);
    }
  }
  std::vector<UPoly> quadratic = fac.quadratic;
  quadratic.erase(std::unique(quadratic.begin(), quadratic.end()), quadratic.end());
  for (const auto& f : quadratic) {
    QMatrix k = kernel(poly_of_matrix(f, l));
    if (k.rows() != 2) {
      handle_multiple(k, f);
      continue;
    }
    // f = x^2 + b x + c, roots (-b +- s sqrt(d)) / 2.
    const Rational b = f[1], c = f[0];
    const Rational disc = b * b - 4 * c;
    if (!is_integral(disc) || disc <= 0) {
      Eigenform e;
      e.essential = essential;
      e.supported = false;
      e.minimal_polynomial = f;
      out.push_back(std::move(e));
      continue;
    }
    Integer s;
    const long d = squarefree_part(Integer(disc.get_num()), s);
    const QVector wk = k.row(0);
    // v = (L - conj(lambda)) w = L w + (b/2) w + (s/2) sqrt(d) w
    QVector ra = l.apply(wk);
    QVector rb(wk.size());
    for (std::size_t i = 0; i < wk.size(); ++i) {
      ra[i] += b / 2 * wk[i];
      rb[i] = Rational(s) / 2 * wk[i];
    }
    for (int sign : {1, -1}) {
      QVector a = w.transpose().apply(ra);
      QVector bb = w.transpose().apply(rb);
      if (sign < 0)
        for (auto& x : bb) x = -x;
      QVector both = a;
      both.insert(both.end(), bb.begin(), bb.end());
      const Integer den = lcm_of_denominators(both);
      Integer g = 0;
      for (const auto& x : both) g = gcd(g, Integer(Rational(x * den).get_num()));
      const Rational scale = Rational(den) / Rational(g);
      for (auto& x : a) x *= scale;
      for (auto& x : bb) x *= scale;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 || bb[i] != 0) {
          if (a[i] < 0 || (a[i] == 0 && bb[i] < 0)) {
            for (auto& x : a) x = -x;
            for (auto& x : bb) x = -x;
          }
          break;
        }
      Eigenform e;
      e.essential = essential;
      e.field = d;
      e.minimal_polynomial = f;
      for (std::size_t i = 0; i < a.size(); ++i) e.values.emplace_back(a[i], bb[i], d);
      for (std::size_t q = 0; q < ops.hecke.size(); ++q)
        e.hecke[ops.hecke_primes[q]] = ratio(apply_surd(ops.hecke[q], a, bb, d), e.values);
      for (std::size_t q = 0; q < ops.al.size(); ++q)
        e.atkin_lehner[ops.al_primes[q]] = to_long(floor_of(ratio(apply_surd(ops.al[q], a, bb, d), e.values).a()));
      out.push_back(std::move(e));
    }
  }
  if (fac.rest.size() > 1) {
    Eigenform e;
    e.essential = essential;
    e.supported = false;
    e.minimal_polynomial = fac.rest;
    out.push_back(std::move(e));
  }
}

}  // namespace

QVector QuatForm::value(std::size_t i) const {
  const std::size_t d = block();
  if ((i + 1) * d > values.size()) throw ArgumentError("class index out of range");
  return QVector(values.begin() + static_cast<long>(i * d), values.begin() + static_cast<long>((i + 1) * d));
}

Poly QuatForm::value_poly(std::size_t i) const {
  return harmonic_space(classes->algebra(), Domain::TraceZero, nu).from_coordinates(value(i));
}

QMatrix form_space_basis(const ClassSet& cs, int nu) {
  const auto& sp = space_for(cs, nu);
  const std::size_t d = sp.dim(), r = cs.size();
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < r; ++i) {
    QMatrix local = QMatrix::identity(d);
    if (nu > 0) {
      std::vector<QVector> eqs;
      for (const auto& u : cs.units()[i]) {
        QMatrix t = tau_matrix(cs.algebra(), sp, u) - QMatrix::identity(d);
        for (std::size_t k = 0; k < d; ++k) eqs.push_back(t.row(k));
      }
      local = eqs.empty() ? QMatrix::identity(d) : kernel(row_space_basis(stack(eqs, d)));
    }
    for (std::size_t k = 0; k < local.rows(); ++k) {
      QVector v(r * d, Rational(0));
      for (std::size_t s = 0; s < d; ++s) v[i * d + s] = local(k, s);
      rows.push_back(v);
    }
  }
  return stack(rows, r * d);
}

QMatrix brandt_matrix(const ClassSet& cs, long p, int nu) {
  if (!is_prime(p)) throw ArgumentError("Hecke operators are indexed by primes");
  if (cs.order().level() % p == 0) throw ArgumentError("prime divides the level; use atkin_lehner");
  const auto& sp = space_for(cs, nu);
  const std::size_t d = sp.dim(), r = cs.size();
  QMatrix m(r * d, r * d);
  const Rational twist = pow(Rational(p), nu);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const IntLattice& conn = cs.connecting(i, j);
      QMatrix block(d, d);
      for_each_short_vector(conn, p, [&](const std::vector<long>& x, const Rational& n) {
        if (n != p) return;
        const Quaternion g = from_vector(conn.to_ambient(x));
        block = block + (nu == 0 ? QMatrix::identity(1) : tau_matrix(cs.algebra(), sp, g));
      });
      add_block(m, i, j, block, twist / cs.unit_counts()[j]);
    }
  return m;
}

QMatrix atkin_lehner(const ClassSet& cs, long p, int nu) {
  if (!is_prime(p) || cs.order().level() % p != 0) throw ArgumentError("Atkin-Lehner involutions need a prime dividing the level");
  const auto& sp = space_for(cs, nu);
  const std::size_t d = sp.dim(), r = cs.size();
  const IntLattice ideal = atkin_lehner_ideal(cs.order(), p);
  QMatrix m(r * d, r * d);
  for (std::size_t i = 0; i < r; ++i) {
    IntLattice prod = canonical_basis(lattice_product(cs.algebra(), cs.reps()[i], ideal));
    auto found = cs.find_class(prod);
    if (!found) throw StructuralError("Atkin-Lehner image has no class");
    const QMatrix block = nu == 0 ? QMatrix::identity(1) : tau_matrix(cs.algebra(), sp, found->second);
    add_block(m, i, found->first, block, 1);
  }
  return m;
}

QMatrix inner_product_matrix(const ClassSet& cs, int nu) {
  const auto& sp = space_for(cs, nu);
  const std::size_t d = sp.dim(), r = cs.size();
  QMatrix g(r * d, r * d);
  for (std::size_t i = 0; i < r; ++i) add_block(g, i, i, sp.gram, Rational(1, cs.unit_counts()[i]));
  return g;
}

Rational inner_product(const QuatForm& phi, const QuatForm& psi) {
  if (!phi.classes || phi.classes != psi.classes || phi.nu != psi.nu) throw ArgumentError("forms live on different spaces");
  const QMatrix g = inner_product_matrix(*phi.classes, phi.nu);
  return dot(phi.values, g.apply(psi.values));
}

QMatrix essential_basis(const ClassSet& cs, int nu) {
  const QMatrix inv = form_space_basis(cs, nu);
  const auto& sp = space_for(cs, nu);
  const std::size_t d = sp.dim(), r = cs.size();
  std::vector<QVector> old;
  auto maps = superorder_maps(cs);
  if (maps.empty()) {
    if (nu == 0) old.emplace_back(r, Rational(1));
  } else {
    for (const auto& mp : maps) {
      const QMatrix sup = form_space_basis(*mp.super, nu);
      std::vector<QMatrix> taus;
      for (std::size_t i = 0; i < r; ++i)
        taus.push_back(nu == 0 ? QMatrix::identity(1) : tau_matrix(cs.algebra(), sp, mp.gamma[i]));
      for (std::size_t k = 0; k < sup.rows(); ++k) {
        const QVector row = sup.row(k);
        QVector v(r * d, Rational(0));
        for (std::size_t i = 0; i < r; ++i) {
          const std::size_t t = mp.target[i];
          QVector src(row.begin() + static_cast<long>(t * d), row.begin() + static_cast<long>((t + 1) * d));
          QVector img = taus[i].apply(src);
          for (std::size_t s = 0; s < d; ++s) v[i * d + s] = img[s];
        }
        old.push_back(v);
      }
    }
  }
  if (old.empty()) return inv;
  const QMatrix constraint = stack(old, r * d) * inner_product_matrix(cs, nu);
  return restrict_rows(inv, constraint);
}

QVector Eigenform::rational_values() const {
  if (field != 1) throw ArgumentError("eigenform is not rational");
  QVector v;
  for (const auto& x : values) v.push_back(x.a());
  return v;
}

std::vector<Eigenform> eigenforms(const ClassSet& cs, int nu, long pmax) {
  Operators ops;
  const long level = cs.order().level();
  for (long p = 2; ops.hecke_primes.size() < 2 || p <= pmax; ++p) {
    if (!is_prime(p) || level % p == 0) continue;
    ops.hecke_primes.push_back(p);
    ops.hecke.push_back(brandt_matrix(cs, p, nu));
  }
  for (long p : prime_factors(level)) {
    ops.al_primes.push_back(p);
    ops.al.push_back(atkin_lehner(cs, p, nu));
  }
  const QMatrix ess = essential_basis(cs, nu);
  const QMatrix inv = form_space_basis(cs, nu);
  const QMatrix rest = restrict_rows(inv, ess * inner_product_matrix(cs, nu));
  std::vector<Eigenform> out;
  decompose(ess, ops, true, 0, out);
  decompose(rest.rows() == 0 ? QMatrix(0, inv.cols()) : row_space_basis(rest), ops, false, 0, out);
  return out;
}

std::vector<Rational> eichler_theta(const QuatForm& phi, long prec) {
  if (!phi.classes) throw ArgumentError("form without class set");
  if (prec < 0) throw ArgumentError("negative precision");
  const ClassSet& cs = *phi.classes;
  const auto& alg = cs.algebra();
  std::vector<Rational> a(static_cast<std::size_t>(prec + 1), Rational(0));
  const std::size_t r = cs.size();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const Rational w = Rational(1, cs.unit_counts()[i] * cs.unit_counts()[j]);
      if (phi.nu == 0) {
        const Rational c = phi.values[i] * phi.values[j] * w;
        if (c == 0) continue;
        a[0] += c;
        const IntLattice& conn = cs.connecting(i, j);
        for_each_short_vector(conn, prec, [&](const std::vector<long>&, const Rational& n) {
          a[static_cast<std::size_t>(to_long_checked(n.get_num()))] += c;
        });
        continue;
      }
      const Poly f = identify(alg, phi.value_poly(i), phi.value_poly(j));
      if (f.is_zero()) continue;
      const IntLattice& conn = cs.connecting(i, j);
      const Rational c = w * pow(conn.scale(), phi.nu);
      for_each_short_vector(conn, prec, [&](const std::vector<long>& x, const Rational& n) {
        a[static_cast<std::size_t>(to_long_checked(n.get_num()))] += c * f.evaluate(conn.to_ambient(x));
      });
    }
  return a;
}

SmallFactorization factor_small(const UPoly& p) {
  SmallFactorization out;
  UPoly rest;
  for (const auto& root : rational_roots(p, &rest)) out.linear.push_back({-root, 1});
  rest = upoly_trim(rest);
  while (rest.size() > 3 && integral_poly(rest)) {
    const auto roots = numeric_roots(rest);
    bool found = false;
    for (std::size_t i = 0; i < roots.size() && !found; ++i)
      for (std::size_t j = i + 1; j < roots.size() && !found; ++j) {
        const auto s = roots[i] + roots[j], pr = roots[i] * roots[j];
        if (std::abs(s.imag()) > 1e-6L || std::abs(pr.imag()) > 1e-6L) continue;
        const long double sr = std::round(s.real()), prr = std::round(pr.real());
        if (std::abs(sr - s.real()) > 1e-6L || std::abs(prr - pr.real()) > 1e-6L) continue;
        UPoly q{Rational(static_cast<long>(prr)), Rational(static_cast<long>(-sr)), 1};
        auto [quot, rem] = divmod(rest, q);
        if (!is_zero_poly(rem)) continue;
        out.quadratic.push_back(q);
        rest = quot;
        found = true;
      }
    if (!found) break;
  }
  if (rest.size() == 3) {
    out.quadratic.push_back(rest);
    rest = UPoly{1};
  }
  std::sort(out.quadratic.begin(), out.quadratic.end());
  out.rest = rest;
  return out;
}

}  // namespace quatperiod
