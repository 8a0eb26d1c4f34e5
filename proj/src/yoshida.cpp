#include "quatperiod/yoshida.hpp"

namespace quatperiod {

namespace {

struct LatticePoint {
  QVector coords;   // lattice coordinates
  QVector ambient;  // quaternion coordinates
  long norm;
};

std::vector<LatticePoint> points_up_to(const IntLattice& l, long prec) {
  std::vector<LatticePoint> out;
  out.push_back({QVector(l.rank(), Rational(0)), QVector(l.ambient_dim(), Rational(0)), 0});
  for_each_short_vector(l, prec, [&](const std::vector<long>& x, const Rational& n) {
    out.push_back({QVector(x.begin(), x.end()), l.to_ambient(x), to_long_checked(n)});
  });
  return out;
}

Poly x_monomial(int a1, int a2, const Rational& c) { return Poly::monomial({a1, a2}, c); }

}  // namespace

Poly FourierTable::at(const HalfIntMatrix& t) const {
  auto it = coeffs.find(t);
  return it == coeffs.end() ? Poly(2) : it->second;
}

FourierTable yoshida_lift(const QuatForm& phi1, const QuatForm& phi2, long prec) {
  if (!phi1.classes || phi1.classes != phi2.classes) throw ArgumentError("forms live on different class sets");
  const int nu1 = phi1.nu, nu2 = phi2.nu;
  if (nu1 < nu2 || (nu1 - nu2) % 2 != 0) throw ArgumentError("the lift needs nu1 >= nu2 with nu1 - nu2 even");
  if (prec < 0) throw ArgumentError("negative precision");
  const ClassSet& cs = *phi1.classes;
  const auto& alg = cs.algebra();
  FourierTable table;
  table.nu1 = nu1;
  table.nu2 = nu2;
  table.prec = prec;

  // Admissible exponents with their kernels.
  struct Part {
    int alpha1, alpha2;
    const CoefficientKernel* kernel;
    const HarmonicSpace* h1;
    const HarmonicSpace* h2;
  };
  std::vector<Part> parts;
  for (int a1 = 0; a1 <= 2 * nu2; ++a1) {
    const int a2 = 2 * nu2 - a1;
    if ((a1 + nu1 - nu2) % 2 != 0) continue;
    const auto& k = coefficient_kernel(alg, nu1, nu2, a1, a2);
    if (k.zero) continue;
    parts.push_back({a1, a2, &k, &harmonic_space(alg, Domain::Full, k.deg1), &harmonic_space(alg, Domain::Full, k.deg2)});
  }
  const std::size_t r = cs.size();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const QVector v1 = phi1.value(i), v2 = phi2.value(j);
      QMatrix q(v1.size(), v2.size());
      bool nonzero = false;
      for (std::size_t s = 0; s < v1.size(); ++s)
        for (std::size_t t = 0; t < v2.size(); ++t) {
          q(s, t) = v1[s] * v2[t];
          nonzero = nonzero || q(s, t) != 0;
        }
      if (!nonzero) continue;
      const IntLattice& conn = cs.connecting(i, j);
      const Rational weight = pow(conn.scale(), nu1) / (cs.unit_counts()[i] * cs.unit_counts()[j]);
      const auto pts = points_up_to(conn, prec);
      for (const auto& part : parts) {
        const QMatrix k = part.kernel->kernel_for(q);
        if (k.is_zero()) continue;
        // Basis values at every point, and the kernel applied on the right.
        std::vector<QVector> left(pts.size()), right(pts.size());
        for (std::size_t n = 0; n < pts.size(); ++n) {
          QVector a(part.h1->dim()), b(part.h2->dim());
          for (std::size_t m = 0; m < a.size(); ++m) a[m] = part.h1->basis[m].evaluate(pts[n].ambient);
          for (std::size_t m = 0; m < b.size(); ++m) b[m] = part.h2->basis[m].evaluate(pts[n].ambient);
          left[n] = a;
          right[n] = k.apply(b);
        }
        for (std::size_t n1 = 0; n1 < pts.size(); ++n1)
          for (std::size_t n2 = 0; n2 < pts.size(); ++n2) {
            if (pts[n1].norm + pts[n2].norm > prec) continue;
            const Rational c = dot(left[n1], right[n2]);
            if (c == 0) continue;
            const Rational m2 = dot(pts[n1].coords, conn.gram().apply(pts[n2].coords));
            HalfIntMatrix t{pts[n1].norm, to_long_checked(m2), pts[n2].norm};
            auto [it, inserted] = table.coeffs.try_emplace(t, Poly(2));
            it->second += x_monomial(part.alpha1, part.alpha2, weight * c);
          }
      }
    }
  for (auto it = table.coeffs.begin(); it != table.coeffs.end();)
    it = it->second.is_zero() ? table.coeffs.erase(it) : std::next(it);
  return table;
}

std::map<std::pair<long, long>, Rational> diagonal_restriction(const FourierTable& table, int alpha1, int alpha2) {
  if (alpha1 < 0 || alpha2 < 0 || alpha1 + alpha2 != 2 * table.nu2)
    throw ArgumentError("restriction exponents must sum to 2 nu2");
  std::map<std::pair<long, long>, Rational> out;
  for (long n1 = 0; n1 <= table.prec; ++n1)
    for (long n2 = 0; n1 + n2 <= table.prec; ++n2) out[{n1, n2}] = 0;
  for (const auto& [t, p] : table.coeffs) out[{t.n1, t.n2}] += p.coefficient({alpha1, alpha2});
  return out;
}

bool unimodular_check(const FourierTable& table, const std::array<long, 4>& u, const HalfIntMatrix& t) {
  const long det = u[0] * u[3] - u[1] * u[2];
  if (det != 1 && det != -1) throw ArgumentError("matrix is not unimodular");
  // U^t T U with T = [[n1, m2/2], [m2/2, n2]], U = [[u0, u1], [u2, u3]].
  const long n1 = u[0] * u[0] * t.n1 + u[0] * u[2] * t.m2 + u[2] * u[2] * t.n2;
  const long n2 = u[1] * u[1] * t.n1 + u[1] * u[3] * t.m2 + u[3] * u[3] * t.n2;
  const long m2 = 2 * u[0] * u[1] * t.n1 + (u[0] * u[3] + u[1] * u[2]) * t.m2 + 2 * u[2] * u[3] * t.n2;
  const HalfIntMatrix moved{n1, m2, n2};
  if (t.trace() > table.prec || moved.trace() > table.prec) throw ArgumentError("index outside the computed precision");
  QMatrix sub(2, 2);
  sub(0, 0) = u[0];
  sub(0, 1) = u[1];
  sub(1, 0) = u[2];
  sub(1, 1) = u[3];
  const Poly lhs = table.at(moved);
  Poly rhs = table.at(t).linear_substitute(sub);
  const int e = table.nu1 - table.nu2 + 2;
  if (e % 2 != 0 && det < 0) rhs = -rhs;
  return lhs == rhs;
}

}  // namespace quatperiod
