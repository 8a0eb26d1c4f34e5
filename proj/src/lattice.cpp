#include "quatperiod/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace quatperiod {

IntLattice::IntLattice(QMatrix basis, QMatrix form, Rational scale)
    : basis_(std::move(basis)), form_(std::move(form)), scale_(std::move(scale)) {
  if (form_.rows() != form_.cols() || form_.rows() != basis_.cols())
    throw ArgumentError("lattice form does not match the ambient dimension");
  if (quatperiod::rank(basis_) != basis_.rows()) throw StructuralError("lattice basis is rank deficient");
  gram_ = (basis_ * form_ * basis_.transpose()).scaled(scale_);
  if (basis_.rows() == basis_.cols()) inverse_ = quatperiod::inverse(basis_);
}

Rational IntLattice::norm_of(const QVector& v) const {
  return scale_ * dot(v, form_.apply(v)) / 2;
}

QVector IntLattice::to_ambient(const std::vector<long>& coords) const {
  QVector c(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) c[i] = coords[i];
  return basis_.left_apply(c);
}

QVector IntLattice::to_coordinates(const QVector& ambient) const {
  if (inverse_.rows() > 0) return inverse_.left_apply(ambient);
  return solve_left(basis_, ambient);
}

bool IntLattice::contains(const QVector& ambient) const {
  QVector c;
  try {
    c = to_coordinates(ambient);
  } catch (const StructuralError&) {
    return false;
  }
  if (basis_.left_apply(c) != ambient) return false;
  return std::all_of(c.begin(), c.end(), [](const Rational& r) { return is_integral(r); });
}

Rational IntLattice::determinant() const {
  if (basis_.rows() == basis_.cols()) {
    Rational d = quatperiod::determinant(basis_);
    return d * d;
  }
  return quatperiod::determinant(basis_ * basis_.transpose());
}

bool IntLattice::operator==(const IntLattice& o) const {
  return scale_ == o.scale_ && form_ == o.form_ && canonical_basis(*this).basis_ == canonical_basis(o).basis_;
}

IntLattice canonical_basis(const IntLattice& lattice) {
  const QMatrix& b = lattice.basis();
  std::vector<Rational> entries;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) entries.push_back(b(i, j));
  const Integer den = lcm_of_denominators(entries);
  ZMatrix z = to_integer_matrix(b.scaled(Rational(den)));
  ZMatrix h = hermite_normal_form(z);
  if (h.rows() != b.rows()) throw StructuralError("lattice basis is rank deficient");
  return IntLattice(to_rational_matrix(h).scaled(Rational(1) / Rational(den)), lattice.form(), lattice.scale());
}

IntLattice lattice_sum(const IntLattice& a, const IntLattice& b) {
  if (a.form() != b.form() || a.scale() != b.scale()) throw ArgumentError("lattices live in different spaces");
  QMatrix stacked(a.basis().rows() + b.basis().rows(), a.ambient_dim());
  for (std::size_t i = 0; i < a.basis().rows(); ++i) stacked.set_row(i, a.basis().row(i));
  for (std::size_t i = 0; i < b.basis().rows(); ++i) stacked.set_row(a.basis().rows() + i, b.basis().row(i));
  std::vector<Rational> entries;
  for (std::size_t i = 0; i < stacked.rows(); ++i)
    for (std::size_t j = 0; j < stacked.cols(); ++j) entries.push_back(stacked(i, j));
  const Integer den = lcm_of_denominators(entries);
  ZMatrix h = hermite_normal_form(to_integer_matrix(stacked.scaled(Rational(den))));
  return IntLattice(to_rational_matrix(h).scaled(Rational(1) / Rational(den)), a.form(), a.scale());
}

bool is_positive_definite(const QMatrix& gram) {
  if (gram.rows() != gram.cols()) return false;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (gram(i, j) != gram(j, i)) return false;
  for (std::size_t k = 1; k <= gram.rows(); ++k) {
    QMatrix minor(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = gram(i, j);
    if (quatperiod::determinant(minor) <= 0) return false;
  }
  return true;
}

namespace {

// q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2 for the quadratic form gram/2.
struct Decomposition {
  std::vector<Rational> d;
  QMatrix mu;
};

Decomposition decompose(const QMatrix& gram) {
  const std::size_t n = gram.rows();
  QMatrix a = gram.scaled(Rational(1, 2));
  Decomposition dec{std::vector<Rational>(n), QMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) <= 0) throw StructuralError("quadratic form is not positive definite");
    dec.d[i] = a(i, i);
    for (std::size_t j = i + 1; j < n; ++j) dec.mu(i, j) = a(i, j) / a(i, i);
    for (std::size_t r = i + 1; r < n; ++r)
      for (std::size_t c = i + 1; c < n; ++c) a(r, c) -= dec.mu(i, r) * a(i, c);
  }
  return dec;
}

struct Enumerator {
  const Decomposition& dec;
  const std::function<void(const std::vector<long>&, const Rational&)>& visit;
  Rational bound;
  std::vector<long> x;
  std::size_t n;

  void recurse(std::size_t level_plus_one, const Rational& used) {
    if (level_plus_one == 0) {
      bool nonzero = std::any_of(x.begin(), x.end(), [](long v) { return v != 0; });
      if (nonzero) visit(x, used);
      return;
    }
    const std::size_t i = level_plus_one - 1;
    Rational c = 0;
    for (std::size_t j = i + 1; j < n; ++j)
      if (x[j]) c += dec.mu(i, j) * x[j];
    const Rational remaining = bound - used;
    const double s = std::sqrt(std::max(0.0, Rational(remaining / dec.d[i]).get_d()));
    const double cd = c.get_d();
    long lo = static_cast<long>(std::ceil(-cd - s)) - 2;
    long hi = static_cast<long>(std::floor(-cd + s)) + 2;
    for (long v = lo; v <= hi; ++v) {
      Rational t = c + v;
      Rational add = dec.d[i] * t * t;
      if (add > remaining) continue;
      x[i] = v;
      recurse(i, used + add);
    }
    x[i] = 0;
  }
};

}  // namespace

void for_each_short_vector(const IntLattice& lattice, const Rational& bound,
                           const std::function<void(const std::vector<long>&, const Rational&)>& visit) {
  if (bound < 0) throw ArgumentError("negative norm bound");
  const Decomposition dec = decompose(lattice.gram());
  Enumerator e{dec, visit, bound, std::vector<long>(lattice.rank(), 0), lattice.rank()};
  e.recurse(lattice.rank(), Rational(0));
}

std::vector<ShortVector> short_vectors(const IntLattice& lattice, const Rational& bound) {
  std::vector<ShortVector> out;
  for_each_short_vector(lattice, bound, [&](const std::vector<long>& x, const Rational& n) {
    out.push_back({x, n});
  });
  std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) { return a.coords < b.coords; });
  return out;
}

std::map<long, Rational> theta_coeffs(const IntLattice& lattice, const std::optional<Poly>& weight, long prec) {
  if (prec < 0) throw ArgumentError("negative precision");
  std::map<long, Rational> out;
  for (long n = 0; n <= prec; ++n) out[n] = 0;
  const QVector zero(lattice.ambient_dim(), Rational(0));
  out[0] = weight ? weight->evaluate(zero) : Rational(1);
  for_each_short_vector(lattice, Rational(prec), [&](const std::vector<long>& x, const Rational& n) {
    if (!is_integral(n)) return;
    const long key = to_long(n.get_num());
    out[key] += weight ? weight->evaluate(lattice.to_ambient(x)) : Rational(1);
  });
  return out;
}

}  // namespace quatperiod
