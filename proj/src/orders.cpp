#include "quatperiod/orders.hpp"

#include <algorithm>
#include <numeric>

namespace quatperiod {

namespace {

QMatrix rows_of(const std::vector<Quaternion>& gens) {
  QMatrix m(gens.size(), 4);
  for (std::size_t r = 0; r < gens.size(); ++r)
    for (std::size_t c = 0; c < 4; ++c) m(r, c) = gens[r][c];
  return m;
}

// Hermite basis of the Z-span of arbitrary rational rows (rank must be full).
QMatrix span_basis(const QMatrix& rows) {
  std::vector<Rational> entries;
  for (std::size_t i = 0; i < rows.rows(); ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) entries.push_back(rows(i, j));
  const Integer den = lcm_of_denominators(entries);
  ZMatrix h = hermite_normal_form(to_integer_matrix(rows.scaled(Rational(den))));
  return to_rational_matrix(h).scaled(Rational(1) / Rational(den));
}

Rational rational_sqrt(const Rational& r) {
  if (r < 0 || !is_square(r.get_num()) || !is_square(r.get_den()))
    throw StructuralError("expected a rational square, got " + to_string(r));
  return make_rational(isqrt(r.get_num()), isqrt(r.get_den()));
}

QMatrix trace_form(const QuaternionAlgebra& alg, const std::vector<Quaternion>& b) {
  QMatrix t(b.size(), b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i; j < b.size(); ++j) {
      t(i, j) = alg.trace(alg.mul(b[i], b[j]));
      t(j, i) = t(i, j);
    }
  return t;
}

bool integral_elements(const QuaternionAlgebra& alg, const std::vector<Quaternion>& b) {
  for (const auto& x : b)
    if (!is_integral(alg.trace(x)) || !is_integral(alg.norm(x))) return false;
  QMatrix t = trace_form(alg, b);
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j)
      if (!is_integral(t(i, j))) return false;
  return true;
}

// Smallest ring containing the lattice, or nullopt once non-integral elements appear.
std::optional<IntLattice> ring_closure(const QuaternionAlgebra& alg, IntLattice l) {
  for (int round = 0; round < 32; ++round) {
    auto b = lattice_elements(l);
    if (!integral_elements(alg, b)) return std::nullopt;
    std::vector<Quaternion> extra;
    for (const auto& x : b)
      for (const auto& y : b) {
        Quaternion p = alg.mul(x, y);
        if (!l.contains(to_vector(p))) extra.push_back(p);
      }
    if (extra.empty()) return l;
    std::vector<Quaternion> all = b;
    all.insert(all.end(), extra.begin(), extra.end());
    l = quaternion_lattice(alg, all);
  }
  return std::nullopt;
}

std::vector<std::vector<long>> residue_vectors(long p, bool projective) {
  std::vector<std::vector<long>> out;
  std::vector<long> c(4, 0);
  const long total = p * p * p * p;
  for (long n = 1; n < total; ++n) {
    long t = n;
    for (int k = 3; k >= 0; --k) {
      c[static_cast<std::size_t>(k)] = t % p;
      t /= p;
    }
    if (projective) {
      auto first = std::find_if(c.begin(), c.end(), [](long v) { return v != 0; });
      if (*first != 1) continue;
    }
    out.push_back(c);
  }
  return out;
}

Quaternion combine(const std::vector<Quaternion>& b, const std::vector<long>& c) {
  Quaternion x{0, 0, 0, 0};
  for (std::size_t k = 0; k < b.size(); ++k)
    if (c[k]) x = x + Rational(c[k]) * b[k];
  return x;
}

IntLattice right_multiple(const QuaternionAlgebra& alg, const Quaternion& alpha, const IntLattice& order) {
  std::vector<Quaternion> gens;
  for (const auto& r : lattice_elements(order)) gens.push_back(alg.mul(alpha, r));
  return quaternion_lattice(alg, gens);
}

}  // namespace

IntLattice quaternion_lattice(const QuaternionAlgebra& alg, const std::vector<Quaternion>& gens) {
  return IntLattice(span_basis(rows_of(gens)), alg.norm_form());
}

std::vector<Quaternion> lattice_elements(const IntLattice& l) {
  std::vector<Quaternion> out;
  for (std::size_t r = 0; r < l.basis().rows(); ++r) out.push_back(from_vector(l.basis().row(r)));
  return out;
}

IntLattice lattice_product(const QuaternionAlgebra& alg, const IntLattice& a, const IntLattice& b) {
  std::vector<Quaternion> gens;
  const auto ea = lattice_elements(a), eb = lattice_elements(b);
  for (const auto& x : ea)
    for (const auto& y : eb) gens.push_back(alg.mul(x, y));
  return quaternion_lattice(alg, gens);
}

IntLattice conjugate_lattice(const QuaternionAlgebra& alg, const IntLattice& a) {
  std::vector<Quaternion> gens;
  for (const auto& x : lattice_elements(a)) gens.push_back(alg.conj(x));
  return quaternion_lattice(alg, gens);
}

IntLattice scale_lattice(const IntLattice& a, const Rational& s) {
  return IntLattice(a.basis().scaled(s), a.form(), a.scale());
}

IntLattice lattice_intersection(const IntLattice& a, const IntLattice& b) {
  // A ∩ B = (A* + B*)* for the coordinate pairing.
  QMatrix da = inverse(a.basis()).transpose();
  QMatrix db = inverse(b.basis()).transpose();
  QMatrix stacked(8, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    stacked.set_row(i, da.row(i));
    stacked.set_row(4 + i, db.row(i));
  }
  QMatrix sum = span_basis(stacked);
  return IntLattice(span_basis(inverse(sum).transpose()), a.form(), a.scale());
}

IntLattice trace_dual(const QuaternionAlgebra& alg, const IntLattice& a) {
  QMatrix t = trace_form(alg, lattice_elements(a));
  return IntLattice(span_basis(inverse(t) * a.basis()), a.form(), a.scale());
}

Rational covolume(const IntLattice& l) { return abs(determinant(l.basis())); }

Integer reduced_discriminant(const QuaternionAlgebra& alg, const IntLattice& order) {
  const Rational d = abs(determinant(trace_form(alg, lattice_elements(order))));
  const Rational s = rational_sqrt(d);
  if (!is_integral(s)) throw StructuralError("lattice is not an order (non-integral discriminant)");
  return s.get_num();
}

bool is_order(const QuaternionAlgebra& alg, const IntLattice& lattice) {
  if (!lattice.contains({1, 0, 0, 0})) return false;
  auto b = lattice_elements(lattice);
  if (!integral_elements(alg, b)) return false;
  for (const auto& x : b)
    for (const auto& y : b)
      if (!lattice.contains(to_vector(alg.mul(x, y)))) return false;
  return true;
}

EichlerOrder maximal_order(const QuaternionAlgebra& alg) {
  if (!alg.definite()) throw ArgumentError("maximal_order expects a definite algebra");
  if (!is_integral(alg.a()) || !is_integral(alg.b()))
    throw ArgumentError("maximal_order expects integral structure constants");
  const long n1 = alg.discriminant();
  IntLattice order = quaternion_lattice(alg, {quat(1), quat(0, 1), quat(0, 0, 1), quat(0, 0, 0, 1)});
  for (;;) {
    const Integer d = reduced_discriminant(alg, order);
    if (d == n1) break;
    if (d % n1 != 0) throw StructuralError("order discriminant is not a multiple of the algebra discriminant");
    const Integer index = d / n1;
    bool grown = false;
    for (long ell : prime_factors(to_long(index))) {
      auto b = lattice_elements(order);
      for (const auto& c : residue_vectors(ell, false)) {
        Quaternion x = Rational(1, ell) * combine(b, c);
        if (!is_integral(alg.trace(x)) || !is_integral(alg.norm(x))) continue;
        std::vector<Quaternion> gens = b;
        gens.push_back(x);
        auto closed = ring_closure(alg, quaternion_lattice(alg, gens));
        if (closed) {
          order = canonical_basis(*closed);
          grown = true;
          break;
        }
      }
      if (grown) break;
    }
    if (!grown) throw StructuralError("failed to enlarge a non-maximal order");
  }
  order = canonical_basis(order);
  return EichlerOrder{alg, order, n1, 1, order, {}};
}

EichlerOrder eichler_order(const EichlerOrder& maximal, long n2) {
  if (n2 < 1 || !is_squarefree(n2)) throw ArgumentError("Eichler level must be squarefree");
  if (std::gcd(n2, maximal.n1) != 1) throw ArgumentError("Eichler level must be coprime to the discriminant");
  if (maximal.n2 != 1) throw ArgumentError("eichler_order expects a maximal order");
  const auto& alg = maximal.algebra;
  EichlerOrder out = maximal;
  out.n2 = n2;
  if (n2 == 1) return out;
  const IntLattice& o = maximal.lattice;
  const auto basis = lattice_elements(o);
  IntLattice r = o;
  for (long p : prime_factors(n2)) {
    std::optional<IntLattice> ideal;
    for (const auto& c : residue_vectors(p, true)) {
      Quaternion alpha = combine(basis, c);
      if (!is_integral(alg.norm(alpha) / p)) continue;
      IntLattice j = lattice_sum(right_multiple(alg, alpha, o), scale_lattice(o, p));
      if (covolume(j) == covolume(o) * p * p) {
        ideal = j;
        break;
      }
    }
    if (!ideal) throw StructuralError("no ideal of norm p found in the maximal order");
    IntLattice other = canonical_basis(left_order(alg, *ideal, p));
    out.local_maximal.emplace(p, other);
    r = lattice_intersection(r, other);
  }
  out.lattice = canonical_basis(r);
  if (reduced_discriminant(alg, out.lattice) != maximal.n1 * n2)
    throw StructuralError("constructed Eichler order has the wrong discriminant");
  return out;
}

std::vector<EichlerOrder> superorders(const EichlerOrder& order, long p) {
  if (order.n2 % p != 0) throw ArgumentError("superorders: p must divide the Eichler level");
  const long m = order.n2 / p;
  std::vector<EichlerOrder> out;
  for (const IntLattice* big : {&order.maximal, &order.local_maximal.at(p)}) {
    IntLattice l = canonical_basis(lattice_sum(order.lattice, scale_lattice(*big, m)));
    EichlerOrder e{order.algebra, l, order.n1, m, *big, {}};
    if (reduced_discriminant(order.algebra, l) != order.n1 * m)
      throw StructuralError("superorder has the wrong discriminant");
    out.push_back(std::move(e));
  }
  return out;
}

IntLattice atkin_lehner_ideal(const EichlerOrder& order, long p) {
  if (order.level() % p != 0) throw ArgumentError("Atkin-Lehner ideal needs p | N");
  const auto& alg = order.algebra;
  IntLattice dual = trace_dual(alg, order.lattice);
  IntLattice ideal = canonical_basis(lattice_intersection(order.lattice, scale_lattice(dual, p)));
  if (covolume(ideal) != covolume(order.lattice) * p * p)
    throw StructuralError("Atkin-Lehner ideal has the wrong index");
  return ideal;
}

Rational ideal_norm(const IntLattice& ideal, const IntLattice& order) {
  return rational_sqrt(covolume(ideal) / covolume(order));
}

IntLattice left_order(const QuaternionAlgebra& alg, const IntLattice& ideal, const Rational& norm) {
  return scale_lattice(lattice_product(alg, ideal, conjugate_lattice(alg, ideal)), Rational(1) / norm);
}

std::vector<Quaternion> unit_group(const QuaternionAlgebra& alg, const IntLattice& order) {
  std::vector<Quaternion> out;
  for (const auto& v : short_vectors(order, 1))
    if (v.norm == 1) out.push_back(from_vector(order.to_ambient(v.coords)));
  (void)alg;
  return out;
}

Rational eichler_mass(long n1, long n2) {
  Rational m(1, 24);
  for (long p : prime_factors(n1)) m *= p - 1;
  if (n2 > 1)
    for (long p : prime_factors(n2)) m *= p + 1;
  return m;
}

ClassSet::ClassSet(EichlerOrder order) : order_(std::move(order)) {
  const long n = order_.level();
  for (q_ = 2; !is_prime(q_) || n % q_ == 0; ++q_) {
  }
  enumerate();
}

Rational ClassSet::mass() const { return eichler_mass(order_.n1, order_.n2); }

std::vector<Rational> ClassSet::signature(const IntLattice& ideal, const Rational& norm) const {
  IntLattice left = left_order(order_.algebra, ideal, norm);
  auto theta = theta_coeffs(left, std::nullopt, 4);
  std::vector<Rational> sig;
  for (const auto& [k, v] : theta) sig.push_back(v);
  return sig;
}

std::optional<Quaternion> ClassSet::isomorphism(const IntLattice& a, const Rational& na, const IntLattice& b,
                                                const Rational& nb) const {
  const auto& alg = order_.algebra;
  IntLattice prod = lattice_product(alg, b, conjugate_lattice(alg, a));
  IntLattice scaled(prod.basis(), prod.form(), Rational(1) / (na * nb));
  std::optional<Quaternion> found;
  for_each_short_vector(scaled, 1, [&](const std::vector<long>& x, const Rational& v) {
    if (found || v != 1) return;
    found = (Rational(1) / na) * from_vector(scaled.to_ambient(x));
  });
  return found;
}

IntLattice ClassSet::reduce(const IntLattice& ideal, const Rational& norm) const {
  const auto& alg = order_.algebra;
  IntLattice scaled(ideal.basis(), ideal.form(), Rational(1) / norm);
  Rational bound = 1;
  std::vector<ShortVector> vs;
  while ((vs = short_vectors(scaled, bound)).empty()) bound *= 2;
  Rational best = vs.front().norm;
  for (const auto& v : vs) best = std::min(best, v.norm);
  const auto it = std::find_if(vs.begin(), vs.end(), [&](const ShortVector& v) { return v.norm == best; });
  Quaternion gamma = from_vector(scaled.to_ambient(it->coords));
  std::vector<Quaternion> gens;
  for (const auto& x : lattice_elements(ideal)) gens.push_back((Rational(1) / norm) * alg.mul(alg.conj(gamma), x));
  return canonical_basis(quaternion_lattice(alg, gens));
}

std::vector<IntLattice> ClassSet::neighbors(const IntLattice& ideal, const Rational& norm) const {
  const auto& alg = order_.algebra;
  const auto basis = lattice_elements(ideal);
  const IntLattice q_ideal = scale_lattice(ideal, q_);
  const Rational target = covolume(ideal) * q_ * q_;
  std::vector<IntLattice> out;
  std::vector<QMatrix> seen;
  for (const auto& c : residue_vectors(q_, true)) {
    Quaternion alpha = combine(basis, c);
    if (!is_integral(alg.norm(alpha) / (norm * q_))) continue;
    IntLattice j = canonical_basis(lattice_sum(right_multiple(alg, alpha, order_.lattice), q_ideal));
    if (covolume(j) != target) continue;
    if (std::find(seen.begin(), seen.end(), j.basis()) != seen.end()) continue;
    seen.push_back(j.basis());
    out.push_back(j);
  }
  return out;
}

void ClassSet::enumerate() {
  const auto& alg = order_.algebra;
  const Rational target = mass();
  Rational total = 0;
  auto add = [&](const IntLattice& ideal, const Rational& norm) {
    IntLattice left = canonical_basis(left_order(alg, ideal, norm));
    auto units = unit_group(alg, left);
    reps_.push_back(ideal);
    norms_.push_back(norm);
    left_orders_.push_back(left);
    unit_counts_.push_back(static_cast<long>(units.size()));
    units_.push_back(std::move(units));
    signatures_.push_back(signature(ideal, norm));
    total += Rational(1, unit_counts_.back());
  };
  add(order_.lattice, 1);
  for (std::size_t idx = 0; total < target; ++idx) {
    if (idx >= reps_.size()) throw StructuralError("neighbour traversal ended before reaching the mass");
    const IntLattice current = reps_[idx];
    const Rational current_norm = norms_[idx];
    for (const auto& j : neighbors(current, current_norm)) {
      const Rational nj = ideal_norm(j, order_.lattice);
      IntLattice red = reduce(j, nj);
      const Rational nr = ideal_norm(red, order_.lattice);
      const auto sig = signature(red, nr);
      bool known = false;
      for (std::size_t k = 0; k < reps_.size() && !known; ++k)
        if (signatures_[k] == sig && isomorphism(reps_[k], norms_[k], red, nr)) known = true;
      if (!known) add(red, nr);
      if (total >= target) break;
    }
  }
  if (total != target) throw StructuralError("class set mass mismatch: " + to_string(total) + " vs " + to_string(target));
}

const IntLattice& ClassSet::connecting(std::size_t i, std::size_t j) const {
  auto key = std::make_pair(i, j);
  auto it = connecting_.find(key);
  if (it != connecting_.end()) return it->second;
  const auto& alg = order_.algebra;
  IntLattice prod = scale_lattice(lattice_product(alg, reps_[i], conjugate_lattice(alg, reps_[j])),
                                  Rational(1) / norms_[j]);
  IntLattice l(canonical_basis(prod).basis(), alg.norm_form(), norms_[j] / norms_[i]);
  return connecting_.emplace(key, std::move(l)).first->second;
}

std::optional<std::pair<std::size_t, Quaternion>> ClassSet::find_class(const IntLattice& ideal) const {
  const Rational n = ideal_norm(ideal, order_.lattice);
  const auto sig = signature(ideal, n);
  for (std::size_t k = 0; k < reps_.size(); ++k) {
    if (signatures_[k] != sig) continue;
    if (auto g = isomorphism(reps_[k], norms_[k], ideal, n)) return std::make_pair(k, *g);
  }
  return std::nullopt;
}

std::vector<SuperorderMap> superorder_maps(const ClassSet& cs) {
  std::vector<SuperorderMap> out;
  const auto& order = cs.order();
  if (order.n2 == 1) return out;
  for (long p : prime_factors(order.n2)) {
    for (auto& sup : superorders(order, p)) {
      SuperorderMap m;
      m.p = p;
      m.super = std::make_shared<ClassSet>(sup);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        IntLattice j = canonical_basis(lattice_product(cs.algebra(), cs.reps()[i], m.super->order().lattice));
        auto found = m.super->find_class(j);
        if (!found) throw StructuralError("extended ideal has no class in the superorder");
        m.target.push_back(found->first);
        m.gamma.push_back(found->second);
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

QMatrix essential_complement(const ClassSet& cs) {
  const std::size_t r = cs.size();
  std::vector<QVector> old;
  auto maps = superorder_maps(cs);
  if (maps.empty()) {
    old.emplace_back(r, Rational(1));
  } else {
    for (const auto& m : maps)
      for (std::size_t k = 0; k < m.super->size(); ++k) {
        QVector v(r, Rational(0));
        for (std::size_t i = 0; i < r; ++i)
          if (m.target[i] == k) v[i] = 1;
        old.push_back(v);
      }
  }
  QMatrix rows(old.size(), r);
  for (std::size_t i = 0; i < old.size(); ++i) rows.set_row(i, old[i]);
  QMatrix basis = row_space_basis(rows);  // k x r
  QMatrix v = basis.transpose();          // r x k
  QMatrix w(r, r);
  for (std::size_t i = 0; i < r; ++i) w(i, i) = Rational(1, cs.unit_counts()[i]);
  QMatrix gram = basis * w * v;
  return QMatrix::identity(r) - v * inverse(gram) * basis * w;
}

}  // namespace quatperiod
