#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "quatperiod/lattice.hpp"
#include "quatperiod/quatalg.hpp"

namespace quatperiod {

/// Lattice in the algebra spanned by the given quaternions (rows), with the reduced norm as q.
IntLattice quaternion_lattice(const QuaternionAlgebra& alg, const std::vector<Quaternion>& gens);
std::vector<Quaternion> lattice_elements(const IntLattice& l);
/// Z-span of all products a*b, a in A, b in B.
IntLattice lattice_product(const QuaternionAlgebra& alg, const IntLattice& a, const IntLattice& b);
IntLattice conjugate_lattice(const QuaternionAlgebra& alg, const IntLattice& a);
IntLattice scale_lattice(const IntLattice& a, const Rational& s);
IntLattice lattice_intersection(const IntLattice& a, const IntLattice& b);
/// Dual with respect to the reduced trace form tr(xy).
IntLattice trace_dual(const QuaternionAlgebra& alg, const IntLattice& a);
/// |det| of the basis in algebra coordinates.
Rational covolume(const IntLattice& l);

/// Square root of |det tr(b_i b_j)|; throws if the lattice is not an order.
Integer reduced_discriminant(const QuaternionAlgebra& alg, const IntLattice& order);
bool is_order(const QuaternionAlgebra& alg, const IntLattice& lattice);

struct EichlerOrder {
  QuaternionAlgebra algebra;
  IntLattice lattice;
  long n1 = 1;
  long n2 = 1;
  /// Maximal order containing this one.
  IntLattice maximal;
  /// For p | n2, the second maximal order whose intersection with `maximal` is the order at p.
  std::map<long, IntLattice> local_maximal;

  long level() const { return n1 * n2; }
};

EichlerOrder maximal_order(const QuaternionAlgebra& alg);
EichlerOrder eichler_order(const EichlerOrder& maximal, long n2);
/// The two orders of level N/p strictly containing R (p | n2).
std::vector<EichlerOrder> superorders(const EichlerOrder& order, long p);
/// Two-sided ideal P with pR ⊂ P, [R:P] = p^2 and P^2 = pR.
IntLattice atkin_lehner_ideal(const EichlerOrder& order, long p);

/// Reduced norm of a lattice relative to an order: sqrt(covolume ratio).
Rational ideal_norm(const IntLattice& ideal, const IntLattice& order);
/// Left order I Ibar / n(I) of a locally principal right ideal.
IntLattice left_order(const QuaternionAlgebra& alg, const IntLattice& ideal, const Rational& norm);
std::vector<Quaternion> unit_group(const QuaternionAlgebra& alg, const IntLattice& order);

/// Eichler mass (1/24) prod_{p|N1} (p-1) prod_{p|N2} (p+1).
Rational eichler_mass(long n1, long n2);

class ClassSet {
 public:
  /// Enumerates right ideal classes by neighbour traversal at the smallest prime not dividing the level.
  explicit ClassSet(EichlerOrder order);

  const EichlerOrder& order() const { return order_; }
  const QuaternionAlgebra& algebra() const { return order_.algebra; }
  std::size_t size() const { return reps_.size(); }
  long neighbor_prime() const { return q_; }
  const std::vector<IntLattice>& reps() const { return reps_; }
  const std::vector<Rational>& norms() const { return norms_; }
  const std::vector<IntLattice>& left_orders() const { return left_orders_; }
  const std::vector<long>& unit_counts() const { return unit_counts_; }
  const std::vector<std::vector<Quaternion>>& units() const { return units_; }
  Rational mass() const;

  /// I_i I_j^{-1} = I_i Ibar_j / n(I_j), with q(x) = n(x) n(I_j) / n(I_i).
  const IntLattice& connecting(std::size_t i, std::size_t j) const;

  /// Class k and gamma with ideal = gamma * I_k, if the ideal is a right ideal of this order.
  std::optional<std::pair<std::size_t, Quaternion>> find_class(const IntLattice& ideal) const;

 private:
  void enumerate();
  std::vector<IntLattice> neighbors(const IntLattice& ideal, const Rational& norm) const;
  IntLattice reduce(const IntLattice& ideal, const Rational& norm) const;
  std::optional<Quaternion> isomorphism(const IntLattice& a, const Rational& na, const IntLattice& b,
                                        const Rational& nb) const;
  std::vector<Rational> signature(const IntLattice& ideal, const Rational& norm) const;

  EichlerOrder order_;
  long q_ = 2;
  std::vector<IntLattice> reps_;
  std::vector<Rational> norms_;
  std::vector<IntLattice> left_orders_;
  std::vector<long> unit_counts_;
  std::vector<std::vector<Quaternion>> units_;
  std::vector<std::vector<Rational>> signatures_;
  mutable std::map<std::pair<std::size_t, std::size_t>, IntLattice> connecting_;
};

/// Right ideal classes of the order pulled back to a superorder R': class index and gamma with I_i R' = gamma I'_k.
struct SuperorderMap {
  long p = 0;
  std::shared_ptr<ClassSet> super;
  std::vector<std::size_t> target;
  std::vector<Quaternion> gamma;
};

std::vector<SuperorderMap> superorder_maps(const ClassSet& cs);

/// Projector (acting on column vectors of class-function values) onto the orthogonal complement,
/// for sum_i f(i) g(i) / e_i, of all weight-0 functions pulled back from strictly larger orders
/// (for a maximal order: the constants).
QMatrix essential_complement(const ClassSet& cs);

}  // namespace quatperiod
