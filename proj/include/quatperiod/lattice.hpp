#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "quatperiod/linalg.hpp"
#include "quatperiod/poly.hpp"

namespace quatperiod {

/// A full-rank lattice inside an ambient rational space carrying a quadratic form.
///
/// `form` is the Gram matrix of the bilinear form B(x, y) = q(x+y) - q(x) - q(y)
/// on the ambient space, so q(x) = B(x, x) / 2. The lattice Gram is
/// scale * basis * form * basis^T.
class IntLattice {
 public:
  IntLattice() = default;
  IntLattice(QMatrix basis, QMatrix form, Rational scale = 1);

  const QMatrix& basis() const { return basis_; }
  const QMatrix& form() const { return form_; }
  const QMatrix& gram() const { return gram_; }
  const Rational& scale() const { return scale_; }
  std::size_t rank() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return basis_.cols(); }

  /// q of an ambient vector, including the scale.
  Rational norm_of(const QVector& ambient) const;
  QVector to_ambient(const std::vector<long>& coords) const;
  /// Lattice coordinates of an ambient vector (throws if not in the rational span).
  QVector to_coordinates(const QVector& ambient) const;
  bool contains(const QVector& ambient) const;
  /// Covolume squared relative to the ambient basis: det(basis)^2 for square bases.
  Rational determinant() const;

  bool operator==(const IntLattice& o) const;

 private:
  QMatrix basis_;
  QMatrix form_;
  Rational scale_ = 1;
  QMatrix gram_;
  QMatrix inverse_;  // only for square bases
};

struct ShortVector {
  std::vector<long> coords;
  Rational norm;
};

/// Same lattice with a Hermite-normal-form basis.
IntLattice canonical_basis(const IntLattice& lattice);

/// Sum of two lattices in the same ambient space (same form and scale).
IntLattice lattice_sum(const IntLattice& a, const IntLattice& b);

/// Nonzero x with q(x) <= bound, lexicographic on lattice coordinates.
std::vector<ShortVector> short_vectors(const IntLattice& lattice, const Rational& bound);

/// Calls visit(coords, norm) for every nonzero x with q(x) <= bound, in enumeration order.
void for_each_short_vector(const IntLattice& lattice, const Rational& bound,
                           const std::function<void(const std::vector<long>&, const Rational&)>& visit);

/// Coefficient at n is the sum of weight(x) over q(x) = n (weight on ambient coordinates).
std::map<long, Rational> theta_coeffs(const IntLattice& lattice, const std::optional<Poly>& weight,
                                      long prec);

/// Positive definiteness via leading principal minors.
bool is_positive_definite(const QMatrix& gram);

}  // namespace quatperiod
