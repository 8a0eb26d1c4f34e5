#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quatperiod/brandt.hpp"

namespace quatperiod {

/// Atkin-Lehner signs of the newforms at the primes dividing a squarefree level:
/// shared = eps'_p (common to h1, h2), first/second = eps_p of f1, f2.
struct SignData {
  long level = 1;
  std::map<long, int> shared, first, second;

  int product(long p) const;
  int global_product() const;
};

/// Divisors of the level with an odd number of prime factors.
std::vector<long> admissible_discriminants(long level);

/// True iff the sign product is -1 exactly at the primes of n1 and +1 elsewhere.
/// Returns false for n1 that is not an admissible discriminant.
bool sign_gate(const SignData& signs, long n1);

struct AlgebraChoice {
  std::optional<long> disc;
  std::string reason;
};
AlgebraChoice select_algebra(const SignData& signs);

enum class Vanishing { None, SignGate, WeightGate, Unbalanced, NumericZero };
std::string to_string(Vanishing v);

struct PeriodReport {
  long disc = 0, n2 = 1;
  int nu1 = 0, nu2 = 0, alpha1 = 0, alpha2 = 0, k1 = 2, k2 = 2;
  Rational s1 = 0, s2 = 0, product = 0, proxy = 0;
  Vanishing vanishing = Vanishing::None;
  bool weighted = false;
  /// Set when the sign gate could not be evaluated (some form is not an involution eigenvector).
  bool gate_skipped = false;
};

struct PeriodOptions {
  /// Weight class j by 1/e_j; the displayed sums are unweighted.
  bool weighted = false;
  /// Short-circuit on the involution signs before summing.
  bool use_gate = true;
};

/// w_p eigenvalue of phi for every p dividing the level of its class set (0 where phi is not an eigenvector).
std::map<long, int> involution_signs(const QuatForm& phi);

/// sum_j T(phi(y_j), psi1(y_j), psi2(y_j)) over the invariant trilinear form of the three weights.
Rational trilinear_sum(const QuatForm& phi, const QuatForm& psi1, const QuatForm& psi2, bool weighted = false);

/// S_i = trilinear_sum(phi_i, psi1, psi2) with weight bookkeeping k_i = alpha_i + nu1 - nu2 + 2.
PeriodReport period_sums(const QuatForm& phi1, const QuatForm& phi2, const QuatForm& psi1, const QuatForm& psi2,
                         int alpha1, int alpha2, const PeriodOptions& options = {});

/// period_sums with phi2 the constant function 1/mass.
PeriodReport degenerate_eisenstein(const QuatForm& phi1, const QuatForm& psi1, const QuatForm& psi2,
                                   const PeriodOptions& options = {});

/// period_sums with phi1 = phi2 = phi.
PeriodReport klingen_case(const QuatForm& phi, const QuatForm& psi1, const QuatForm& psi2,
                          const PeriodOptions& options = {});

/// The rational weight-(2 nu + 2) eigenform whose Hecke eigenvalues match `ap` at the listed good primes
/// and whose involution signs match `signs` (quaternionic convention) where given.
std::optional<QuatForm> find_eigenform(const std::shared_ptr<const ClassSet>& cs, int nu,
                                       const std::map<long, long>& ap, const std::map<long, int>& signs = {});

}  // namespace quatperiod
