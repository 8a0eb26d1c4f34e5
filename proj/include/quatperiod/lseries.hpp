#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "quatperiod/poly.hpp"

namespace quatperiod {

/// One line of the newform file: label|N|k|p:+-1,...|p:a_p,...
struct NewformRecord {
  std::string label;
  long level = 1;
  int weight = 2;
  std::map<long, int> signs;
  std::map<long, long> ap;
  std::string source;

  long a(long p) const;
  long max_prime() const { return ap.empty() ? 0 : ap.rbegin()->first; }
};

class IngestError : public ArgumentError {
 public:
  IngestError(std::size_t row, const std::string& what)
      : ArgumentError("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

std::vector<NewformRecord> parse_newforms(std::istream& in, const std::string& source = "stream");
std::vector<NewformRecord> ingest(const std::string& path);
std::string format_newform(const NewformRecord& r);
const NewformRecord& find_newform(const std::vector<NewformRecord>& records, const std::string& label);

/// alpha + beta = a and alpha beta = q (arithmetic normalization).
struct SatakeParams {
  long p = 2;
  Rational a, q;

  static SatakeParams of(const NewformRecord& f, long p);
  static SatakeParams from_roots(long p, const Rational& alpha, const Rational& beta);
};

/// prod (1 - gamma_i X) in X = p^{-s}; the analytic L-factor is the inverse at X = p^{-s - shift}.
struct EulerFactor {
  long p = 2;
  UPoly coeffs{Rational(1)};
  Rational shift = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool operator==(const EulerFactor& o) const { return p == o.p && coeffs == o.coeffs && shift == o.shift; }
};

EulerFactor operator*(const EulerFactor& a, const EulerFactor& b);
/// Substitutes X -> c X.
EulerFactor rescaled(const EulerFactor& f, const Rational& c);

/// det(1 - M X) for the matrix M of Frobenius eigenvalues.
EulerFactor factor_of_matrix(long p, const QMatrix& m, const Rational& shift);
/// Companion matrix with characteristic polynomial x^2 - a x + q.
QMatrix frobenius_matrix(const SatakeParams& s);
/// Symmetric square of a matrix on the monomial basis of degree-2 tensors.
QMatrix sym2_matrix(const QMatrix& m);
QMatrix kronecker(const QMatrix& a, const QMatrix& b);

EulerFactor gl2_factor(const SatakeParams& s, int weight);
EulerFactor sym2_factor(const SatakeParams& s, int weight);
EulerFactor tensor_factor(const SatakeParams& a, int ka, const SatakeParams& b, int kb);
/// Degree 8; the shift puts the center at s = 1/2.
EulerFactor triple_factor(const SatakeParams& h, int kh, const SatakeParams& f1, int k1, const SatakeParams& f2, int k2);
EulerFactor triple_factor(const NewformRecord& h, const NewformRecord& f1, const NewformRecord& f2, long p);

/// Spin factor of the lift of (h1, h2), k1 >= k2: the union of the Satake pairs, h2's twisted by p^((k1-k2)/2).
EulerFactor spin_factor(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2);
/// Degree-5 standard factor (1 - X) (h1 x h2)(X / p^(k1-1)).
EulerFactor standard_factor(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2);

/// spin(h1, h2) = L_p(h1) L_p(h2) with h2 twisted.
bool spin_split_check(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2);
/// Sym^2(spin) = Sym^2(h1) Sym^2(h2) (h1 x h2) and std5 = zeta (h1 x h2), both up to the twists.
bool sym2_identity_check(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2);

/// A(alpha X) A(beta X) for an Asai polynomial A(Y).
EulerFactor asai_combination(const UPoly& asai, const SatakeParams& s);

/// Exterior square of the degree-5 standard factor times p^(k1-1); equals Sym^2(spin) up to the shift.
EulerFactor standard_exterior_square(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2);

/// X^d P(1 / (p^(2 shift) X)) = c P(X) for some constant c.
bool is_self_dual(const EulerFactor& f);

/// Triple factor at p dividing the level of three weight-2 forms, all of level exactly divisible by p:
/// (1 - a X)(1 - a p X)^2 with a the product of the three a_p.
EulerFactor steinberg_triple_factor(long p, long a_product);

/// Gamma_R shifts at the center-1/2 normalization.
std::vector<double> gl2_gamma_shifts(int k);
std::vector<double> sym2_gamma_shifts(int k);
/// Balanced weights (each below the sum of the other two).
std::vector<double> triple_gamma_shifts(int k1, int k2, int k3);

struct LData {
  std::map<long, EulerFactor> factors;
  /// Gamma_R(s + mu) shifts: gamma(s) = prod Gamma_R(s + mu_j).
  std::vector<double> gamma_shifts;
  long double conductor = 1;
  int sign = 1;
  /// Poles of the completed function: (location, residue).
  std::vector<std::pair<double, double>> poles;
};

struct CentralValue {
  long double value = 0;      // L(s)
  long double completed = 0;  // q^(s/2) gamma(s) L(s)
  long double error = 0;
  long terms = 0;
};

struct EvalOptions {
  double s = 0.5;
  /// Smoothing kernel G(u) = kernel^u; the value does not depend on it.
  double kernel = 1.0;
  double tolerance = 1e-12;
};

class InsufficientData : public ArgumentError {
 public:
  explicit InsufficientData(long needed)
      : ArgumentError("Euler factors needed up to p = " + std::to_string(needed)), needed_(needed) {}
  long needed() const { return needed_; }

 private:
  long needed_;
};

/// L(f, s): conductor N, root number (-1)^(k/2) prod_p eps_p.
LData gl2_data(const NewformRecord& f, long pmax);
/// L(Sym^2 f, s) for squarefree N: conductor N^2, root number +1.
LData sym2_data(const NewformRecord& f, long pmax);
/// L(h x f1 x f2, s) for weight-2 forms of one squarefree level N: conductor N^5,
/// root number -prod_p eps_p(h) eps_p(f1) eps_p(f2).
LData triple_data(const NewformRecord& h, const NewformRecord& f1, const NewformRecord& f2, long pmax);

/// Dirichlet coefficients a_1 .. a_n (index 0 unused) of prod_p 1 / factor_p in the analytic normalization.
std::vector<long double> dirichlet_coefficients(const LData& data, long n);

CentralValue central_value(const LData& data, const EvalOptions& options = {});

/// log Gamma on the complex plane.
std::complex<long double> log_gamma(std::complex<long double> z);

}  // namespace quatperiod
