#include "quatperiod/lseries.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace quatperiod {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long parse_long(const std::string& s, std::size_t row, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestError(row, "malformed " + what + " '" + s + "'");
  }
}

std::map<long, long> parse_pairs(const std::string& field, std::size_t row, const std::string& what) {
  std::map<long, long> out;
  if (field.empty()) return out;
  for (const auto& item : split(field, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw IngestError(row, "malformed " + what + " entry '" + item + "'");
    const long p = parse_long(trim(item.substr(0, colon)), row, what + " prime");
    const long v = parse_long(trim(item.substr(colon + 1)), row, what + " value");
    if (!is_prime(p)) throw IngestError(row, what + " index " + std::to_string(p) + " is not prime");
    if (!out.emplace(p, v).second) throw IngestError(row, "duplicate " + what + " entry at p = " + std::to_string(p));
  }
  return out;
}

QMatrix block_diagonal(const QMatrix& a, const QMatrix& b) {
  QMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

QMatrix exterior_square_matrix(const QMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) basis.emplace_back(i, j);
  QMatrix out(basis.size(), basis.size());
  // (M e_i) ^ (M e_j) expanded on e_r ^ e_s, r < s.
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const auto [i, j] = basis[c];
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const auto [a, b] = basis[r];
      out(r, c) = m(a, i) * m(b, j) - m(b, i) * m(a, j);
    }
  }
  return out;
}

UPoly upoly_divide_exact(UPoly num, const UPoly& den) {
  num = upoly_trim(num);
  const UPoly d = upoly_trim(den);
  if (d.empty()) throw ArgumentError("division by the zero polynomial");
  if (num.size() < d.size()) {
    if (!num.empty()) throw StructuralError("polynomial division is not exact");
    return {};
  }
  UPoly q(num.size() - d.size() + 1, Rational(0));
  for (std::size_t i = q.size(); i-- > 0;) {
    q[i] = num[i + d.size() - 1] / d.back();
    for (std::size_t j = 0; j < d.size(); ++j) num[i + j] -= q[i] * d[j];
  }
  if (!upoly_trim(num).empty()) throw StructuralError("polynomial division is not exact");
  return q;
}

void require_good(const SatakeParams& s) {
  if (s.q == 0) throw ArgumentError("bad prime " + std::to_string(s.p));
}

}  // namespace

long NewformRecord::a(long p) const {
  auto it = ap.find(p);
  if (it == ap.end())
    throw ArgumentError("newform " + label + " has no a_p for p = " + std::to_string(p) + " (source " + source + ")");
  return it->second;
}

std::vector<NewformRecord> parse_newforms(std::istream& in, const std::string& source) {
  std::vector<NewformRecord> out;
  std::set<std::string> labels;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto fields = split(body, '|');
    if (fields.size() != 5) throw IngestError(row, "expected 5 '|'-separated fields, got " + std::to_string(fields.size()));
    NewformRecord r;
    r.source = source;
    r.label = fields[0];
    if (r.label.empty()) throw IngestError(row, "empty label");
    if (!labels.insert(r.label).second) throw IngestError(row, "duplicate label " + r.label);
    r.level = parse_long(fields[1], row, "level");
    r.weight = static_cast<int>(parse_long(fields[2], row, "weight"));
    if (r.level < 1) throw IngestError(row, "level must be positive");
    if (r.weight < 2 || r.weight % 2 != 0) throw IngestError(row, "weight must be even and at least 2");
    for (const auto& [p, e] : parse_pairs(fields[3], row, "sign")) {
      if (e != 1 && e != -1) throw IngestError(row, "sign at p = " + std::to_string(p) + " is not +-1");
      if (r.level % p != 0) throw IngestError(row, "sign given at p = " + std::to_string(p) + " not dividing the level");
      r.signs[p] = static_cast<int>(e);
    }
    r.ap = parse_pairs(fields[4], row, "a_p");
    for (const auto& [p, a] : r.ap) {
      const Integer bound = pow(Integer(p), static_cast<unsigned long>(r.weight - 1)) * 4;
      const Integer sq = Integer(a) * Integer(a);
      if (r.level % p != 0) {
        if (sq > bound)
          throw IngestError(row, "Ramanujan bound violated at p = " + std::to_string(p) + " (a_p = " + std::to_string(a) + ")");
      } else if (r.level % (p * p) == 0) {
        if (a != 0) throw IngestError(row, "a_p must vanish at p = " + std::to_string(p) + " with p^2 | N");
      } else {
        const Integer half = pow(Integer(p), static_cast<unsigned long>((r.weight - 2) / 2));
        if (sq != half * half) throw IngestError(row, "|a_p| must be p^((k-2)/2) at p = " + std::to_string(p));
        auto it = r.signs.find(p);
        if (it != r.signs.end() && Integer(-it->second) * half != a)
          throw IngestError(row, "Atkin-Lehner sign inconsistent with a_p at p = " + std::to_string(p));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<NewformRecord> ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open newform file " + path);
  return parse_newforms(in, path);
}

std::string format_newform(const NewformRecord& r) {
  std::ostringstream out;
  out << r.label << '|' << r.level << '|' << r.weight << '|';
  bool first = true;
  for (const auto& [p, e] : r.signs) {
    out << (first ? "" : ",") << p << ':' << (e > 0 ? "+1" : "-1");
    first = false;
  }
  out << '|';
  first = true;
  for (const auto& [p, a] : r.ap) {
    out << (first ? "" : ",") << p << ':' << a;
    first = false;
  }
  return out.str();
}

const NewformRecord& find_newform(const std::vector<NewformRecord>& records, const std::string& label) {
  for (const auto& r : records)
    if (r.label == label) return r;
  std::string src = records.empty() ? "<empty>" : records.front().source;
  throw ArgumentError("unknown newform label '" + label + "' in " + src);
}

SatakeParams SatakeParams::of(const NewformRecord& f, long p) {
  SatakeParams s;
  s.p = p;
  s.a = f.a(p);
  s.q = f.level % p == 0 ? Rational(0) : pow(Rational(p), f.weight - 1);
  return s;
}

SatakeParams SatakeParams::from_roots(long p, const Rational& alpha, const Rational& beta) {
  return SatakeParams{p, alpha + beta, alpha * beta};
}

EulerFactor operator*(const EulerFactor& a, const EulerFactor& b) {
  if (a.p != b.p || a.shift != b.shift) throw ArgumentError("Euler factors at different primes or normalizations");
  return {a.p, upoly_mul(a.coeffs, b.coeffs), a.shift};
}

EulerFactor rescaled(const EulerFactor& f, const Rational& c) {
  EulerFactor out = f;
  Rational power = 1;
  for (auto& v : out.coeffs) {
    v *= power;
    power *= c;
  }
  out.coeffs = upoly_trim(out.coeffs);
  return out;
}

EulerFactor factor_of_matrix(long p, const QMatrix& m, const Rational& shift) {
  const QVector cp = characteristic_polynomial(m);
  UPoly rev(cp.rbegin(), cp.rend());
  return {p, upoly_trim(rev), shift};
}

QMatrix frobenius_matrix(const SatakeParams& s) { return QMatrix{{0, -s.q}, {1, s.a}}; }

QMatrix sym2_matrix(const QMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) basis.emplace_back(i, j);
  auto index = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(std::find(basis.begin(), basis.end(), std::make_pair(i, j)) - basis.begin());
  };
  QMatrix out(basis.size(), basis.size());
  // (M e_i)(M e_j) = sum_{a, b} m_ai m_bj e_a e_b.
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const auto [i, j] = basis[c];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) out(index(a, b), c) += m(a, i) * m(b, j);
  }
  return out;
}

QMatrix kronecker(const QMatrix& a, const QMatrix& b) {
  QMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) out(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
  return out;
}

EulerFactor gl2_factor(const SatakeParams& s, int weight) {
  return factor_of_matrix(s.p, frobenius_matrix(s), make_rational(weight - 1, 2));
}

EulerFactor sym2_factor(const SatakeParams& s, int weight) {
  return factor_of_matrix(s.p, sym2_matrix(frobenius_matrix(s)), Rational(weight - 1));
}

EulerFactor tensor_factor(const SatakeParams& a, int ka, const SatakeParams& b, int kb) {
  if (a.p != b.p) throw ArgumentError("tensor of factors at different primes");
  return factor_of_matrix(a.p, kronecker(frobenius_matrix(a), frobenius_matrix(b)), make_rational(ka + kb - 2, 2));
}

EulerFactor triple_factor(const SatakeParams& h, int kh, const SatakeParams& f1, int k1, const SatakeParams& f2,
                          int k2) {
  if (h.p != f1.p || h.p != f2.p) throw ArgumentError("triple factor at different primes");
  require_good(h);
  require_good(f1);
  require_good(f2);
  const QMatrix m = kronecker(kronecker(frobenius_matrix(h), frobenius_matrix(f1)), frobenius_matrix(f2));
  return factor_of_matrix(h.p, m, make_rational(kh + k1 + k2 - 3, 2));
}

EulerFactor triple_factor(const NewformRecord& h, const NewformRecord& f1, const NewformRecord& f2, long p) {
  if (h.level % p == 0 || f1.level % p == 0 || f2.level % p == 0)
    throw ArgumentError("bad prime " + std::to_string(p) + " for the triple product");
  return triple_factor(SatakeParams::of(h, p), h.weight, SatakeParams::of(f1, p), f1.weight, SatakeParams::of(f2, p),
                       f2.weight);
}

namespace {

void check_twist(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2) {
  if (h1.p != h2.p) throw ArgumentError("spin data at different primes");
  if (k1 < k2 || (k1 - k2) % 2 != 0) throw ArgumentError("spin data needs k1 >= k2 with k1 - k2 even");
}

QMatrix spin_matrix(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2) {
  const Rational t = pow(Rational(h1.p), (k1 - k2) / 2);
  return block_diagonal(frobenius_matrix(h1), frobenius_matrix(h2).scaled(t));
}

}  // namespace

EulerFactor spin_factor(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2) {
  check_twist(h1, k1, h2, k2);
  return factor_of_matrix(h1.p, spin_matrix(h1, k1, h2, k2), make_rational(k1 - 1, 2));
}

EulerFactor standard_factor(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2) {
  check_twist(h1, k1, h2, k2);
  require_good(h1);
  const Rational mu = pow(Rational(h1.p), k1 - 1);
  // Lambda^2(spin) / mu = 1 + std5.
  const EulerFactor wedge =
      factor_of_matrix(h1.p, exterior_square_matrix(spin_matrix(h1, k1, h2, k2)).scaled(1 / mu), Rational(0));
  return {h1.p, upoly_divide_exact(wedge.coeffs, UPoly{1, -1}), Rational(0)};
}

EulerFactor standard_exterior_square(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2) {
  check_twist(h1, k1, h2, k2);
  require_good(h1);
  const Rational mu = pow(Rational(h1.p), k1 - 1);
  // Lambda^2(1 + 1 + std5') = 1 + 2 std5' + Lambda^2 std5', while Lambda^2(std5) = std5' + Lambda^2 std5'
  // with std5 = 1 + std5'.
  const QMatrix wedge = exterior_square_matrix(spin_matrix(h1, k1, h2, k2)).scaled(1 / mu);
  const EulerFactor twice = factor_of_matrix(h1.p, exterior_square_matrix(wedge), Rational(0));
  const UPoly rest = upoly_divide_exact(twice.coeffs, standard_factor(h1, k1, h2, k2).coeffs);
  EulerFactor out = rescaled({h1.p, rest, 0}, mu);
  out.shift = Rational(k1 - 1);
  return out;
}

bool spin_split_check(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2) {
  const EulerFactor spin = spin_factor(h1, k1, h2, k2);
  EulerFactor second = rescaled(gl2_factor(h2, k2), pow(Rational(h1.p), (k1 - k2) / 2));
  second.shift = spin.shift;
  return spin == gl2_factor(h1, k1) * second;
}

bool sym2_identity_check(const SatakeParams& h1, int k1, const SatakeParams& h2, int k2) {
  check_twist(h1, k1, h2, k2);
  const long p = h1.p;
  const Rational t = pow(Rational(p), (k1 - k2) / 2);
  const Rational shift(k1 - 1);
  const EulerFactor sym_spin = factor_of_matrix(p, sym2_matrix(spin_matrix(h1, k1, h2, k2)), shift);
  EulerFactor s2 = rescaled(sym2_factor(h2, k2), t * t);
  EulerFactor tensor = rescaled(tensor_factor(h1, k1, h2, k2), t);
  s2.shift = shift;
  tensor.shift = shift;
  if (!(sym_spin == sym2_factor(h1, k1) * s2 * tensor)) return false;
  const Rational mu = pow(Rational(p), k1 - 1);
  EulerFactor twisted = rescaled(tensor_factor(h1, k1, h2, k2), t / mu);
  twisted.shift = 0;
  if (!(standard_factor(h1, k1, h2, k2) == EulerFactor{p, UPoly{1, -1}, 0} * twisted)) return false;
  return standard_exterior_square(h1, k1, h2, k2) == sym_spin;
}

EulerFactor asai_combination(const UPoly& asai, const SatakeParams& s) {
  const UPoly a = upoly_trim(asai);
  if (a.empty() || a[0] != 1) throw ArgumentError("Asai factor must have constant term 1");
  // Power sums alpha^k + beta^k.
  std::vector<Rational> power{2, s.a};
  for (std::size_t k = 2; k < a.size(); ++k) power.push_back(s.a * power[k - 1] - s.q * power[k - 2]);
  const std::size_t d = a.size() - 1;
  UPoly out(2 * d + 1, Rational(0));
  for (std::size_t n = 0; n <= 2 * d; ++n)
    for (std::size_t i = 0; i <= d && i <= n; ++i) {
      const std::size_t j = n - i;
      if (j > d || j < i) continue;
      const Rational qi = pow(s.q, static_cast<long>(i));
      out[n] += i == j ? Rational(a[i] * a[j] * qi) : Rational(a[i] * a[j] * qi * power[j - i]);
    }
  return {s.p, upoly_trim(out), Rational(0)};
}

bool is_self_dual(const EulerFactor& f) {
  const UPoly& c = f.coeffs;
  const int d = f.degree();
  if (d <= 0) return d == 0;
  const Rational w = 2 * f.shift;
  if (!is_integral(w)) return false;
  const Rational pw = pow(Rational(f.p), to_long(w.get_num()));
  // X^d P(1 / (pw X)) has coefficient c_{d-i} pw^{-(d-i)} at X^i.
  std::optional<Rational> ratio;
  for (int i = 0; i <= d; ++i) {
    const Rational lhs = c[static_cast<std::size_t>(d - i)] / pow(pw, d - i);
    const Rational& rhs = c[static_cast<std::size_t>(i)];
    if (rhs == 0) {
      if (lhs != 0) return false;
      continue;
    }
    if (!ratio) ratio = lhs / rhs;
    else if (*ratio != lhs / rhs) return false;
  }
  return ratio.has_value() && *ratio != 0;
}

EulerFactor steinberg_triple_factor(long p, long a_product) {
  const UPoly lin{1, Rational(-a_product)};
  const UPoly twisted{1, Rational(-a_product * p)};
  return {p, upoly_mul(lin, upoly_mul(twisted, twisted)), make_rational(3, 2)};
}

std::vector<double> gl2_gamma_shifts(int k) {
  const double m = (k - 1) / 2.0;
  return {m, m + 1};
}

std::vector<double> sym2_gamma_shifts(int k) {
  return {k % 2 == 0 ? 1.0 : 0.0, static_cast<double>(k - 1), static_cast<double>(k)};
}

std::vector<double> triple_gamma_shifts(int k1, int k2, int k3) {
  if (k1 >= k2 + k3 || k2 >= k1 + k3 || k3 >= k1 + k2) throw ArgumentError("triple weights are not balanced");
  std::vector<double> out;
  for (int m2 : {k1 + k2 + k3 - 3, k1 + k2 - k3 - 1, k1 - k2 + k3 - 1, -k1 + k2 + k3 - 1}) {
    out.push_back(m2 / 2.0);
    out.push_back(m2 / 2.0 + 1);
  }
  return out;
}

namespace {

int sign_at(const NewformRecord& f, long p) {
  auto it = f.signs.find(p);
  if (it == f.signs.end())
    throw ArgumentError("newform " + f.label + " has no Atkin-Lehner sign at " + std::to_string(p));
  return it->second;
}

long squarefree_level(const NewformRecord& f) {
  if (!is_squarefree(f.level)) throw ArgumentError("newform " + f.label + " has non-squarefree level");
  return f.level;
}

std::vector<long> primes_checked(const NewformRecord& f, long pmax) {
  auto primes = primes_up_to(pmax);
  if (!primes.empty() && f.max_prime() < primes.back()) throw InsufficientData(pmax);
  return primes;
}

}  // namespace

LData gl2_data(const NewformRecord& f, long pmax) {
  LData d;
  for (long p : primes_checked(f, pmax)) d.factors[p] = gl2_factor(SatakeParams::of(f, p), f.weight);
  d.gamma_shifts = gl2_gamma_shifts(f.weight);
  d.conductor = f.level;
  d.sign = f.weight % 4 == 0 ? 1 : -1;
  for (long p : prime_factors(f.level)) d.sign *= sign_at(f, p);
  return d;
}

LData sym2_data(const NewformRecord& f, long pmax) {
  const long n = squarefree_level(f);
  LData d;
  for (long p : primes_checked(f, pmax)) d.factors[p] = sym2_factor(SatakeParams::of(f, p), f.weight);
  d.gamma_shifts = sym2_gamma_shifts(f.weight);
  d.conductor = static_cast<long double>(n) * n;
  return d;
}

LData triple_data(const NewformRecord& h, const NewformRecord& f1, const NewformRecord& f2, long pmax) {
  const long n = squarefree_level(h);
  if (f1.level != n || f2.level != n) throw ArgumentError("triple product data needs one common level");
  if (h.weight != 2 || f1.weight != 2 || f2.weight != 2)
    throw ArgumentError("bad-prime triple factors are only provided for weight 2");
  primes_checked(f1, pmax);
  primes_checked(f2, pmax);
  LData d;
  for (long p : primes_checked(h, pmax))
    d.factors[p] = n % p == 0 ? steinberg_triple_factor(p, h.a(p) * f1.a(p) * f2.a(p)) : triple_factor(h, f1, f2, p);
  d.gamma_shifts = triple_gamma_shifts(2, 2, 2);
  d.conductor = std::pow(static_cast<long double>(n), 5);
  d.sign = -1;
  for (long p : prime_factors(n)) d.sign *= sign_at(h, p) * sign_at(f1, p) * sign_at(f2, p);
  return d;
}

// ---------------------------------------------------------------------------------------------
// Numerics.

std::complex<long double> log_gamma(std::complex<long double> z) {
  using C = std::complex<long double>;
  const long double pi = 3.141592653589793238462643383279502884L;
  if (z.real() < 0.5L) return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(C(1) - z);
  C acc = 0;
  while (std::abs(z) < 18.0L || z.real() < 10.0L) {
    acc -= std::log(z);
    z += 1.0L;
  }
  static const long double bern[] = {1.0L / 6,  -1.0L / 30, 1.0L / 42,       -1.0L / 30,
                                     5.0L / 66, -691.0L / 2730, 7.0L / 6, -3617.0L / 510};
  C s = (z - 0.5L) * std::log(z) - z + 0.5L * std::log(2 * pi);
  C zp = z;
  const C z2 = z * z;
  for (int k = 1; k <= 8; ++k) {
    s += bern[k - 1] / (static_cast<long double>(2 * k) * (2 * k - 1) * zp);
    zp *= z2;
  }
  return s + acc;
}

namespace {

using Cx = std::complex<long double>;
constexpr long double kPi = 3.141592653589793238462643383279502884L;

Cx log_gamma_r(Cx z) { return -0.5L * z * std::log(kPi) + log_gamma(0.5L * z); }

Cx log_gamma_factor(const std::vector<double>& mus, Cx s) {
  Cx out = 0;
  for (double mu : mus) out += log_gamma_r(s + static_cast<long double>(mu));
  return out;
}

// Quadrature of V_s(y) = (1/2 pi i) int_(c) y^-u gamma(s+u)/gamma(s) du/u along u = c + it.
struct Kernel {
  long double c = 1, h = 0.05;
  std::vector<Cx> weights;  // h/pi * gamma ratio / u at t = k h, first halved

  Kernel(const std::vector<double>& mus, long double s, long double c_in) : c(c_in) {
    const Cx base = log_gamma_factor(mus, Cx(s));
    long double peak = 0;
    for (long double t = 0; t <= 2000; t += h) {
      const Cx u(c, t);
      Cx w = std::exp(log_gamma_factor(mus, Cx(s) + u) - base) / u * (h / kPi);
      if (t == 0) w *= 0.5L;
      peak = std::max(peak, std::abs(w));
      weights.push_back(w);
      if (std::abs(w) < 1e-28L * peak && t > 1) break;
    }
  }

  long double value(long double y) const {
    const long double ly = std::log(y);
    const long double scale = std::exp(-c * ly);
    long double sum = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      const long double phase = -static_cast<long double>(k) * h * ly;
      sum += weights[k].real() * std::cos(phase) - weights[k].imag() * std::sin(phase);
    }
    return sum * scale;
  }
};

long double coefficient_bound(long n, std::size_t degree) {
  const long double l = 1 + std::log(static_cast<long double>(n));
  return std::pow(l, static_cast<long double>(degree > 0 ? degree - 1 : 0));
}

}  // namespace

std::vector<long double> dirichlet_coefficients(const LData& data, long n) {
  std::vector<long double> a(static_cast<std::size_t>(n + 1), 0.0L);
  if (n < 1) return a;
  std::vector<long> spf(static_cast<std::size_t>(n + 1), 0);
  for (long i = 2; i <= n; ++i)
    if (spf[static_cast<std::size_t>(i)] == 0)
      for (long j = i; j <= n; j += i)
        if (spf[static_cast<std::size_t>(j)] == 0) spf[static_cast<std::size_t>(j)] = i;
  // Local series 1 / P(p^{-s - shift}) per prime, in the analytic normalization.
  std::map<long, std::vector<long double>> local;
  for (long p = 2; p <= n; ++p) {
    if (spf[static_cast<std::size_t>(p)] != p) continue;
    auto it = data.factors.find(p);
    if (it == data.factors.end()) throw InsufficientData(n);
    const EulerFactor& f = it->second;
    const long double scale = std::pow(static_cast<long double>(p), -f.shift.get_d());
    std::vector<long double> c;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
      c.push_back(f.coeffs[i].get_d() * std::pow(scale, static_cast<long double>(i)));
    std::size_t top = 0;
    for (long pe = 1; pe <= n / p; pe *= p) ++top;
    std::vector<long double> inv{1.0L};
    for (std::size_t e = 1; e <= top; ++e) {
      long double v = 0;
      for (std::size_t i = 1; i < c.size() && i <= e; ++i) v -= c[i] * inv[e - i];
      inv.push_back(v);
    }
    local[p] = std::move(inv);
  }
  a[1] = 1;
  for (long m = 2; m <= n; ++m) {
    const long p = spf[static_cast<std::size_t>(m)];
    long rest = m;
    std::size_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    const auto& inv = local[p];
    a[static_cast<std::size_t>(m)] = (e < inv.size() ? inv[e] : 0.0L) * a[static_cast<std::size_t>(rest)];
  }
  return a;
}

CentralValue central_value(const LData& data, const EvalOptions& options) {
  if (data.sign != 1 && data.sign != -1) throw ArgumentError("sign must be +-1");
  if (data.conductor < 1) throw ArgumentError("conductor must be positive");
  if (options.kernel <= 0) throw ArgumentError("smoothing kernel must be positive");
  std::size_t degree = data.gamma_shifts.size();
  for (const auto& [p, f] : data.factors) degree = std::max<std::size_t>(degree, static_cast<std::size_t>(f.degree()));
  const long double s = options.s, b = options.kernel;
  long double c = 1.0L + std::fabs(s - 0.5L);
  for (double mu : data.gamma_shifts) c = std::max(c, 0.5L - static_cast<long double>(mu) - std::min(s, 1 - s) + 1);
  for (const auto& [z, r] : data.poles) c = std::max(c, std::fabs(static_cast<long double>(z) - s) + 0.5L);
  const Kernel direct(data.gamma_shifts, s, c), dual(data.gamma_shifts, 1 - s, c);
  const long double root = std::sqrt(data.conductor);

  // G(u) = b^u: the first sum sees V(n / (b sqrt q)), the dual sum V(n b / sqrt q).
  auto term_bound = [&](long n) {
    return coefficient_bound(n, degree) *
           (std::fabs(direct.value(n / (b * root))) * std::pow(static_cast<long double>(n), -s) +
            std::fabs(dual.value(n * b / root)) * std::pow(static_cast<long double>(n), s - 1));
  };
  // Cutoff: the bound stays below tolerance on a full doubling window.
  long n_max = 1;
  while (true) {
    if (n_max > 50'000'000) throw StructuralError("approximate functional equation does not converge");
    bool small = true;
    for (long m : {n_max, 2 * n_max, 3 * n_max / 2}) small = small && term_bound(m) * m < options.tolerance;
    if (small) break;
    n_max = std::max(n_max + 1, n_max * 5 / 4);
  }
  const auto coeffs = dirichlet_coefficients(data, n_max);

  long double first = 0, second = 0, magnitude = 0;
  for (long n = 1; n <= n_max; ++n) {
    const long double an = coeffs[static_cast<std::size_t>(n)];
    if (an == 0) continue;
    const long double t1 = an * std::pow(static_cast<long double>(n), -s) * direct.value(n / (b * root));
    const long double t2 = an * std::pow(static_cast<long double>(n), s - 1) * dual.value(n * b / root);
    first += t1;
    second += t2;
    magnitude += std::fabs(t1) + std::fabs(t2);
  }
  const Cx lg_s = log_gamma_factor(data.gamma_shifts, Cx(s)), lg_1s = log_gamma_factor(data.gamma_shifts, Cx(1 - s));
  const long double lq = std::log(data.conductor);
  const long double eps_s = data.sign * std::exp((0.5L - s) * lq + lg_1s - lg_s).real();
  long double residue = 0;
  for (const auto& [z, r] : data.poles) {
    const long double u = static_cast<long double>(z) - s;
    residue += static_cast<long double>(r) * std::pow(b, u) / u;
  }
  const long double completion = std::exp(0.5L * s * lq + lg_s).real();

  CentralValue out;
  out.value = first + eps_s * second - residue / completion;
  out.completed = out.value * completion;
  out.terms = n_max;
  long double tail = 0;
  for (long m = n_max + 1; m <= 4 * n_max; m += std::max(1L, n_max / 64)) tail += term_bound(m) * std::max(1L, n_max / 64);
  out.error = tail + 1e-17L * magnitude * (1 + std::fabs(eps_s)) + options.tolerance;
  return out;
}

}  // namespace quatperiod
