#include "quatperiod/poly.hpp"

#include <algorithm>
#include <sstream>

namespace quatperiod {

Poly Poly::constant(int nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(Monomial(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw ArgumentError("variable index out of range");
  Monomial m(static_cast<std::size_t>(nvars), 0);
  m[static_cast<std::size_t>(index)] = 1;
  return monomial(m);
}

Poly Poly::monomial(const Monomial& m, const Rational& c) {
  Poly p(static_cast<int>(m.size()));
  p.add_term(m, c);
  return p;
}

Poly Poly::linear(const QVector& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  Poly p(n);
  for (int i = 0; i < n; ++i) {
    Monomial m(coeffs.size(), 0);
    m[static_cast<std::size_t>(i)] = 1;
    p.add_term(m, coeffs[static_cast<std::size_t>(i)]);
  }
  return p;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (int e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

bool Poly::is_homogeneous(int deg) const {
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (int e : m) s += e;
    if (s != deg) return false;
  }
  return true;
}

Rational Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != nvars_) throw ArgumentError("monomial arity mismatch");
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.nvars_ != nvars_) throw ArgumentError("polynomial arity mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.nvars_ != nvars_) throw ArgumentError("polynomial arity mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly Poly::operator-() const { return scaled(-1); }

Poly Poly::operator*(const Poly& o) const {
  if (o.nvars_ != nvars_) throw ArgumentError("polynomial arity mismatch");
  Poly r(nvars_);
  Monomial m(static_cast<std::size_t>(nvars_));
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  return r;
}

Poly Poly::scaled(const Rational& c) const {
  Poly r(nvars_);
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
  return r;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw ArgumentError("negative polynomial power");
  Poly r = constant(nvars_, 1);
  Poly b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Rational Poly::evaluate(const QVector& point) const {
  if (static_cast<int>(point.size()) != nvars_) throw ArgumentError("evaluation point arity mismatch");
  Rational s = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t *= quatperiod::pow(point[i], m[i]);
    s += t;
  }
  return s;
}

Poly Poly::derivative(int var) const {
  Poly r(nvars_);
  const auto v = static_cast<std::size_t>(var);
  for (const auto& [m, c] : terms_) {
    if (m[v] == 0) continue;
    Monomial mm = m;
    mm[v] -= 1;
    r.add_term(mm, c * m[v]);
  }
  return r;
}

Poly Poly::compose(const std::vector<Poly>& images) const {
  if (static_cast<int>(images.size()) != nvars_) throw ArgumentError("compose arity mismatch");
  const int n = images.empty() ? 0 : images[0].nvars();
  // Cache powers of each image.
  std::vector<std::vector<Poly>> powers(images.size());
  Poly r(n);
  for (const auto& [m, c] : terms_) {
    Poly t = constant(n, c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(constant(n, 1));
      while (static_cast<int>(pw.size()) <= m[i]) pw.push_back(pw.back() * images[i]);
      t = t * pw[static_cast<std::size_t>(m[i])];
    }
    r += t;
  }
  return r;
}

Poly Poly::linear_substitute(const QMatrix& mat) const {
  if (static_cast<int>(mat.rows()) != nvars_) throw ArgumentError("substitution matrix arity mismatch");
  std::vector<Poly> images;
  for (std::size_t i = 0; i < mat.rows(); ++i) images.push_back(linear(mat.row(i)));
  if (images.empty()) return *this;
  return compose(images);
}

Poly Poly::with_nvars(int n) const {
  Poly r(n);
  for (const auto& [m, c] : terms_) {
    Monomial mm(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (static_cast<int>(i) >= n) {
        if (m[i] != 0) throw ArgumentError("cannot drop a variable that occurs");
        continue;
      }
      mm[i] = m[i];
    }
    r.add_term(mm, c);
  }
  return r;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) os << " + ";
    first = false;
    os << to_string(c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      os << "*" << (i < names.size() ? names[i] : "x" + std::to_string(i));
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

Poly embed(const Poly& p, int offset, int total) {
  if (offset < 0 || offset + p.nvars() > total) throw ArgumentError("embedding out of range");
  Poly r(total);
  Monomial mm(static_cast<std::size_t>(total), 0);
  for (const auto& [m, c] : p.terms()) {
    std::fill(mm.begin(), mm.end(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) mm[static_cast<std::size_t>(offset) + i] = m[i];
    r.add_term(mm, c);
  }
  return r;
}

namespace {
void monomials_rec(int nvars, int idx, int remaining, Monomial& cur, std::vector<Monomial>& out) {
  if (idx == nvars - 1) {
    cur[static_cast<std::size_t>(idx)] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[static_cast<std::size_t>(idx)] = e;
    monomials_rec(nvars, idx + 1, remaining - e, cur, out);
  }
}
}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (degree == 0) out.emplace_back();
    return out;
  }
  if (degree < 0) return out;
  Monomial cur(static_cast<std::size_t>(nvars), 0);
  monomials_rec(nvars, 0, degree, cur, out);
  return out;
}

QVector coordinates(const Poly& p, const std::vector<Monomial>& basis) {
  QVector c(basis.size());
  std::size_t found = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c[i] = p.coefficient(basis[i]);
    if (c[i] != 0) ++found;
  }
  if (found != p.terms().size()) throw ArgumentError("polynomial has terms outside the monomial basis");
  return c;
}

Poly from_coordinates(const QVector& c, const std::vector<Monomial>& basis) {
  if (basis.empty()) return Poly(0);
  Poly p(static_cast<int>(basis[0].size()));
  for (std::size_t i = 0; i < basis.size(); ++i) p.add_term(basis[i], c[i]);
  return p;
}

UPoly upoly_trim(UPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return upoly_trim(r);
}

Rational upoly_eval(const UPoly& p, const Rational& x) {
  Rational s = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
  return s;
}

namespace {
std::vector<Integer> divisors_of(Integer n) {
  n = abs(n);
  std::vector<Integer> out;
  if (n == 0) return out;
  Integer d = 1;
  for (; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  }
  return out;
}

UPoly synthetic_divide(const UPoly& p, const Rational& root) {
  const std::size_t n = p.size() - 1;
  UPoly q(n, Rational(0));
  Rational carry = 0;
  for (std::size_t k = n; k >= 1; --k) {
    carry = carry * root + p[k];
    q[k - 1] = carry;
  }
  return q;
}
}  // namespace

std::vector<Rational> rational_roots(const UPoly& input, UPoly* rest) {
  UPoly p = upoly_trim(input);
  if (p.empty()) throw ArgumentError("rational_roots of the zero polynomial");
  std::vector<Rational> roots;
  while (p.size() > 1 && p[0] == 0) {
    roots.emplace_back(0);
    p.erase(p.begin());
  }
  bool progress = true;
  while (p.size() > 1 && progress) {
    progress = false;
    const Integer scale = lcm_of_denominators(p);
    std::vector<Integer> z;
    for (const auto& c : p) z.push_back(Rational(c * scale).get_num());
    for (const auto& num : divisors_of(z.front())) {
      for (const auto& den : divisors_of(z.back())) {
        for (int sgn : {1, -1}) {
          const Rational cand = make_rational(num * sgn, den);
          if (upoly_eval(p, cand) == 0) {
            roots.push_back(cand);
            p = synthetic_divide(p, cand);
            progress = true;
            break;
          }
        }
        if (progress) break;
      }
      if (progress) break;
    }
  }
  if (rest) {
    const Rational lead = p.back();
    for (auto& c : p) c /= lead;
    *rest = p;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace quatperiod
