#include "quatperiod/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace quatperiod {

std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t p = lead_row;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != lead_row)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(lead_row, k));
    const Rational inv = Rational(1) / m(lead_row, c);
    for (std::size_t k = c; k < m.cols(); ++k) m(lead_row, k) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || m(r, c) == 0) continue;
      const Rational f = m(r, c);
      for (std::size_t k = c; k < m.cols(); ++k) m(r, k) -= f * m(lead_row, k);
    }
    pivots.push_back(c);
    ++lead_row;
  }
  return pivots;
}

std::size_t rank(QMatrix m) { return rref(m).size(); }

Rational determinant(QMatrix m) {
  if (m.rows() != m.cols()) throw ArgumentError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(p, k), m(c, k));
      det = -det;
    }
    det *= m(c, c);
    const Rational inv = Rational(1) / m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      const Rational f = m(r, c) * inv;
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw StructuralError("singular matrix");
  QMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

QMatrix kernel(const QMatrix& m) {
  QMatrix r = m;
  auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  QMatrix out(free_cols.size(), m.cols());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t f = free_cols[k];
    out(k, f) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) out(k, pivots[i]) = -r(i, f);
  }
  return out;
}

QVector solve(const QMatrix& m, const QVector& b) {
  if (b.size() != m.rows()) throw ArgumentError("right-hand side length mismatch");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) throw StructuralError("inconsistent linear system");
  QVector x(m.cols(), Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
  return x;
}

QVector solve_left(const QMatrix& m, const QVector& b) { return solve(m.transpose(), b); }

QVector characteristic_polynomial(const QMatrix& m) {
  // Faddeev-LeVerrier: exact over Q.
  if (m.rows() != m.cols()) throw ArgumentError("characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  QVector c(n + 1, Rational(0));
  c[n] = 1;
  QMatrix mk(n, n);  // M_0 = 0
  const QMatrix id = QMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + id.scaled(c[n - k + 1]);
    QMatrix am = m * mk;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

QMatrix row_space_basis(const QMatrix& m) {
  QMatrix r = m;
  auto piv = rref(r);
  QMatrix out(piv.size(), m.cols());
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = r(i, j);
  return out;
}

ZMatrix hermite_normal_form(const ZMatrix& input) {
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < input.rows(); ++i) rows.push_back(input.row(i));
  const std::size_t ncols = input.cols();
  std::vector<std::vector<Integer>> result;
  std::size_t start = 0;
  for (std::size_t c = 0; c < ncols; ++c) {
    // Euclid on column c among rows[start..].
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = start; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        if (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c])) best = r;
      }
      if (best == rows.size()) break;
      std::swap(rows[start], rows[best]);
      bool done = true;
      for (std::size_t r = start + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[start][c].get_mpz_t());
        for (std::size_t k = c; k < ncols; ++k) rows[r][k] -= q * rows[start][k];
        if (rows[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (start < rows.size() && rows[start][c] != 0) {
      if (rows[start][c] < 0)
        for (auto& v : rows[start]) v = -v;
      // Reduce the rows above modulo the pivot.
      for (std::size_t r = 0; r < start; ++r) {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[start][c].get_mpz_t());
        if (q != 0)
          for (std::size_t k = c; k < ncols; ++k) rows[r][k] -= q * rows[start][k];
      }
      ++start;
    }
  }
  ZMatrix out(start, ncols);
  for (std::size_t r = 0; r < start; ++r) out.set_row(r, rows[r]);
  return out;
}

ZMatrix to_integer_matrix(const QMatrix& m) {
  ZMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integral(m(i, j))) throw ArgumentError("matrix entry is not integral");
      out(i, j) = m(i, j).get_num();
    }
  return out;
}

QMatrix to_rational_matrix(const ZMatrix& m) {
  QMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

Rational dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw ArgumentError("dot product length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string matrix_to_string(const QMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace quatperiod
