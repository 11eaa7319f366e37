#include "kappa/linalg.hpp"

namespace kappa {

std::vector<int> rref(QMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && is_zero(m[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    Rational inv = 1 / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      Rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

std::optional<QVector> solve_columns(const std::vector<QVector>& columns, const QVector& b) {
  size_t n = b.size(), k = columns.size();
  for (const auto& col : columns)
    if (col.size() != n) throw dimension_error("solve_columns: ragged columns");
  // augmented [A | b], A is n x k
  QMatrix m(n, QVector(k + 1, Rational(0)));
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < n; ++i) m[i][j] = columns[j][i];
  for (size_t i = 0; i < n; ++i) m[i][k] = b[i];
  std::vector<int> pivots = rref(m);
  // inconsistent iff a pivot lands in the augmented column
  for (int p : pivots)
    if (p == static_cast<int>(k)) return std::nullopt;
  QVector x(k, Rational(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[static_cast<size_t>(pivots[r])] = m[r][k];
  return x;
}

std::vector<QVector> nullspace(QMatrix a) {
  std::vector<QVector> basis;
  if (a.empty()) return basis;
  size_t cols = a[0].size();
  std::vector<int> pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
  for (size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVector v(cols, Rational(0));
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<size_t>(pivots[r])] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace kappa
