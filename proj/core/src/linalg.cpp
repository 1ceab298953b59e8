#include "linalg.hpp"

namespace pkit::linalg {

std::vector<std::size_t> rref(QMat &m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto &v : m[row]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational k = m[r][c];
      for (std::size_t j = 0; j < cols; ++j) m[r][j] -= k * m[row][j];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

std::size_t rank(QMat m) { return rref(m).size(); }

std::optional<QMat> inverse(const QMat &m) {
  const std::size_t n = m.size();
  QMat aug(n, QVec(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  QMat inv(n, QVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

QMat transpose(const QMat &m) {
  if (m.empty()) return {};
  QMat t(m[0].size(), QVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
  return t;
}

std::vector<QVec> nullspace(const QMat &m) {
  if (m.empty()) return {};
  QMat r = m;
  auto piv = rref(r);
  const std::size_t cols = m[0].size();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<QVec> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    QVec v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r[i][f];
    out.push_back(v);
  }
  return out;
}

Rational dot(const QVec &a, const QVec &b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

ScaledElement dot(const QVec &a, const std::vector<ModelElement> &x) {
  ScaledElement s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += ScaledElement(x[i]) * a[i];
  return s;
}

ScaledElement dot(const QVec &a, const std::vector<ScaledElement> &x) {
  ScaledElement s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += x[i] * a[i];
  return s;
}

std::vector<ScaledElement> apply(const QMat &m, const std::vector<ScaledElement> &x) {
  std::vector<ScaledElement> out;
  for (const auto &row : m) out.push_back(dot(row, x));
  return out;
}

Integer lcm_den(const QVec &v) {
  Integer l = 1;
  for (const auto &q : v) l = lcm(l, q.get_den());
  return l;
}

} // namespace pkit::linalg
