#include "pkit/int_matrix.hpp"

#include <algorithm>
#include <utility>

namespace pkit {

namespace {

bool zero_row(const IntVec &r) {
  return std::all_of(r.begin(), r.end(), [](const Integer &x) { return x == 0; });
}

} // namespace

IntMat hermite_normal_form(IntMat m) {
  if (m.empty()) return m;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    // gcd elimination below `row` in column c
    for (;;) {
      std::size_t best = m.size();
      for (std::size_t r = row; r < m.size(); ++r)
        if (m[r][c] != 0 && (best == m.size() || abs(m[r][c]) < abs(m[best][c]))) best = r;
      if (best == m.size()) break;
      std::swap(m[row], m[best]);
      bool done = true;
      for (std::size_t r = row + 1; r < m.size(); ++r) {
        if (m[r][c] == 0) continue;
        Integer q = floor_div(m[r][c], m[row][c]);
        for (std::size_t j = 0; j < cols; ++j) m[r][j] -= q * m[row][j];
        if (m[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (m[row][c] == 0) continue;
    if (m[row][c] < 0)
      for (auto &x : m[row]) x = -x;
    for (std::size_t r = 0; r < row; ++r) {
      Integer q = floor_div(m[r][c], m[row][c]);
      if (q != 0)
        for (std::size_t j = 0; j < cols; ++j) m[r][j] -= q * m[row][j];
    }
    ++row;
  }
  m.erase(std::remove_if(m.begin(), m.end(), zero_row), m.end());
  return m;
}

std::vector<std::size_t> hnf_pivots(const IntMat &h) {
  std::vector<std::size_t> p;
  for (const auto &r : h) {
    std::size_t c = 0;
    while (c < r.size() && r[c] == 0) ++c;
    p.push_back(c);
  }
  return p;
}

std::vector<Integer> smith_invariants(IntMat m) {
  std::vector<Integer> out;
  if (m.empty()) return out;
  const std::size_t R = m.size(), C = m[0].size();
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    // smallest nonzero entry of the trailing block as pivot
    for (;;) {
      std::size_t pr = R, pc = C;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j)
          if (m[i][j] != 0 && (pr == R || abs(m[i][j]) < abs(m[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == R) return out;
      std::swap(m[t], m[pr]);
      for (auto &r : m) std::swap(r[t], r[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        Integer q = floor_div(m[i][t], m[t][t]);
        for (std::size_t j = t; j < C; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        Integer q = floor_div(m[t][j], m[t][t]);
        for (std::size_t i = t; i < R; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // the pivot must divide the rest of the block
      bool divides = true;
      for (std::size_t i = t + 1; i < R && divides; ++i)
        for (std::size_t j = t + 1; j < C && divides; ++j)
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t k = t; k < C; ++k) m[t][k] += m[i][k];
            divides = false;
          }
      if (divides) break;
    }
    out.push_back(abs(m[t][t]));
  }
  return out;
}

IntVec reduce_mod(const IntMat &h, IntVec v) {
  auto piv = hnf_pivots(h);
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::size_t c = piv[i];
    Integer q = floor_div(v[c], h[i][c]);
    if (q != 0)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= q * h[i][j];
  }
  return v;
}

bool in_row_lattice(const IntMat &h, const IntVec &v) {
  auto piv = hnf_pivots(h);
  IntVec r = v;
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::size_t c = piv[i];
    // columns before c are already zero
    if (r[c] % h[i][c] != 0) return false;
    Integer q = r[c] / h[i][c];
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= q * h[i][j];
  }
  return zero_row(r);
}

Integer determinant_of_hnf(const IntMat &h) {
  Integer d = 1;
  auto piv = hnf_pivots(h);
  for (std::size_t i = 0; i < h.size(); ++i) d *= h[i][piv[i]];
  return d;
}

} // namespace pkit
