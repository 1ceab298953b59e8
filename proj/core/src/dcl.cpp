#include "pkit/cells.hpp"

#include "pkit/eval.hpp"

#include <algorithm>

namespace pkit {

namespace {

// Solves sum_i lambda_i * cols[i] = rhs over Q; free unknowns are set to 0.
std::optional<std::vector<Rational>> solve_rational(const std::vector<std::vector<Rational>> &cols,
                                                    const std::vector<Rational> &rhs) {
  const std::size_t rows = rhs.size(), m = cols.size();
  std::vector<std::vector<Rational>> M(rows, std::vector<Rational>(m + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < m; ++i) M[r][i] = cols[i][r];
    M[r][m] = rhs[r];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[row]);
    Rational inv = 1 / M[row][c];
    for (auto &v : M[row]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || M[r][c] == 0) continue;
      Rational k = M[r][c];
      for (std::size_t j = 0; j <= m; ++j) M[r][j] -= k * M[row][j];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r)
    if (M[r][m] != 0) return std::nullopt;
  std::vector<Rational> x(m, 0);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = M[r][m];
  return x;
}

std::vector<std::string> input_names(std::size_t m) {
  if (m == 1) return {"a"};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= m; ++i) out.push_back("a" + std::to_string(i));
  return out;
}

} // namespace

std::optional<LinearFunction> in_dcl(const ModelElement &b, const std::vector<ModelElement> &params) {
  std::size_t R = b.rank();
  for (const auto &p : params) R = std::max(R, p.rank());
  std::vector<std::vector<Rational>> cols;
  for (const auto &p : params) {
    std::vector<Rational> col(R);
    for (std::size_t r = 0; r < R; ++r) col[r] = p.q_at(r);
    cols.push_back(col);
  }
  std::vector<Rational> rhs(R);
  for (std::size_t r = 0; r < R; ++r) rhs[r] = b.q_at(r);
  auto lambda = solve_rational(cols, rhs);
  if (!lambda) return std::nullopt;

  if (b.is_finite()) {
    // Prefer a quotient-remainder form through a nonzero standard parameter.
    for (std::size_t i = 0; i < params.size(); ++i)
      if (params[i].is_finite() && !params[i].is_zero()) {
        std::fill(lambda->begin(), lambda->end(), Rational(0));
        (*lambda)[i] = floor_div(b.z(), params[i].z());
        break;
      }
  }

  LinearFunction lf;
  lf.inputs = input_names(params.size());
  ModelElement gamma = b;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Rational &l = (*lambda)[i];
    Integer k = l.get_den(), s = l.get_num();
    Integer c = params[i].residue(k);
    lf.s.push_back(s);
    lf.k.push_back(k);
    lf.c.push_back(c);
    gamma = gamma - (params[i] - ModelElement(c)).div_exact(k) * s;
  }
  if (!gamma.is_finite()) throw DomainError("in_dcl: internal error, non-standard constant");
  lf.gamma = RatAffine(Rational(gamma.z()));
  if (lf.eval(params) != b) throw DomainError("in_dcl: internal error, witness check failed");
  return lf;
}

int tuple_dim(const std::vector<ModelElement> &tuple, const std::vector<ModelElement> &over) {
  std::vector<ModelElement> basis = over;
  int d = 0;
  for (const auto &e : tuple) {
    if (in_dcl(e, basis)) continue;
    basis.push_back(e);
    ++d;
  }
  return d;
}

bool cell_contains(const CellDesc &cell, const std::vector<ModelElement> &point,
                   const Assignment &params) {
  if (point.size() != cell.vars.size()) throw DomainError("cell_contains: dimension mismatch");
  Assignment env = params;
  for (std::size_t i = 0; i < point.size(); ++i) env[cell.vars[i]] = point[i];
  return eval(cell.formula(), env);
}

std::vector<ModelElement> generic_point(const CellDesc &cell, const Assignment &params,
                                        const std::vector<ModelElement> &over) {
  std::vector<ModelElement> base = over;
  for (const auto &[k, v] : params) base.push_back(v);
  std::size_t rank = fresh_rank(base);
  auto infinitesimal = [&] { return ModelElement::infinite(1, rank++); };

  Assignment env = params;
  std::vector<ModelElement> point;
  std::vector<ModelElement> known = base;
  for (std::size_t j = 0; j < cell.coords.size(); ++j) {
    const CellCoord &c = cell.coords[j];
    ModelElement v;
    if (!c.is_interval()) {
      v = c.value.eval_element(env);
    } else {
      std::optional<ModelElement> lo, hi;
      if (c.lower) lo = c.lower->eval_element(env);
      if (c.upper) hi = c.upper->eval_element(env);
      auto up_to_class = [&](const ModelElement &e) {
        return e + ModelElement(mod(c.residue - e.residue(c.modulus), c.modulus));
      };
      auto down_to_class = [&](const ModelElement &e) {
        return e - ModelElement(mod(e.residue(c.modulus) - c.residue, c.modulus));
      };
      if (lo && hi) {
        if (*lo > *hi) throw DomainError("generic_point: empty fibre at coordinate " + cell.vars[j]);
        if (is_finite(*hi - *lo))
          throw DomainError("generic_point: coordinate " + cell.vars[j] +
                            " has finite width " + (*hi - *lo).str() + " at the chosen base point");
        v = down_to_class((*lo + *hi).div_floor(2));
        if (in_dcl(v, known)) v = v + infinitesimal();
      } else if (lo) {
        v = up_to_class(*lo) + infinitesimal();
      } else if (hi) {
        v = down_to_class(*hi) - infinitesimal();
      } else {
        v = up_to_class(ModelElement(0)) + infinitesimal();
      }
      known.push_back(v);
    }
    point.push_back(v);
    env[cell.vars[j]] = v;
  }
  if (!cell_contains(cell, point, params))
    throw DomainError("generic_point: constructed point left the cell");
  if (tuple_dim(point, base) != cell.dim())
    throw DomainError("generic_point: constructed point is not generic");
  return point;
}

} // namespace pkit
