#include "pkit/geometry.hpp"

#include "linalg.hpp"
#include "pkit/eval.hpp"

#include <algorithm>

namespace pkit {

using linalg::QMat;
using linalg::QVec;

// ---- generator form --------------------------------------------------------

Formula GeneratorForm::formula(const std::vector<std::string> &vars, ConstPool &pool) const {
  const std::size_t j = directions.size();
  std::set<std::string> taken(vars.begin(), vars.end());
  std::vector<std::string> ts;
  for (std::size_t i = 0; i < j; ++i) {
    ts.push_back(fresh_name("_t" + std::to_string(i), taken));
    taken.insert(ts.back());
  }
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < j; ++i) {
    LinearTerm t = LinearTerm::var(ts[i]);
    ModelElement lo(0), hi = lengths[i];
    if (hi < lo) std::swap(lo, hi);
    parts.push_back(Formula::rel(Rel::Le, pool.term(lo), t));
    parts.push_back(Formula::rel(Rel::Le, t, pool.term(hi)));
  }
  for (std::size_t k = 0; k < n(); ++k) {
    QVec col;
    for (std::size_t i = 0; i < j; ++i) col.push_back(directions[i][k]);
    Integer L = linalg::lcm_den(col);
    LinearTerm rhs = pool.term(anchor[k] * L);
    for (std::size_t i = 0; i < j; ++i) rhs += LinearTerm::var(ts[i], Rational(col[i] * L).get_num());
    parts.push_back(Formula::rel(Rel::Eq, LinearTerm::var(vars.at(k), L), rhs));
  }
  return mk_exists(ts, mk_and(std::move(parts)));
}

std::vector<ScaledElement> GeneratorForm::point(const std::vector<ModelElement> &t) const {
  std::vector<ScaledElement> x;
  for (std::size_t k = 0; k < n(); ++k) {
    ScaledElement v(anchor[k]);
    for (std::size_t i = 0; i < directions.size(); ++i) v += ScaledElement(t[i]) * directions[i][k];
    x.push_back(v);
  }
  return x;
}

Parallelogram generators_to_strips(const GeneratorForm &g) {
  const std::size_t n = g.n(), j = g.directions.size();
  if (g.lengths.size() != j) throw DomainError("generators_to_strips: lengths do not match generators");
  for (const auto &d : g.directions)
    if (d.size() != n) throw DomainError("generators_to_strips: direction has wrong arity");
  QMat rows = g.directions; // j x n
  if (linalg::rank(rows) != j)
    throw DomainError("generators_to_strips: generator directions are linearly dependent");

  // free coordinates: pivot columns of the direction matrix
  QMat ech = rows;
  std::vector<std::size_t> F = linalg::rref(ech);
  // B_F[i][l] = direction i at free coordinate l; t = W (x_F - a_F)
  QMat BF(j, QVec(j));
  for (std::size_t i = 0; i < j; ++i)
    for (std::size_t l = 0; l < j; ++l) BF[l][i] = g.directions[i][F[l]];
  auto W = j ? linalg::inverse(BF) : std::optional<QMat>(QMat{});
  if (!W) throw DomainError("generators_to_strips: singular free block");

  Parallelogram p;
  p.n = n;
  p.free = F;
  p.graph.assign(n, std::nullopt);
  std::vector<ModelElement> aF;
  for (auto f : F) aF.push_back(g.anchor[f]);

  auto lattice_cong = [&](const QVec &w) {
    // w . (x_F - a_F) integral
    Integer L = linalg::lcm_den(w);
    if (L == 1) return;
    LinearCong c;
    ModelElement s(0);
    for (std::size_t l = 0; l < w.size(); ++l) {
      Integer k = Rational(w[l] * L).get_num();
      c.coeffs.push_back(k);
      s = s + aF[l] * k;
    }
    c.modulus = L;
    c.residue = s.residue(L);
    p.congruences.push_back(c);
  };

  for (std::size_t i = 0; i < j; ++i) {
    const QVec &w = (*W)[i];
    Strip s;
    s.coeffs = w;
    ScaledElement base = linalg::dot(w, aF);
    ScaledElement top = base + ScaledElement(g.lengths[i]);
    s.lower = std::min(base, top);
    s.upper = std::max(base, top);
    p.strips.push_back(s);
    lattice_cong(w);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (std::find(F.begin(), F.end(), k) != F.end()) continue;
    // x_k = a_k + sum_i beta_ik t_i = a_k + u . (x_F - a_F)
    QVec u(j, 0);
    for (std::size_t i = 0; i < j; ++i)
      for (std::size_t l = 0; l < j; ++l) u[l] += g.directions[i][k] * (*W)[i][l];
    GraphMap gm;
    gm.coeffs = u;
    gm.offset = ScaledElement(g.anchor[k]) - linalg::dot(u, aF);
    p.graph[k] = gm;
    lattice_cong(u);
  }
  return p;
}

// ---- octants -----------------------------------------------------------------

Octant octant_of(const Parallelogram &p, const std::vector<int> &eta) {
  if (!p.center) throw DomainError("octant_of: parallelogram has no center");
  if (eta.size() != p.strips.size()) throw DomainError("octant_of: sign vector has wrong length");
  Octant o;
  o.parent = p;
  o.eta = eta;
  o.region = p;
  auto c = p.free_part(*p.center);
  for (std::size_t i = 0; i < eta.size(); ++i) {
    Strip &s = o.region.strips[i];
    ScaledElement fa = s.apply(c);
    if (eta[i] == 1) {
      s.lower = fa;
    } else if (eta[i] == -1) {
      s.upper = fa;
    } else {
      throw DomainError("octant_of: signs must be +1 or -1");
    }
  }
  return o;
}

// ---- bounded sets ----------------------------------------------------------

namespace {

// Splits an affine expression into coefficients on `names` and a constant
// evaluated under `params`.
std::pair<QVec, ScaledElement> split_affine(const RatAffine &f, const std::vector<std::string> &names,
                                            const Assignment &params) {
  QVec c;
  RatAffine rest = f;
  for (const auto &v : names) {
    c.push_back(f.coeff(v));
    rest = rest.without(v);
  }
  return {c, rest.eval(params)};
}

ScaledElement sdot2(const QVec &l, const ScaledElement &x, const ScaledElement &y) {
  return x * l[0] + y * l[1];
}

} // namespace

std::vector<Parallelogram> decompose_bounded(const Formula &f0, const std::vector<std::string> &vars,
                                             const ModelElement &alpha, const Assignment &params,
                                             const BoundedOptions &opts) {
  Formula f = f0.is_quantifier_free() ? f0 : eliminate(f0, opts.cells.qe);
  {
    ConstPool pool("_a");
    LinearTerm A = pool.term(alpha);
    std::vector<Formula> inside;
    for (const auto &v : vars) {
      inside.push_back(Formula::rel(Rel::Lt, -A, LinearTerm::var(v)));
      inside.push_back(Formula::rel(Rel::Lt, LinearTerm::var(v), A));
    }
    if (!decide_subset(f, mk_and(inside), pool.with(params), opts.cells.qe))
      throw DomainError("decompose_bounded: set is not bounded by " + alpha.str());
  }
  const std::size_t n = vars.size();
  auto cells = decompose(f, vars, params, opts.cells);
  std::vector<Parallelogram> out;
  for (const auto &cell : cells) {
    if (!cell.param_condition.is_true())
      throw DomainError("decompose_bounded: parameters must be instantiated");
    std::vector<std::size_t> F;
    std::vector<std::string> fnames;
    for (std::size_t j = 0; j < n; ++j)
      if (cell.coords[j].is_interval()) {
        F.push_back(j);
        fnames.push_back(vars[j]);
      }
    if (F.size() > 2) throw DomainError("decompose_bounded: cells of dimension above 2 are not supported");

    Parallelogram base;
    base.n = n;
    base.free = F;
    base.graph.assign(n, std::nullopt);
    for (std::size_t j = 0; j < n; ++j) {
      const CellCoord &c = cell.coords[j];
      if (c.is_interval()) continue;
      auto [coef, off] = split_affine(cell.in_free_coords(c.value, j), fnames, params);
      base.graph[j] = GraphMap{coef, off};
    }
    for (std::size_t l = 0; l < F.size(); ++l) {
      const CellCoord &c = cell.coords[F[l]];
      if (c.modulus == 1) continue;
      LinearCong lc;
      lc.coeffs.assign(F.size(), 0);
      lc.coeffs[l] = 1;
      lc.modulus = c.modulus;
      lc.residue = c.residue;
      base.congruences.push_back(lc);
    }
    auto bounds = [&](std::size_t l) {
      const CellCoord &c = cell.coords[F[l]];
      if (!c.lower || !c.upper) throw DomainError("decompose_bounded: unbounded cell");
      return std::make_pair(split_affine(cell.in_free_coords(*c.lower, F[l]), fnames, params),
                            split_affine(cell.in_free_coords(*c.upper, F[l]), fnames, params));
    };

    if (F.empty()) {
      out.push_back(base);
      continue;
    }
    if (F.size() == 1) {
      auto [lo, hi] = bounds(0);
      Strip s{{Rational(1)}, lo.second, hi.second};
      base.strips.push_back(s);
      out.push_back(base);
      continue;
    }
    // two free coordinates: x in [a, b], f(x) <= y <= g(x)
    auto [xl, xh] = bounds(0);
    auto [yl, yh] = bounds(1);
    const CellCoord &cx = cell.coords[F[0]];
    // tighten x to the first and last values in its residue class
    ModelElement a = xl.second.to_model(), b = xh.second.to_model();
    a = a + ModelElement(mod(cx.residue - a.residue(cx.modulus), cx.modulus));
    b = b - ModelElement(mod(b.residue(cx.modulus) - cx.residue, cx.modulus));
    Rational sf = yl.first[0], sg = yh.first[0];
    ScaledElement cf = yl.second, cg = yh.second;
    ScaledElement A(a), B(b);
    auto fval = [&](const ScaledElement &x) { return x * sf + cf; };
    auto gval = [&](const ScaledElement &x) { return x * sg + cg; };
    auto with_strips = [&](std::vector<Strip> ss) {
      Parallelogram p = base;
      p.strips = std::move(ss);
      return p;
    };
    Strip xs{{Rational(1), Rational(0)}, A, B};
    if (sf == sg) {
      out.push_back(with_strips({xs, Strip{{-sf, Rational(1)}, cf, cg}}));
      continue;
    }
    ScaledElement wa = gval(A) - fval(A), wb = gval(B) - fval(B);
    // band of constant width along one side, plus a triangle
    struct Pt {
      ScaledElement x, y;
    };
    Pt apex, p1, p2;       // p1-p2 is the vertical edge
    Rational s_apex_p1, s_apex_p2; // slopes of apex-p1 and apex-p2
    if (wa <= wb) {
      if (wa.sign() > 0) out.push_back(with_strips({xs, Strip{{-sf, Rational(1)}, cf, cf + wa}}));
      apex = {A, gval(A)};
      p1 = {B, fval(B) + wa};
      p2 = {B, gval(B)};
      s_apex_p1 = sf;
      s_apex_p2 = sg;
    } else {
      if (wb.sign() > 0) out.push_back(with_strips({xs, Strip{{-sg, Rational(1)}, cg - wb, cg}}));
      apex = {B, fval(B)};
      p1 = {A, fval(A)};
      p2 = {A, gval(A) - wb};
      s_apex_p1 = sf;
      s_apex_p2 = sg;
    }
    if (A == B) {
      // a single column: one strip in y
      out.push_back(with_strips({xs, Strip{{Rational(0), Rational(1)}, fval(A), gval(A)}}));
      continue;
    }
    // corner parallelograms: at vertex V, the barycentric coordinates of the
    // two other vertices are at most 1/2
    struct Edge {
      QVec normal; // linear part of a functional vanishing along the edge
    };
    auto slope_normal = [](const Rational &s) { return QVec{-s, Rational(1)}; };
    QVec vert{Rational(1), Rational(0)};
    // edges: apex-p1 (slope s_apex_p1), apex-p2 (slope s_apex_p2), p1-p2 (vertical)
    std::vector<Pt> V{apex, p1, p2};
    auto edge_normal = [&](std::size_t u, std::size_t v) {
      if ((u == 0 && v == 1) || (u == 1 && v == 0)) return slope_normal(s_apex_p1);
      if ((u == 0 && v == 2) || (u == 2 && v == 0)) return slope_normal(s_apex_p2);
      return vert;
    };
    for (std::size_t v = 0; v < 3; ++v) {
      std::vector<Strip> ss;
      for (std::size_t u = 0; u < 3; ++u) {
        if (u == v) continue;
        std::size_t w = 3 - u - v; // edge v-w is opposite to u
        QVec L = edge_normal(v, w);
        ScaledElement at_v = sdot2(L, V[v].x, V[v].y);
        ScaledElement at_u = sdot2(L, V[u].x, V[u].y) - at_v;
        if (at_u.sign() < 0) {
          for (auto &q : L) q = -q;
          at_v = -at_v;
          at_u = -at_u;
        }
        ss.push_back(Strip{L, at_v, at_v + at_u * Rational(1, 2)});
      }
      out.push_back(with_strips(ss));
    }
  }

  // each piece inside f, union equal to f
  ConstPool pool;
  std::vector<Formula> pieces;
  for (const auto &p : out) pieces.push_back(p.formula(vars, pool));
  Assignment env = pool.with(params);
  for (const auto &pf : pieces)
    if (!decide_subset(pf, f, env, opts.cells.qe))
      throw DomainError("decompose_bounded: piece not contained in the set");
  if (!decide_equivalent(mk_or(pieces), f, env, opts.cells.qe))
    throw DomainError("decompose_bounded: union differs from the set");
  return out;
}

// ---- generic centers -----------------------------------------------------

std::vector<Parallelogram> split_generic_centers(const Parallelogram &p,
                                                 const std::vector<ModelElement> &params) {
  const std::size_t n = p.n;
  if (!p.is_open() || p.strips.size() != n)
    throw DomainError("split_generic_centers: need an open parallelogram with n strips");
  QMat Fm;
  for (const auto &s : p.strips) Fm.push_back(s.coeffs);
  auto Finv = linalg::inverse(Fm);
  if (!Finv) throw DomainError("split_generic_centers: strips are not independent");
  if (n > 12) throw ResourceLimit("split_generic_centers: too many pieces");

  std::vector<ModelElement> used = params;
  for (const auto &s : p.strips) {
    used.push_back((s.lower * Rational(s.clearing())).to_model());
    used.push_back((s.upper * Rational(s.clearing())).to_model());
  }

  Integer K = 1;
  for (const auto &c : p.congruences) K = lcm(K, c.modulus);

  auto build = [&](bool perturb) -> std::optional<std::vector<Parallelogram>> {
    std::size_t rank = fresh_rank(used);
    std::vector<ScaledElement> mids;
    for (const auto &s : p.strips) {
      ScaledElement m = (s.lower + s.upper) * Rational(1, 2);
      if (perturb) m += ScaledElement(ModelElement::infinite(1, rank++));
      mids.push_back(m);
    }
    std::vector<Parallelogram> pieces;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Parallelogram q = p;
      std::vector<ScaledElement> target;
      for (std::size_t i = 0; i < n; ++i) {
        Strip &s = q.strips[i];
        if (mask >> i & 1) s.lower = mids[i];
        else s.upper = mids[i];
        target.push_back((s.lower + s.upper) * Rational(1, 2));
      }
      auto cx = linalg::apply(*Finv, target);
      std::vector<ModelElement> c;
      for (const auto &v : cx) c.push_back(v.floor());
      // finite adjustment into the congruence classes
      std::optional<std::vector<ModelElement>> found;
      if (K == 1) {
        found = c;
      } else {
        if (K > 64 || n > 4) throw ResourceLimit("split_generic_centers: congruence search too large");
        long k = K.get_si();
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(k);
        for (std::size_t idx = 0; idx < total && !found; ++idx) {
          std::vector<ModelElement> d = c;
          std::size_t r = idx;
          for (std::size_t i = 0; i < n; ++i) {
            d[i] = d[i] + ModelElement(static_cast<long>(r % static_cast<std::size_t>(k)));
            r /= static_cast<std::size_t>(k);
          }
          bool ok = true;
          for (const auto &cg : q.congruences) ok = ok && cg.contains(d);
          if (ok) found = d;
        }
      }
      if (!found || !q.contains(*found))
        throw DomainError("split_generic_centers: no lattice point near the piece center");
      q.center = *found;
      if (!q.is_centered()) throw DomainError("split_generic_centers: center drifted");
      if (tuple_dim(*found, params) != static_cast<int>(n)) return std::nullopt;
      pieces.push_back(q);
    }
    return pieces;
  };

  auto pieces = build(false);
  if (!pieces) pieces = build(true);
  if (!pieces) throw DomainError("split_generic_centers: could not make generic centers");

  std::vector<std::string> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i));
  ConstPool pool;
  std::vector<Formula> fs;
  for (const auto &q : *pieces) fs.push_back(q.formula(vars, pool));
  Formula whole = p.formula(vars, pool);
  if (!decide_equivalent(mk_or(fs), whole, pool.env()))
    throw DomainError("split_generic_centers: pieces do not cover the parallelogram");
  return *pieces;
}

} // namespace pkit
