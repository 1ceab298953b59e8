#include "pkit/geometry.hpp"

#include "linalg.hpp"
#include "pkit/eval.hpp"

#include <sstream>

namespace pkit {

std::string ConstPool::name(const ModelElement &e) {
  auto it = names_.find(e);
  if (it != names_.end()) return it->second;
  std::string n = prefix_ + std::to_string(names_.size());
  names_.emplace(e, n);
  env_[n] = e;
  return n;
}

Assignment ConstPool::with(const Assignment &params) const {
  Assignment a = params;
  for (const auto &[k, v] : env_) a[k] = v;
  return a;
}

namespace {

std::vector<std::string> open_vars(const Formula &f, const Assignment &env) {
  std::vector<std::string> out;
  for (const auto &v : f.free_vars())
    if (!env.count(v)) out.push_back(v);
  return out;
}

} // namespace

bool decide_equivalent(const Formula &a, const Formula &b, const Assignment &env, const QeOptions &qe) {
  Formula iff = mk_iff(a, b);
  return decide(mk_forall(open_vars(iff, env), iff), env, qe);
}

bool decide_subset(const Formula &a, const Formula &b, const Assignment &env, const QeOptions &qe) {
  Formula imp = mk_implies(a, b);
  return decide(mk_forall(open_vars(imp, env), imp), env, qe);
}

// ---- boxes -----------------------------------------------------------------

Formula Box::formula(const std::vector<std::string> &vars, ConstPool &pool) const {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    LinearTerm x = LinearTerm::var(vars.at(i));
    parts.push_back(Formula::rel(Rel::Le, pool.term(sides[i].lo), x));
    parts.push_back(Formula::rel(Rel::Le, x, pool.term(sides[i].hi)));
    if (sides[i].modulus > 1)
      parts.push_back(Formula::cong(x, LinearTerm(sides[i].residue), sides[i].modulus));
  }
  return mk_and(std::move(parts));
}

bool Box::contains(const std::vector<ModelElement> &x) const {
  if (x.size() != sides.size()) return false;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const BoxSide &s = sides[i];
    if (x[i] < s.lo || x[i] > s.hi) return false;
    if (x[i].residue(s.modulus) != mod(s.residue, s.modulus)) return false;
  }
  return true;
}

bool Box::margins_infinite() const {
  if (!anchor || !contains(*anchor)) return false;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const ModelElement &a = (*anchor)[i];
    if (!interval_infinite(sides[i].lo, a) || !interval_infinite(a, sides[i].hi)) return false;
  }
  return true;
}

std::optional<Box> Box::intersect(const Box &o) const {
  if (o.sides.size() != sides.size()) throw DomainError("Box::intersect: dimension mismatch");
  Box r;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    BoxSide s;
    s.lo = std::max(sides[i].lo, o.sides[i].lo);
    s.hi = std::min(sides[i].hi, o.sides[i].hi);
    auto m = crt_merge({{sides[i].modulus, sides[i].residue}, {o.sides[i].modulus, o.sides[i].residue}});
    if (!m || s.lo > s.hi) return std::nullopt;
    s.modulus = m->first;
    s.residue = m->second;
    r.sides.push_back(s);
  }
  if (anchor && o.anchor && *anchor == *o.anchor) r.anchor = anchor;
  return r;
}

std::string Box::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (i) os << " x ";
    os << "[" << sides[i].lo << ", " << sides[i].hi << "]";
    if (sides[i].modulus > 1) os << "{" << sides[i].residue << " mod " << sides[i].modulus << "}";
  }
  return os.str();
}

bool box_inside(const Box &box, const CellDesc &cell, const Assignment &params, const QeOptions &qe) {
  ConstPool pool;
  Formula b = box.formula(cell.vars, pool);
  return decide_subset(b, cell.formula(), pool.with(params), qe);
}

Box box_around(const CellDesc &cell, const std::vector<ModelElement> &a, const Assignment &params,
               const BoxOptions &opts) {
  if (!cell.is_open()) throw DomainError("box_around: cell is not open");
  if (a.size() != cell.coords.size()) throw DomainError("box_around: point has wrong arity");
  if (!cell_contains(cell, a, params)) throw DomainError("box_around: point is not in the cell");
  const std::size_t n = a.size();

  std::vector<ModelElement> used = a;
  for (const auto &[k, v] : params) used.push_back(v);
  Assignment env = params;
  for (std::size_t j = 0; j < n; ++j) env[cell.vars[j]] = a[j];

  std::vector<ModelElement> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    const CellCoord &c = cell.coords[j];
    std::optional<ModelElement> slack;
    auto consider = [&](const ModelElement &s) {
      if (!slack || s < *slack) slack = s;
    };
    if (c.lower) consider(a[j] - c.lower->eval_element(env));
    if (c.upper) consider(c.upper->eval_element(env) - a[j]);
    if (!slack) slack = ModelElement::infinite(1, fresh_rank(used));
    if (slack->is_finite() && !opts.allow_finite)
      throw DomainError("box_around: point is not generic, finite margin " + slack->str() +
                        " at coordinate " + cell.vars[j]);
    r[j] = slack->div_floor(2);
  }

  auto make = [&] {
    Box b;
    b.anchor = a;
    for (std::size_t j = 0; j < n; ++j) {
      BoxSide s;
      s.lo = a[j] - r[j];
      s.hi = a[j] + r[j];
      s.modulus = cell.coords[j].modulus;
      s.residue = cell.coords[j].residue;
      b.sides.push_back(s);
    }
    return b;
  };

  std::vector<int> failures(n, 0);
  for (int round = 0; round <= opts.max_shrinks; ++round) {
    Box b = make();
    ConstPool pool;
    Formula bf = b.formula(cell.vars, pool);
    Assignment benv = pool.with(params);
    // first coordinate whose constraint the box violates
    std::optional<std::size_t> bad;
    std::vector<Formula> prefix{cell.param_condition};
    for (std::size_t j = 0; j < n && !bad; ++j) {
      ConstPool pj;
      Box part;
      part.sides.assign(b.sides.begin(), b.sides.begin() + static_cast<long>(j) + 1);
      std::vector<std::string> pv(cell.vars.begin(), cell.vars.begin() + static_cast<long>(j) + 1);
      Formula pf = part.formula(pv, pj);
      if (!decide_subset(pf, cell.coord_formula(j), pj.with(params), opts.qe)) bad = j;
    }
    if (!bad) {
      if (!decide_subset(bf, cell.formula(), benv, opts.qe))
        throw DomainError("box_around: box containment failed certification");
      if (!opts.allow_finite && !b.margins_infinite())
        throw DomainError("box_around: margins collapsed");
      return b;
    }
    std::size_t j = *bad;
    // alternate between shrinking the coordinates the bounds depend on and
    // the failing coordinate itself
    bool earlier = failures[j]++ % 2 == 0;
    bool shrunk = false;
    if (earlier) {
      std::set<std::string> deps;
      const CellCoord &c = cell.coords[j];
      if (c.lower) for (const auto &v : c.lower->vars()) deps.insert(v);
      if (c.upper) for (const auto &v : c.upper->vars()) deps.insert(v);
      for (std::size_t k = 0; k < j; ++k)
        if (deps.count(cell.vars[k])) {
          r[k] = r[k].div_floor(2);
          shrunk = true;
        }
    }
    if (!shrunk) {
      if (r[j].is_zero()) throw DomainError("box_around: no box around the point fits the cell");
      r[j] = r[j].div_floor(2);
    }
    if (!opts.allow_finite)
      for (const auto &x : r)
        if (x.is_finite()) throw DomainError("box_around: no box with infinite margins found");
  }
  throw ResourceLimit("box_around: shrink budget exhausted");
}

CellDesc project_free(const CellDesc &cell) {
  CellDesc out;
  out.param_condition = cell.param_condition;
  for (std::size_t j = 0; j < cell.coords.size(); ++j) {
    const CellCoord &c = cell.coords[j];
    if (!c.is_interval()) continue;
    CellCoord p = c;
    if (c.lower) p.lower = cell.in_free_coords(*c.lower, j);
    if (c.upper) p.upper = cell.in_free_coords(*c.upper, j);
    out.vars.push_back(cell.vars[j]);
    out.coords.push_back(p);
  }
  return out;
}

Formula CBox::formula(ConstPool &pool) const {
  std::vector<std::string> fv;
  for (auto i : free) fv.push_back(cell.vars[i]);
  return mk_and({cell.formula(), box.formula(fv, pool)});
}

bool CBox::contains(const std::vector<ModelElement> &x, const Assignment &params) const {
  if (!cell_contains(cell, x, params)) return false;
  std::vector<ModelElement> p;
  for (auto i : free) p.push_back(x[i]);
  return box.contains(p);
}

CBox cbox_around(const CellDesc &cell, const std::vector<ModelElement> &a, const Assignment &params,
                 const BoxOptions &opts) {
  if (!cell_contains(cell, a, params)) throw DomainError("cbox_around: point is not in the cell");
  CBox cb;
  cb.cell = cell;
  std::vector<ModelElement> pa;
  for (std::size_t j = 0; j < cell.coords.size(); ++j)
    if (cell.coords[j].is_interval()) {
      cb.free.push_back(j);
      pa.push_back(a[j]);
    }
  cb.box = box_around(project_free(cell), pa, params, opts);
  return cb;
}

// ---- strips -----------------------------------------------------------------

Integer Strip::clearing() const {
  Integer c = linalg::lcm_den(coeffs);
  c = lcm(c, lower.z().get_den());
  c = lcm(c, upper.z().get_den());
  return c;
}

ScaledElement Strip::apply(const std::vector<ModelElement> &x) const { return linalg::dot(coeffs, x); }

bool Strip::contains(const std::vector<ModelElement> &x) const {
  ScaledElement v = apply(x);
  return lower <= v && v <= upper;
}

bool Strip::infinite_width() const { return !(upper - lower).is_finite(); }

Formula strip_formula(const Strip &s, const std::vector<std::string> &vars, ConstPool &pool) {
  Integer c = s.clearing();
  LinearTerm f;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    Rational k = s.coeffs[i] * Rational(c);
    f += LinearTerm::var(vars.at(i), k.get_num());
  }
  LinearTerm lo = pool.term((s.lower * Rational(c)).to_model());
  LinearTerm hi = pool.term((s.upper * Rational(c)).to_model());
  return mk_and({Formula::rel(Rel::Le, lo, f), Formula::rel(Rel::Le, f, hi)});
}

bool LinearCong::contains(const std::vector<ModelElement> &x) const {
  ModelElement s(0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) s = s + x[i] * coeffs[i];
  return s.residue(modulus) == mod(residue, modulus);
}

// ---- parallelograms ---------------------------------------------------------

std::vector<ModelElement> Parallelogram::free_part(const std::vector<ModelElement> &x) const {
  std::vector<ModelElement> p;
  for (auto i : free) p.push_back(x.at(i));
  return p;
}

bool Parallelogram::contains(const std::vector<ModelElement> &x) const {
  if (x.size() != n) return false;
  auto p = free_part(x);
  for (const auto &s : strips)
    if (!s.contains(p)) return false;
  for (const auto &c : congruences)
    if (!c.contains(p)) return false;
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= graph.size() || !graph[k]) continue;
    ScaledElement v = linalg::dot(graph[k]->coeffs, p) + graph[k]->offset;
    if (!(v == ScaledElement(x[k]))) return false;
  }
  return true;
}

Formula Parallelogram::formula(const std::vector<std::string> &vars, ConstPool &pool) const {
  std::vector<std::string> fv;
  for (auto i : free) fv.push_back(vars.at(i));
  std::vector<Formula> parts;
  for (const auto &s : strips) parts.push_back(strip_formula(s, fv, pool));
  for (const auto &c : congruences) {
    if (c.modulus == 1) continue;
    LinearTerm t;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) t += LinearTerm::var(fv[i], c.coeffs[i]);
    parts.push_back(Formula::cong(t, LinearTerm(c.residue), c.modulus));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= graph.size() || !graph[k]) continue;
    const GraphMap &g = *graph[k];
    Integer L = lcm(linalg::lcm_den(g.coeffs), g.offset.z().get_den());
    LinearTerm rhs = pool.term((g.offset * Rational(L)).to_model());
    for (std::size_t i = 0; i < g.coeffs.size(); ++i)
      rhs += LinearTerm::var(fv[i], Rational(g.coeffs[i] * L).get_num());
    parts.push_back(Formula::rel(Rel::Eq, LinearTerm::var(vars.at(k), L), rhs));
  }
  return mk_and(std::move(parts));
}

bool Parallelogram::is_centered() const {
  if (!center) return false;
  auto p = free_part(*center);
  for (const auto &s : strips) {
    ScaledElement d = s.apply(p) * Rational(2) - (s.lower + s.upper);
    if (!d.is_finite()) return false;
  }
  return contains(*center);
}

std::string Parallelogram::str() const {
  std::ostringstream os;
  os << dim() << "-parallelogram in M^" << n << ":";
  for (const auto &s : strips) {
    os << " [" << s.lower.str() << " <= ";
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
      if (s.coeffs[i] == 0) continue;
      os << (s.coeffs[i] < 0 ? "-" : "+") << abs(s.coeffs[i]) << "*x" << free[i];
    }
    os << " <= " << s.upper.str() << "]";
  }
  for (const auto &c : congruences) {
    if (c.modulus == 1) continue;
    os << " {";
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
      if (c.coeffs[i] != 0) os << (c.coeffs[i] < 0 ? "-" : "+") << abs(c.coeffs[i]) << "*x" << free[i];
    os << " === " << c.residue << " mod " << c.modulus << "}";
  }
  return os.str();
}

} // namespace pkit
