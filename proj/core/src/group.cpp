#include "pkit/group.hpp"

#include "pkit/eval.hpp"

#include <algorithm>
#include <unordered_map>

namespace pkit {

std::vector<std::string> coord_names(const std::string &prefix, std::size_t n) {
  if (n == 1) return {prefix};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<LinearTerm> var_terms(const std::vector<std::string> &names) {
  std::vector<LinearTerm> out;
  for (const auto &v : names) out.push_back(LinearTerm::var(v));
  return out;
}

std::vector<std::string> DefinableGroup::xs() const { return coord_names("x", n); }
std::vector<std::string> DefinableGroup::ys() const { return coord_names("y", n); }
std::vector<std::string> DefinableGroup::zs() const { return coord_names("z", n); }

namespace {

// Simultaneous substitution of terms for variables.
Formula subst_all(const Formula &f, const std::vector<std::string> &from,
                  const std::vector<LinearTerm> &to) {
  std::set<std::string> taken = f.free_vars();
  for (const auto &v : from) taken.insert(v);
  for (const auto &t : to)
    for (const auto &v : t.vars()) taken.insert(v);
  Formula g = f;
  std::vector<std::string> tmp;
  for (std::size_t i = 0; i < from.size(); ++i) {
    tmp.push_back(fresh_name("_r" + std::to_string(i), taken));
    taken.insert(tmp.back());
    g = rename_free(g, from[i], tmp.back());
  }
  for (std::size_t i = 0; i < from.size(); ++i) g = substitute(g, tmp[i], to.at(i));
  return g;
}

Formula equal(const std::vector<LinearTerm> &a, const std::vector<LinearTerm> &b) {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(Formula::rel(Rel::Eq, a[i], b[i]));
  return mk_and(std::move(parts));
}

std::vector<LinearTerm> const_terms(const std::vector<ModelElement> &x, ConstPool &pool) {
  std::vector<LinearTerm> out;
  for (const auto &v : x) out.push_back(pool.term(v));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<ModelElement> read(const Assignment &w, const std::vector<std::string> &names) {
  std::vector<ModelElement> out;
  for (const auto &v : names) out.push_back(w.at(v));
  return out;
}

bool all_finite(const std::vector<ModelElement> &x) {
  return std::all_of(x.begin(), x.end(), [](const ModelElement &e) { return e.is_finite(); });
}

void validate(const DefinableGroup &g) {
  if (g.n == 0) throw DomainError("group: arity must be positive");
  std::set<std::string> allowed;
  for (const auto &v : g.xs()) allowed.insert(v);
  for (const auto &[k, v] : g.params) {
    if (allowed.count(k) || k.starts_with("_"))
      throw DomainError("group: parameter name " + k + " is reserved");
  }
  for (const auto &v : g.carrier.free_vars())
    if (!allowed.count(v) && !g.params.count(v))
      throw DomainError("group: carrier mentions unknown variable " + v);
  for (const auto &v : g.ys()) allowed.insert(v);
  for (const auto &v : g.zs()) allowed.insert(v);
  for (const auto &[k, v] : g.params)
    if (allowed.count(k)) throw DomainError("group: parameter name " + k + " is reserved");
  for (const auto &v : g.op.free_vars())
    if (!allowed.count(v) && !g.params.count(v))
      throw DomainError("group: operation mentions unknown variable " + v);
}

// Universal sentence over `vars`; on failure a counterexample is extracted.
AxiomCheck check(const std::string &name, const std::vector<std::string> &vars, const Formula &body,
                 const Assignment &env, const QeOptions &qe) {
  AxiomCheck c;
  c.name = name;
  Formula s = mk_forall(vars, body);
  c.sentence = s.str();
  c.holds = decide(s, env, qe);
  if (!c.holds) {
    if (auto w = satisfiable(mk_not(body), env, qe)) {
      Assignment shown;
      for (const auto &v : vars)
        if (w->count(v)) shown[v] = w->at(v);
      c.counterexample = shown;
    }
  }
  return c;
}

std::vector<ModelElement> identity_of(const DefinableGroup &g, const QeOptions &qe) {
  if (g.identity) return *g.identity;
  auto es = coord_names("_e", g.n);
  auto x = var_terms(g.xs()), e = var_terms(es);
  Formula law = mk_forall(g.xs(), mk_implies(g.carrier_at(x), mk_and({g.op_at(e, x, x), g.op_at(x, e, x)})));
  auto w = satisfiable(mk_and({g.carrier_at(e), law}), g.params, qe);
  if (!w) throw DomainError("group " + g.name + ": no identity element");
  return read(*w, es);
}

bool desk_scale(const DefinableGroup &g, const std::vector<ModelElement> &a) {
  return g.standard() && all_finite(a);
}

CellDesc cell_of(const DefinableGroup &g, const std::vector<ModelElement> &a, const QeOptions &qe) {
  DecomposeOptions dopts;
  dopts.qe = qe;
  for (auto &c : decompose(g.carrier, g.xs(), g.params, dopts))
    if (cell_contains(c, a, g.params)) return c;
  throw DomainError("group " + g.name + ": point is not in the carrier");
}

int group_dim(const DefinableGroup &g, const QeOptions &qe) {
  DecomposeOptions dopts;
  dopts.qe = qe;
  auto d = dim(g.carrier, g.xs(), g.params, dopts);
  if (!d) throw DomainError("group " + g.name + ": empty carrier");
  return *d;
}

void require_generic(const DefinableGroup &g, const std::vector<ModelElement> &a, int d,
                     const char *what) {
  if (tuple_dim(a, g.param_values()) != d)
    throw DomainError(std::string(what) + ": point is not dim-generic over the parameters");
}

// Halves every margin of the box around its anchor; false when nothing moved.
bool shrink(CBox &cb) {
  bool moved = false;
  const auto &a = *cb.box.anchor;
  for (std::size_t i = 0; i < cb.box.sides.size(); ++i) {
    BoxSide &s = cb.box.sides[i];
    ModelElement lo = a[i] - (a[i] - s.lo).div_floor(2);
    ModelElement hi = a[i] + (s.hi - a[i]).div_floor(2);
    moved = moved || lo != s.lo || hi != s.hi;
    s.lo = lo;
    s.hi = hi;
  }
  return moved;
}

Formula cbox_formula(const CBox &cb, ConstPool &pool) { return cb.formula(pool); }

BoxOptions box_options(const DefinableGroup &g, const std::vector<ModelElement> &a,
                       const GroupOptions &opts) {
  BoxOptions b;
  b.qe = opts.qe;
  b.allow_finite = desk_scale(g, a);
  return b;
}

} // namespace

Formula DefinableGroup::carrier_at(const std::vector<LinearTerm> &x) const {
  return subst_all(carrier, xs(), x);
}

Formula DefinableGroup::op_at(const std::vector<LinearTerm> &x, const std::vector<LinearTerm> &y,
                              const std::vector<LinearTerm> &z) const {
  std::vector<LinearTerm> all = x;
  all.insert(all.end(), y.begin(), y.end());
  all.insert(all.end(), z.begin(), z.end());
  return subst_all(op, concat(concat(xs(), ys()), zs()), all);
}

std::vector<ModelElement> DefinableGroup::param_values() const {
  std::vector<ModelElement> out;
  for (const auto &[k, v] : params) out.push_back(v);
  return out;
}

bool DefinableGroup::standard() const { return all_finite(param_values()); }

bool GroupReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck &c) { return c.holds; });
}

const AxiomCheck &GroupReport::get(const std::string &name) const {
  for (const auto &c : checks)
    if (c.name == name) return c;
  throw DomainError("no axiom check named " + name);
}

GroupReport verify_group(const DefinableGroup &g, const QeOptions &qe) {
  validate(g);
  GroupReport rep;
  const std::size_t n = g.n;
  auto xv = g.xs(), yv = g.ys(), zv = g.zs();
  auto uv = coord_names("_u", n), vv = coord_names("_v", n), wv = coord_names("_w", n),
       w2 = coord_names("_w2_", n), z2 = coord_names("_z2_", n);
  auto x = var_terms(xv), y = var_terms(yv), z = var_terms(zv), u = var_terms(uv), v = var_terms(vv),
       w = var_terms(wv), ww = var_terms(w2), zz = var_terms(z2);
  Formula Gx = g.carrier_at(x), Gy = g.carrier_at(y), Gz = g.carrier_at(z);
  const Assignment &env = g.params;

  rep.checks.push_back(check("closure", concat(xv, yv),
                             mk_implies(mk_and({Gx, Gy}),
                                        mk_exists(zv, mk_and({Gz, g.op_at(x, y, z)}))),
                             env, qe));
  rep.checks.push_back(check("functional", concat(concat(xv, yv), concat(zv, z2)),
                             mk_implies(mk_and({Gx, Gy, g.op_at(x, y, z), g.op_at(x, y, zz)}),
                                        equal(z, zz)),
                             env, qe));
  std::vector<std::string> avars = concat(concat(concat(xv, yv), concat(zv, uv)), concat(concat(vv, wv), w2));
  rep.checks.push_back(check("associative", avars,
                             mk_implies(mk_and({Gx, Gy, Gz, g.op_at(x, y, u), g.op_at(u, z, w),
                                                g.op_at(y, z, v), g.op_at(x, v, ww)}),
                                        equal(w, ww)),
                             env, qe));

  // identity: a given one is checked, otherwise one is searched for
  std::optional<std::vector<ModelElement>> e;
  AxiomCheck idc;
  idc.name = "identity";
  try {
    e = identity_of(g, qe);
  } catch (const DomainError &) {
  }
  if (e) {
    ConstPool pool("_k");
    auto et = const_terms(*e, pool);
    Formula law = mk_and({g.carrier_at(et),
                          mk_forall(xv, mk_implies(Gx, mk_and({g.op_at(et, x, x), g.op_at(x, et, x)})))});
    idc.sentence = law.str();
    idc.holds = decide(law, pool.with(env), qe);
  }
  rep.checks.push_back(idc);
  if (idc.holds) {
    rep.identity = e;
    ConstPool pool("_k");
    auto et = const_terms(*e, pool);
    rep.checks.push_back(check("inverse", xv,
                               mk_implies(Gx, mk_exists(yv, mk_and({Gy, g.op_at(x, y, et)}))),
                               pool.with(env), qe));
  } else {
    rep.checks.push_back(AxiomCheck{"inverse", false, "", std::nullopt});
  }
  return rep;
}

std::vector<ModelElement> multiply(const DefinableGroup &g, const std::vector<ModelElement> &x,
                                   const std::vector<ModelElement> &y, const QeOptions &qe) {
  Assignment env = g.params;
  auto xv = g.xs(), yv = g.ys();
  for (std::size_t i = 0; i < g.n; ++i) {
    env[xv[i]] = x.at(i);
    env[yv[i]] = y.at(i);
  }
  auto w = satisfiable(mk_and({g.op, g.carrier_at(var_terms(g.zs()))}), env, qe);
  if (!w) throw DomainError("group " + g.name + ": product undefined");
  return read(*w, g.zs());
}

std::vector<ModelElement> inverse_of(const DefinableGroup &g, const std::vector<ModelElement> &x,
                                     const std::vector<ModelElement> &e, const QeOptions &qe) {
  ConstPool pool("_k");
  auto xt = const_terms(x, pool), et = const_terms(e, pool);
  auto y = var_terms(g.ys());
  auto w = satisfiable(mk_and({g.carrier_at(y), g.op_at(xt, y, et)}), pool.with(g.params), qe);
  if (!w) throw DomainError("group " + g.name + ": no inverse");
  return read(*w, g.ys());
}

bool in_carrier(const DefinableGroup &g, const std::vector<ModelElement> &x) {
  Assignment env = g.params;
  auto xv = g.xs();
  for (std::size_t i = 0; i < g.n; ++i) env[xv[i]] = x.at(i);
  return eval(g.carrier, env);
}

// ---- local linearity -------------------------------------------------------

LocalLinearity local_linearity(const DefinableGroup &g, const std::vector<ModelElement> &a,
                               const std::vector<ModelElement> &b, const GroupOptions &opts) {
  validate(g);
  const std::size_t n = g.n;
  CellDesc ca = cell_of(g, a, opts.qe), cb = cell_of(g, b, opts.qe);
  if (opts.require_generic && !desk_scale(g, a)) {
    int d = group_dim(g, opts.qe);
    require_generic(g, a, d, "local_linearity");
    require_generic(g, b, d, "local_linearity");
    std::vector<ModelElement> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    if (tuple_dim(ab, g.param_values()) != 2 * d)
      throw DomainError("local_linearity: points are not independent");
  }

  auto xv = g.xs(), yv = g.ys(), zv = g.zs();
  auto x = var_terms(xv), y = var_terms(yv), z = var_terms(zv);
  std::vector<std::string> in = concat(xv, yv);
  std::vector<ModelElement> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());

  LocalLinearity out;
  out.M.assign(n, std::vector<Rational>(n));
  out.N.assign(n, std::vector<Rational>(n));
  DecomposeOptions dopts;
  dopts.qe = opts.qe;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> others;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) others.push_back(zv[j]);
    Formula graph = mk_and({g.carrier_at(x), g.carrier_at(y), mk_exists(others, g.op)});
    auto pieces = decompose_function(graph, in, zv[k], g.params, dopts);
    const FunctionPiece *hit = nullptr;
    for (const auto &p : pieces)
      if (cell_contains(p.domain, ab, g.params)) hit = &p;
    if (!hit) throw DomainError("local_linearity: product undefined at the points");
    RatAffine f = hit->function.as_affine();
    RatAffine rest = f;
    for (std::size_t i = 0; i < n; ++i) {
      out.M[k][i] = f.coeff(xv[i]);
      out.N[k][i] = f.coeff(yv[i]);
      rest = rest.without(xv[i]).without(yv[i]);
    }
    out.gamma.push_back(rest.eval(g.params));
  }

  out.box_a = cbox_around(ca, a, g.params, box_options(g, a, opts));
  out.box_b = cbox_around(cb, b, g.params, box_options(g, b, opts));
  for (int round = 0; round <= opts.max_shrinks; ++round) {
    ConstPool pool;
    Formula Ba = cbox_formula(out.box_a, pool);
    Formula Bb = subst_all(cbox_formula(out.box_b, pool), xv, y);
    std::vector<Formula> eqs;
    for (std::size_t k = 0; k < n; ++k) {
      Integer L = lcm(out.gamma[k].z().get_den(), 1);
      for (std::size_t i = 0; i < n; ++i) {
        L = lcm(L, out.M[k][i].get_den());
        L = lcm(L, out.N[k][i].get_den());
      }
      LinearTerm rhs = pool.term((out.gamma[k] * Rational(L)).to_model());
      for (std::size_t i = 0; i < n; ++i) {
        rhs += LinearTerm::var(xv[i], Rational(out.M[k][i] * L).get_num());
        rhs += LinearTerm::var(yv[i], Rational(out.N[k][i] * L).get_num());
      }
      eqs.push_back(Formula::rel(Rel::Eq, LinearTerm::var(zv[k], L), rhs));
    }
    Formula body = mk_implies(mk_and({Ba, Bb, g.op}), mk_and(eqs));
    Formula s = mk_forall(concat(in, zv), body);
    if (decide(s, pool.with(g.params), opts.qe)) {
      out.sentence = s.str();
      return out;
    }
    bool moved = shrink(out.box_a);
    moved = shrink(out.box_b) || moved;
    if (!moved) break;
  }
  throw DomainError("local_linearity: no certified boxes within the shrink budget");
}

// ---- addition box ----------------------------------------------------------

Formula addition_box_formula(const DefinableGroup &, const AdditionBox &b, ConstPool &pool) {
  return cbox_formula(b.box, pool);
}

AdditionBox local_addition_box(const DefinableGroup &g, const std::vector<ModelElement> &a,
                               const GroupOptions &opts) {
  validate(g);
  if (!in_carrier(g, a)) throw DomainError("local_addition_box: point is not in the carrier");
  if (opts.require_generic && !desk_scale(g, a))
    require_generic(g, a, group_dim(g, opts.qe), "local_addition_box");
  AdditionBox out;
  out.center = a;
  out.center_inverse = inverse_of(g, a, identity_of(g, opts.qe), opts.qe);
  out.box = cbox_around(cell_of(g, a, opts.qe), a, g.params, box_options(g, a, opts));

  auto xv = g.xs(), yv = g.ys();
  auto wv = coord_names("_w", g.n), zv = coord_names("_z", g.n);
  auto x = var_terms(xv), y = var_terms(yv), w = var_terms(wv), z = var_terms(zv);
  for (; out.shrinks <= opts.max_shrinks; ++out.shrinks) {
    ConstPool pool;
    auto at = const_terms(a, pool), ai = const_terms(out.center_inverse, pool);
    Formula Bx = addition_box_formula(g, out, pool);
    Formula By = subst_all(Bx, xv, y);
    std::vector<LinearTerm> sum;
    for (std::size_t i = 0; i < g.n; ++i) sum.push_back(x[i] - at[i] + y[i]);
    Formula body = mk_implies(mk_and({Bx, By, g.op_at(x, ai, w), g.op_at(w, y, z)}), equal(z, sum));
    Formula s = mk_forall(concat(concat(xv, yv), concat(wv, zv)), body);
    if (decide(s, pool.with(g.params), opts.qe)) {
      out.sentence = s.str();
      return out;
    }
    if (!shrink(out.box)) break;
  }
  throw DomainError("local_addition_box: no certified box within the shrink budget");
}

// ---- double centralizer ----------------------------------------------------

bool AbelianReport::ok() const {
  return abelian && subgroup_closed && contains_box && dim_group && dim_subgroup &&
         *dim_group == *dim_subgroup;
}

AbelianReport abelian_finite_index(const DefinableGroup &g, const std::vector<ModelElement> &a,
                                   const GroupOptions &opts) {
  GroupReport rep = verify_group(g, opts.qe);
  if (!rep.ok()) {
    std::string failing;
    for (const auto &c : rep.checks)
      if (!c.holds) failing += (failing.empty() ? "" : ", ") + c.name;
    throw DomainError("abelian_finite_index: not a group (" + failing + " fails)");
  }
  AbelianReport out;
  out.box = local_addition_box(g, a, opts);
  const std::size_t n = g.n;
  ConstPool pool;
  Formula B = addition_box_formula(g, out.box, pool);
  auto ai = const_terms(out.box.center_inverse, pool);
  auto et = const_terms(*rep.identity, pool);

  auto xv = g.xs();
  auto uv = coord_names("_u", n), vv = coord_names("_v", n), sv = coord_names("_s", n),
       tv = coord_names("_t", n), pv = coord_names("_p", n), qv = coord_names("_q", n),
       mv = coord_names("_m", n);
  auto x = var_terms(xv), u = var_terms(uv), v = var_terms(vv), s = var_terms(sv), t = var_terms(tv),
       p = var_terms(pv), q = var_terms(qv), m = var_terms(mv);
  auto commute = [&](const std::vector<LinearTerm> &l, const std::vector<LinearTerm> &r) {
    return mk_forall(concat(sv, tv), mk_implies(mk_and({g.op_at(l, r, s), g.op_at(r, l, t)}), equal(s, t)));
  };
  QeOptions qe = opts.qe;
  // X = box * a^-1, a commuting set
  Formula X = simplify(eliminate(mk_exists(xv, mk_and({B, g.op_at(x, ai, u)})), qe)); // over u
  Formula C = simplify(eliminate(
      mk_and({g.carrier_at(v), mk_forall(uv, mk_implies(X, commute(u, v)))}), qe)); // over v
  Formula H = simplify(eliminate(
      mk_and({g.carrier_at(x), mk_forall(vv, mk_implies(C, commute(x, v)))}), qe)); // over x
  out.subgroup = H;
  Assignment env = pool.with(g.params);
  for (const auto &[k, val] : pool.env()) out.constants[k] = val;

  auto Hat = [&](const std::vector<LinearTerm> &at) { return subst_all(H, xv, at); };
  out.abelian = decide(mk_forall(concat(pv, qv), mk_implies(mk_and({Hat(p), Hat(q)}), commute(p, q))), env, qe);
  bool closed = decide(mk_forall(concat(concat(pv, qv), mv),
                                 mk_implies(mk_and({Hat(p), Hat(q), g.op_at(p, q, m)}), Hat(m))),
                       env, qe);
  bool has_e = decide(Hat(et), env, qe);
  bool inverses = decide(mk_forall(concat(pv, qv), mk_implies(mk_and({Hat(p), g.carrier_at(q), g.op_at(p, q, et)}),
                                                              Hat(q))),
                         env, qe);
  out.subgroup_closed = closed && has_e && inverses;
  out.contains_box = decide(mk_forall(uv, mk_implies(X, Hat(u))), env, qe);
  DecomposeOptions dopts;
  dopts.qe = qe;
  out.dim_group = dim(g.carrier, xv, g.params, dopts);
  out.dim_subgroup = dim(H, xv, env, dopts);
  return out;
}

bool centered_isomorphism(const DefinableGroup &g, const std::vector<ModelElement> &a,
                          const QeOptions &qe) {
  validate(g);
  auto ainv = inverse_of(g, a, identity_of(g, qe), qe);
  ConstPool pool;
  auto A = const_terms(a, pool), Ai = const_terms(ainv, pool);
  const std::size_t n = g.n;
  auto xv = g.xs(), yv = g.ys();
  auto x2v = coord_names("_x2_", n), zv = coord_names("_z", n), pv = coord_names("_p", n),
       qv = coord_names("_q", n), fxv = coord_names("_fx", n), fyv = coord_names("_fy", n),
       wv = coord_names("_w", n), rv = coord_names("_r", n);
  auto x = var_terms(xv), y = var_terms(yv), x2 = var_terms(x2v), z = var_terms(zv), p = var_terms(pv),
       q = var_terms(qv), fx = var_terms(fxv), fy = var_terms(fyv), w = var_terms(wv), r = var_terms(rv);
  Assignment env = pool.with(g.params);
  Formula Gx = g.carrier_at(x), Gy = g.carrier_at(y);
  bool onto = decide(mk_forall(yv, mk_implies(Gy, mk_exists(xv, mk_and({Gx, g.op_at(x, A, y)})))), env, qe);
  bool injective = decide(
      mk_forall(concat(concat(xv, x2v), zv),
                mk_implies(mk_and({Gx, g.carrier_at(x2), g.op_at(x, A, z), g.op_at(x2, A, z)}), equal(x, x2))),
      env, qe);
  std::vector<std::string> hv = concat(concat(concat(xv, yv), concat(pv, qv)), concat(concat(fxv, fyv), concat(wv, rv)));
  bool hom = decide(mk_forall(hv, mk_implies(mk_and({Gx, Gy, g.op_at(x, y, p), g.op_at(p, A, q), g.op_at(x, A, fx),
                                                      g.op_at(y, A, fy), g.op_at(fx, Ai, w), g.op_at(w, fy, r)}),
                                              equal(r, q))),
                    env, qe);
  return onto && injective && hom;
}

bool half_box_closed(const DefinableGroup &g, const AdditionBox &b, const QeOptions &qe) {
  AdditionBox half = b;
  shrink(half.box);
  ConstPool pool;
  Formula P = addition_box_formula(g, b, pool);
  Formula Ph = addition_box_formula(g, half, pool);
  auto at = const_terms(b.center, pool), ai = const_terms(b.center_inverse, pool);
  auto xv = g.xs(), yv = g.ys();
  auto wv = coord_names("_w", g.n), zv = coord_names("_z", g.n);
  auto x = var_terms(xv), y = var_terms(yv), w = var_terms(wv), z = var_terms(zv);
  std::vector<LinearTerm> sum;
  for (std::size_t i = 0; i < g.n; ++i) sum.push_back(x[i] - at[i] + y[i]);
  Formula hx = Ph, hy = subst_all(Ph, xv, y);
  Assignment env = pool.with(g.params);
  bool stays = decide(mk_forall(concat(xv, yv), mk_implies(mk_and({hx, hy}), subst_all(P, xv, sum))), env, qe);
  bool agrees = decide(mk_forall(concat(concat(xv, yv), concat(wv, zv)),
                                 mk_implies(mk_and({hx, hy, g.op_at(x, ai, w), g.op_at(w, y, z)}), equal(z, sum))),
                       env, qe);
  return stays && agrees;
}

// ---- finite groups ---------------------------------------------------------

FiniteGroup::FiniteGroup(const DefinableGroup &g, const QeOptions &qe) : n_(g.n) {
  validate(g);
  if (!g.standard()) throw DomainError("finite group: parameters must be standard integers");
  DecomposeOptions dopts;
  dopts.qe = qe;
  auto cells = decompose(g.carrier, g.xs(), g.params, dopts);
  auto xv = g.xs();
  for (const auto &cell : cells) {
    Assignment env = g.params;
    std::vector<long> cur(n_);
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (j == n_) {
        if (elems_.size() >= kMaxElements) throw ResourceLimit("finite group: carrier too large");
        index_.emplace(cur, elems_.size());
        elems_.push_back(cur);
        return;
      }
      const CellCoord &c = cell.coords[j];
      auto put = [&](const ModelElement &v) {
        if (!v.is_finite() || !v.z().fits_slong_p()) throw DomainError("finite group: carrier is not finite");
        cur[j] = v.z().get_si();
        env[xv[j]] = v;
        rec(j + 1);
      };
      if (!c.is_interval()) {
        put(c.value.eval_element(env));
        return;
      }
      if (!c.lower || !c.upper) throw DomainError("finite group: carrier is unbounded");
      ModelElement lo = c.lower->eval_element(env), hi = c.upper->eval_element(env);
      if (!lo.is_finite() || !hi.is_finite()) throw DomainError("finite group: carrier is not finite");
      lo = lo + ModelElement(mod(c.residue - lo.residue(c.modulus), c.modulus));
      for (ModelElement v = lo; v <= hi; v = v + ModelElement(c.modulus)) put(v);
    };
    rec(0);
  }
  if (elems_.empty()) throw DomainError("finite group: empty carrier");
  const std::size_t N = elems_.size();
  if (N > 4096) throw ResourceLimit("finite group: Cayley table too large");
  table_.assign(N * N, npos);
  auto yv = g.ys(), zv = g.zs();
  bool qf = g.op.is_quantifier_free();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      Assignment env = g.params;
      for (std::size_t k = 0; k < n_; ++k) {
        env[xv[k]] = ModelElement(elems_[i][k]);
        env[yv[k]] = ModelElement(elems_[j][k]);
      }
      std::size_t hit = npos;
      if (qf && N <= 256) {
        for (std::size_t r = 0; r < N && hit == npos; ++r) {
          for (std::size_t k = 0; k < n_; ++k) env[zv[k]] = ModelElement(elems_[r][k]);
          if (eval(g.op, env)) hit = r;
        }
      } else {
        auto w = satisfiable(g.op, env, qe);
        if (w) {
          std::vector<long> zval;
          for (const auto &v : zv) zval.push_back(w->at(v).z().get_si());
          hit = index(zval);
        }
      }
      if (hit == npos) throw DomainError("finite group: product leaves the carrier");
      table_[i * N + j] = hit;
    }
  e_ = npos;
  for (std::size_t i = 0; i < N && e_ == npos; ++i)
    if (table_[i * N + i] == i) e_ = i;
  if (e_ == npos) throw DomainError("finite group: no identity");
  inv_.assign(N, npos);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N && inv_[i] == npos; ++j)
      if (table_[i * N + j] == e_) inv_[i] = j;
}

std::size_t FiniteGroup::index(const std::vector<long> &x) const {
  auto it = index_.find(x);
  return it == index_.end() ? npos : it->second;
}

std::size_t FiniteGroup::mul(std::size_t a, std::size_t b) const { return table_[a * elems_.size() + b]; }

std::size_t FiniteGroup::inverse(std::size_t a) const {
  if (inv_[a] == npos) throw DomainError("finite group: element without inverse");
  return inv_[a];
}

GenericResult is_generic_finite(const FiniteGroup &g, const Formula &x_set,
                                const std::vector<std::string> &vars) {
  if (vars.size() != g.n()) throw DomainError("is_generic_finite: variable count mismatch");
  std::vector<std::size_t> X;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Assignment env;
    for (std::size_t k = 0; k < g.n(); ++k) env[vars[k]] = ModelElement(g.elements()[i][k]);
    if (eval(x_set, env, ModelKind::Standard)) X.push_back(i);
  }
  return is_generic_finite(g, X);
}

GenericResult is_generic_finite(const FiniteGroup &g, const std::vector<std::size_t> &X) {
  GenericResult out;
  if (X.empty()) return out;
  if (g.size() * X.size() > 50000000) throw ResourceLimit("is_generic_finite: too many translates");
  std::vector<char> covered(g.size(), 0);
  std::size_t left = g.size();
  std::vector<char> used(g.size(), 0);
  while (left > 0) {
    std::size_t best = FiniteGroup::npos, gain = 0;
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (used[t]) continue;
      std::size_t c = 0;
      for (auto x : X) c += !covered[g.mul(t, x)];
      if (c > gain) {
        gain = c;
        best = t;
      }
    }
    if (best == FiniteGroup::npos) break;
    used[best] = 1;
    for (auto x : X) {
      std::size_t p = g.mul(best, x);
      if (!covered[p]) {
        covered[p] = 1;
        --left;
      }
    }
    out.translates.push_back(g.elements()[best]);
  }
  out.generic = left == 0;
  if (!out.generic) out.translates.clear();
  return out;
}

} // namespace pkit
