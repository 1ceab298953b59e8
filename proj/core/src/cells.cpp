#include "pkit/cells.hpp"

#include "pkit/eval.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pkit {

namespace {

Integer lcm_den(const RatAffine &a, const RatAffine &b) { return lcm(a.denominator(), b.denominator()); }

// a REL b for rational affine a, b, scaled to integer terms.
Formula rat_rel(Rel r, const RatAffine &a, const RatAffine &b) {
  Integer L = lcm_den(a, b);
  return Formula::rel(r, a.scaled_term(L), b.scaled_term(L));
}

// a === res mod n, for a integral where the formula is used.
Formula rat_cong(const RatAffine &a, const Integer &res, const Integer &n) {
  if (n == 1) return Formula::truth(true);
  Integer L = a.denominator();
  return Formula::cong(a.scaled_term(L), LinearTerm(L * res), L * n);
}

LinearTerm var_part(const LinearTerm &t) {
  LinearTerm v = t;
  v.set_constant(0);
  return v;
}

std::vector<std::string> unassigned(const Formula &f, const Assignment &params) {
  std::vector<std::string> out;
  for (const auto &v : f.free_vars())
    if (!params.count(v)) out.push_back(v);
  return out;
}

} // namespace

bool CellCoord::operator==(const CellCoord &o) const {
  if (type != o.type) return false;
  if (type == Type::Graph) return value == o.value;
  return lower == o.lower && upper == o.upper && modulus == o.modulus && residue == o.residue;
}

std::vector<int> CellDesc::signature() const {
  std::vector<int> s;
  for (const auto &c : coords) s.push_back(c.is_interval() ? 1 : 0);
  return s;
}

int CellDesc::dim() const {
  int d = 0;
  for (const auto &c : coords) d += c.is_interval();
  return d;
}

bool CellDesc::is_open() const { return dim() == static_cast<int>(coords.size()); }

Formula CellDesc::coord_formula(std::size_t j) const {
  const CellCoord &c = coords.at(j);
  RatAffine y = RatAffine::var(vars.at(j));
  if (!c.is_interval()) return rat_rel(Rel::Eq, y, c.value);
  std::vector<Formula> parts;
  if (c.lower) parts.push_back(rat_rel(Rel::Le, *c.lower, y));
  if (c.upper) parts.push_back(rat_rel(Rel::Le, y, *c.upper));
  if (c.modulus > 1)
    parts.push_back(Formula::cong(LinearTerm::var(vars[j]), LinearTerm(c.residue), c.modulus));
  return mk_and(std::move(parts));
}

Formula CellDesc::formula() const {
  std::vector<Formula> parts{param_condition};
  for (std::size_t j = 0; j < coords.size(); ++j) parts.push_back(coord_formula(j));
  return mk_and(std::move(parts));
}

RatAffine CellDesc::in_free_coords(const RatAffine &f, std::size_t j) const {
  RatAffine r = f;
  for (std::size_t k = std::min(j, coords.size()); k-- > 0;)
    if (!coords[k].is_interval()) r = r.substitute(vars[k], coords[k].value);
  return r;
}

std::string CellDesc::str() const {
  std::ostringstream os;
  os << "(";
  auto sig = signature();
  for (std::size_t i = 0; i < sig.size(); ++i) os << (i ? "," : "") << sig[i];
  os << ")-cell: " << formula().str();
  return os.str();
}

// ---- decomposition -----------------------------------------------------------

namespace {

struct Sweep {
  const std::vector<std::string> &vars;
  const Assignment &params;
  const DecomposeOptions &opts;

  bool possible(const Formula &g) const {
    if (g.is_false()) return false;
    if (g.is_true()) return true;
    return decide(mk_exists(unassigned(g, params), g), params, opts.qe);
  }

  std::vector<CellDesc> run(const Formula &f, std::size_t n);
  std::vector<CellDesc> extend(const Formula &base, std::size_t n, const CellCoord &coord);
  void merge(std::vector<CellDesc> &cells) const;
};

// How a y-atom's truth depends on the position of y among the cut values.
struct AtomRule {
  enum Kind { Const, Below, AtLeast, Point, Cong } kind = Const;
  bool value = false;   // Const
  std::size_t cut = 0;  // Below: y < cut; AtLeast: y >= cut; Point: y = cut
  std::size_t next = 0; // Point: index of cut + 1
  LinearTerm rest;      // Cong: a*y + rest === 0 mod n
  Integer a, n;
};

std::vector<CellDesc> Sweep::extend(const Formula &base, std::size_t n, const CellCoord &coord) {
  std::vector<CellDesc> out = run(base, n - 1);
  for (auto &c : out) {
    c.vars.push_back(vars[n - 1]);
    c.coords.push_back(coord);
  }
  return out;
}

std::vector<CellDesc> Sweep::run(const Formula &f0, std::size_t n) {
  Formula f = simplify(f0);
  if (f.is_false()) return {};
  if (n == 0) {
    auto open = unassigned(f, params);
    if (open.empty()) {
      if (!f.is_true() && !eval(f, params)) return {};
      CellDesc c;
      return {c};
    }
    if (!possible(f)) return {};
    CellDesc c;
    c.param_condition = f;
    return {c};
  }
  const std::string &y = vars[n - 1];
  if (!f.free_vars().count(y)) {
    CellCoord free;
    free.unbounded_fibers = true;
    return extend(f, n, free);
  }

  // y-atoms in f
  std::vector<Atom> yatoms;
  {
    std::unordered_set<Formula, FormulaHash> seen;
    std::function<void(const Formula &)> walk = [&](const Formula &g) {
      if (g.is_atom()) {
        if (g.atom().diff().has(y) && seen.insert(g).second) yatoms.push_back(g.atom());
        return;
      }
      if (g.kind() == Kind::And || g.kind() == Kind::Or)
        for (const auto &k : g.children()) walk(k);
    };
    walk(f);
  }

  // residue splits making every threshold integral
  struct Split {
    LinearTerm u; // variable part, first coefficient positive
    Integer m;
  };
  std::vector<Split> splits;
  auto split_index = [&](const LinearTerm &u, const Integer &m) -> std::size_t {
    for (std::size_t i = 0; i < splits.size(); ++i)
      if (splits[i].u == u && splits[i].m == m) return i;
    splits.push_back({u, m});
    return splits.size() - 1;
  };
  // residue of r mod m under a guard choice
  struct Need {
    bool none = true;
    std::size_t split = 0;
    bool negated = false;
  };
  std::vector<Need> needs(yatoms.size());
  Integer P = 1;
  for (std::size_t i = 0; i < yatoms.size(); ++i) {
    const Atom &at = yatoms[i];
    LinearTerm d = at.diff();
    Integer a = d.coeff(y);
    if (at.rel == Rel::Cong) {
      P = lcm(P, at.modulus);
      continue;
    }
    Integer m = abs(a);
    LinearTerm u = var_part(d.without(y));
    if (m == 1 || u.is_constant()) continue;
    Need nd;
    nd.none = false;
    if (u.coeffs().front().second < 0) {
      u = -u;
      nd.negated = true;
    }
    nd.split = split_index(u, m);
    needs[i] = nd;
  }
  if (P > 100000) throw ResourceLimit("decompose: congruence period too large");

  Formula context = eliminate(Formula::exists(y, f), opts.qe);
  if (!possible(context)) return {};

  std::vector<CellDesc> result;
  std::vector<Integer> choice(splits.size(), 0);
  std::size_t combos = 1;
  for (const auto &s : splits) {
    combos *= s.m.get_ui();
    if (combos > 100000) throw ResourceLimit("decompose: too many residue cases");
  }

  for (std::size_t combo = 0; combo < combos; ++combo) {
    std::size_t rest = combo;
    std::vector<Formula> gparts;
    for (std::size_t s = 0; s < splits.size(); ++s) {
      unsigned long m = splits[s].m.get_ui();
      choice[s] = Integer(static_cast<unsigned long>(rest % m));
      rest /= m;
      gparts.push_back(Formula::cong(splits[s].u, LinearTerm(choice[s]), splits[s].m));
    }
    Formula guard = simplify(mk_and(gparts));
    Formula guarded_context = simplify(mk_and({context, guard}));
    if (!possible(guarded_context)) continue;

    // cut values and atom rules
    std::vector<RatAffine> cuts;
    auto cut_index = [&](const RatAffine &v) {
      for (std::size_t i = 0; i < cuts.size(); ++i)
        if (cuts[i] == v) return i;
      cuts.push_back(v);
      return cuts.size() - 1;
    };
    std::vector<AtomRule> rules(yatoms.size());
    for (std::size_t i = 0; i < yatoms.size(); ++i) {
      const Atom &at = yatoms[i];
      LinearTerm d = at.diff();
      Integer a = d.coeff(y);
      LinearTerm r = d.without(y);
      AtomRule &rule = rules[i];
      if (at.rel == Rel::Cong) {
        rule.kind = AtomRule::Cong;
        rule.rest = r;
        rule.a = a;
        rule.n = at.modulus;
        continue;
      }
      Integer m = abs(a);
      // residue of r mod m
      Integer rr;
      if (needs[i].none) {
        rr = mod(r.constant(), m);
      } else {
        Integer rho = choice[needs[i].split];
        rr = mod((needs[i].negated ? -rho : rho) + r.constant(), m);
      }
      RatAffine R(r);
      if (at.rel == Rel::Eq) {
        if (rr != 0) {
          rule.kind = AtomRule::Const;
          rule.value = false;
          continue;
        }
        RatAffine e = (-R) * make_rational(1, a);
        rule.kind = AtomRule::Point;
        rule.cut = cut_index(e);
        rule.next = cut_index(e + RatAffine(1));
        continue;
      }
      // a*y + r <= 0
      if (a > 0) {
        // y <= (-r - s)/a with s = (-r) mod a
        Integer s = mod(-rr, m);
        RatAffine U = (-R - RatAffine(Rational(s))) * make_rational(1, m);
        rule.kind = AtomRule::Below;
        rule.cut = cut_index(U + RatAffine(1));
      } else {
        // y >= ceil(r/m) = (r + s)/m with s = (-r) mod m
        Integer s = mod(-rr, m);
        RatAffine L = (R + RatAffine(Rational(s))) * make_rational(1, m);
        rule.kind = AtomRule::AtLeast;
        rule.cut = cut_index(L);
      }
    }

    // weak orderings of the cut values consistent with the context
    const std::size_t K = cuts.size();
    std::vector<std::vector<std::optional<int>>> fixed(K, std::vector<std::optional<int>>(K));
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) {
        RatAffine d = cuts[i] - cuts[j];
        if (d.is_constant()) fixed[i][j] = d.constant() > 0 ? 1 : (d.constant() < 0 ? -1 : 0);
      }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::vector<std::vector<std::size_t>>> orderings;
    auto order_formula = [&](const std::vector<std::vector<std::size_t>> &gs) {
      std::vector<Formula> parts;
      for (std::size_t g = 0; g < gs.size(); ++g) {
        for (std::size_t k = 1; k < gs[g].size(); ++k)
          parts.push_back(rat_rel(Rel::Eq, cuts[gs[g][k]], cuts[gs[g][0]]));
        if (g + 1 < gs.size()) parts.push_back(rat_rel(Rel::Lt, cuts[gs[g][0]], cuts[gs[g + 1][0]]));
      }
      return mk_and(std::move(parts));
    };
    auto group_of = [&](std::size_t c) -> int {
      for (std::size_t g = 0; g < groups.size(); ++g)
        if (std::find(groups[g].begin(), groups[g].end(), c) != groups[g].end())
          return static_cast<int>(g);
      return -1;
    };
    auto consistent = [&](std::size_t k) {
      int gk = group_of(k);
      bool open = false;
      for (std::size_t j = 0; j < k; ++j) {
        int gj = group_of(j);
        int want = gk > gj ? 1 : (gk < gj ? -1 : 0);
        if (fixed[k][j]) {
          if (*fixed[k][j] != want) return false;
        } else {
          open = true;
        }
      }
      if (!open) return true;
      return possible(simplify(mk_and({guarded_context, order_formula(groups)})));
    };
    std::function<void(std::size_t)> place = [&](std::size_t k) {
      if (k == K) {
        orderings.push_back(groups);
        if (orderings.size() > 20000) throw ResourceLimit("decompose: too many cut orderings");
        return;
      }
      for (std::size_t pos = 0; pos <= groups.size(); ++pos) {
        groups.insert(groups.begin() + static_cast<long>(pos), std::vector<std::size_t>{k});
        if (consistent(k)) place(k + 1);
        groups.erase(groups.begin() + static_cast<long>(pos));
      }
      for (std::size_t g = 0; g < groups.size(); ++g) {
        groups[g].push_back(k);
        if (consistent(k)) place(k + 1);
        groups[g].pop_back();
      }
    };
    place(0);

    for (const auto &gs : orderings) {
      groups = gs;
      Formula order = order_formula(gs);
      std::vector<int> gidx(K);
      for (std::size_t c = 0; c < K; ++c) gidx[c] = group_of(c);
      const int m = static_cast<int>(gs.size());
      // interval i lies between group i and group i+1 (i = -1 .. m-1)
      for (int i = -1; i < m; ++i) {
        std::vector<Formula> by_res;
        for (Integer rho = 0; rho < P; ++rho) {
          std::unordered_map<Formula, Formula, FormulaHash> sub;
          for (std::size_t t = 0; t < yatoms.size(); ++t) {
            const AtomRule &ru = rules[t];
            Formula val;
            switch (ru.kind) {
            case AtomRule::Const: val = Formula::truth(ru.value); break;
            case AtomRule::Below: val = Formula::truth(gidx[ru.cut] >= i + 1); break;
            case AtomRule::AtLeast: val = Formula::truth(gidx[ru.cut] <= i); break;
            case AtomRule::Point:
              val = Formula::truth(gidx[ru.cut] == i && gidx[ru.next] == i + 1);
              break;
            case AtomRule::Cong:
              val = Formula::cong(ru.rest + LinearTerm(ru.a * rho), LinearTerm(0), ru.n);
              break;
            }
            sub.emplace(Formula::atom(yatoms[t]), val);
          }
          Formula phi = map_atoms(f, [&](const Atom &a) {
            auto it = sub.find(Formula::atom(a));
            return it == sub.end() ? Formula::atom(a) : it->second;
          });
          by_res.push_back(simplify(phi));
        }
        // coarsest period on which the residue pieces repeat
        Integer Pd = P;
        for (Integer d = 1; d <= P; ++d) {
          if (!divides(d, P)) continue;
          bool ok = true;
          for (Integer rho = d; ok && rho < P; ++rho)
            ok = by_res[rho.get_ui()] == by_res[mod(rho, d).get_ui()];
          if (ok) {
            Pd = d;
            break;
          }
        }
        std::optional<RatAffine> lo, hi;
        if (i >= 0) lo = cuts[gs[static_cast<std::size_t>(i)][0]];
        if (i + 1 < m) hi = cuts[gs[static_cast<std::size_t>(i + 1)][0]] - RatAffine(1);
        for (Integer rho = 0; rho < Pd; ++rho) {
          const Formula &phi = by_res[rho.get_ui()];
          if (phi.is_false()) continue;
          Formula yclass = Pd > 1 ? Formula::cong(LinearTerm::var(y), LinearTerm(rho), Pd)
                                  : Formula::truth(true);
          Formula nonempty = Formula::truth(true);
          if (lo && hi && Pd > 1)
            nonempty = eliminate(
                Formula::exists(y, mk_and({rat_rel(Rel::Le, *lo, RatAffine::var(y)),
                                           rat_rel(Rel::Le, RatAffine::var(y), *hi), yclass})),
                opts.qe);
          Formula B = simplify(mk_and({guard, order, phi, nonempty}));
          if (!possible(B)) continue;

          CellCoord coord;
          coord.modulus = Pd;
          coord.residue = rho;
          coord.lower = lo;
          coord.upper = hi;
          if (!lo || !hi) {
            coord.unbounded_fibers = true;
            auto cells = extend(B, n, coord);
            result.insert(result.end(), cells.begin(), cells.end());
            continue;
          }
          const Integer depth = opts.certificate_depth;
          RatAffine width = *hi - *lo;
          bool wide;
          if (width.is_constant() && width.constant() >= Rational(depth * Pd + Pd - 1)) {
            wide = true;
          } else if (width.is_constant() && width.constant() < Rational(depth * Pd)) {
            wide = false;
          } else {
            RatAffine Y = RatAffine::var(y);
            Formula deep = mk_and({B, rat_rel(Rel::Le, *lo, Y),
                                   rat_rel(Rel::Le, Y + RatAffine(Rational(depth * Pd)), *hi), yclass});
            wide = possible(deep);
          }
          if (wide) {
            if (!width.is_constant()) {
              // fibres beyond every standard bound: test at a fresh infinite size
              std::vector<ModelElement> used;
              for (const auto &[k, v] : params) used.push_back(v);
              std::string nv = fresh_name("_n", B.free_vars());
              Assignment with = params;
              with[nv] = ModelElement::infinite(1, fresh_rank(used));
              RatAffine Y = RatAffine::var(y);
              Formula huge = mk_and({B, rat_rel(Rel::Le, *lo, Y),
                                     rat_rel(Rel::Le, Y + RatAffine::var(nv), *hi), yclass});
              std::vector<std::string> q = unassigned(huge, with);
              coord.unbounded_fibers = decide(mk_exists(q, huge), with, opts.qe);
            }
            auto cells = extend(B, n, coord);
            result.insert(result.end(), cells.begin(), cells.end());
            continue;
          }
          // bounded fibres: one graph cell per position in the fibre
          std::vector<std::pair<Formula, RatAffine>> firsts;
          if (Pd == 1) {
            firsts.emplace_back(Formula::truth(true), *lo);
          } else {
            for (Integer s = 0; s < Pd; ++s)
              firsts.emplace_back(rat_cong(*lo, s, Pd), *lo + RatAffine(Rational(mod(rho - s, Pd))));
          }
          for (const auto &[g2, first] : firsts) {
            for (Integer k = 0; k <= depth; ++k) {
              RatAffine v = first + RatAffine(Rational(k * Pd));
              Formula Bk = simplify(mk_and({B, g2, rat_rel(Rel::Le, v, *hi)}));
              if (!possible(Bk)) break;
              CellCoord gc;
              gc.type = CellCoord::Type::Graph;
              gc.value = v;
              auto cells = extend(Bk, n, gc);
              result.insert(result.end(), cells.begin(), cells.end());
            }
          }
        }
      }
    }
  }
  if (opts.merge) merge(result);
  return result;
}

// Joins cells that agree before the last coordinate and whose last
// coordinates are adjacent intervals of the same residue class.
void Sweep::merge(std::vector<CellDesc> &cells) const {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cells.size() && !changed; ++i) {
      for (std::size_t j = 0; j < cells.size() && !changed; ++j) {
        if (i == j) continue;
        CellDesc &A = cells[i];
        CellDesc &B = cells[j];
        if (A.coords.empty() || A.coords.size() != B.coords.size()) continue;
        std::size_t last = A.coords.size() - 1;
        if (!(A.param_condition == B.param_condition)) continue;
        if (!std::equal(A.coords.begin(), A.coords.begin() + static_cast<long>(last),
                        B.coords.begin()))
          continue;
        const CellCoord &a = A.coords[last];
        const CellCoord &b = B.coords[last];
        if (!a.is_interval() || !b.is_interval()) continue;
        if (a.modulus != b.modulus || a.residue != b.residue) continue;
        if (!a.upper || !b.lower) continue;
        // a ends where b starts (no class point skipped)
        RatAffine gap = *b.lower - *a.upper;
        if (!(gap.is_constant() && gap.constant() == 1)) continue;
        CellCoord m = a;
        m.upper = b.upper;
        m.unbounded_fibers = a.unbounded_fibers || b.unbounded_fibers || !m.upper || !m.lower;
        A.coords[last] = m;
        cells.erase(cells.begin() + static_cast<long>(j));
        changed = true;
      }
    }
  }
}

} // namespace

std::vector<CellDesc> decompose(const Formula &f, const std::vector<std::string> &vars,
                                const Assignment &params, const DecomposeOptions &opts) {
  Formula g = f.is_quantifier_free() ? f : eliminate(f, opts.qe);
  for (const auto &v : vars)
    if (params.count(v)) throw DomainError("decompose: variable " + v + " is also a parameter");
  Sweep s{vars, params, opts};
  auto cells = s.run(g, vars.size());
  for (auto &c : cells) c.vars = vars;
  return cells;
}

PartitionReport certify_partition(const Formula &f, const std::vector<CellDesc> &cells,
                                  const Assignment &params, const QeOptions &qe) {
  PartitionReport rep;
  std::vector<Formula> forms;
  for (const auto &c : cells) forms.push_back(c.formula());
  // f <-> OR cells, checked as one small sentence per cell plus one for the
  // remainder; the single biconditional is much costlier to eliminate
  auto never = [&](const Formula &g) { return !decide(mk_exists(unassigned(g, params), g), params, qe); };
  rep.covers = true;
  for (const auto &c : forms)
    if (!never(mk_and({c, mk_not(f)}))) rep.covers = false;
  if (rep.covers) {
    std::vector<Formula> rest{f};
    for (const auto &c : forms) rest.push_back(mk_not(c));
    rep.covers = never(mk_and(rest));
  }
  rep.disjoint = true;
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      Formula both = simplify(mk_and({forms[i], forms[j]}));
      if (both.is_false()) continue;
      if (decide(mk_exists(unassigned(both, params), both), params, qe)) {
        rep.disjoint = false;
        rep.overlapping.emplace_back(i, j);
      }
    }
  return rep;
}

// ---- functions -----------------------------------------------------------

namespace {

std::vector<std::pair<Integer, Integer>> classes_of(const CellDesc &c) {
  std::vector<std::pair<Integer, Integer>> out;
  for (const auto &co : c.coords)
    out.emplace_back(co.is_interval() ? co.modulus : Integer(1), co.is_interval() ? co.residue : Integer(0));
  return out;
}

} // namespace

std::vector<FunctionPiece> decompose_function(const Formula &graph0,
                                              const std::vector<std::string> &in_vars,
                                              const std::string &out_var,
                                              const Assignment &params,
                                              const DecomposeOptions &opts) {
  Formula graph = graph0.is_quantifier_free() ? graph0 : eliminate(graph0, opts.qe);
  std::set<std::string> taken = graph.free_vars();
  for (const auto &v : in_vars) taken.insert(v);
  std::string other = fresh_name(out_var + "_", taken);
  Formula clash = mk_and({graph, rename_free(graph, out_var, other),
                          Formula::rel(Rel::Lt, LinearTerm::var(out_var), LinearTerm::var(other))});
  if (auto w = satisfiable(clash, params, opts.qe)) {
    Assignment shown;
    for (const auto &v : in_vars) shown[v] = w->at(v);
    shown[out_var] = w->at(out_var);
    shown[out_var + "'"] = w->at(other);
    std::string msg = "relation is not functional in " + out_var + " at";
    for (const auto &[k, v] : shown) msg += " " + k + "=" + v.str();
    throw NotFunctional(msg, shown);
  }

  std::vector<std::string> all = in_vars;
  all.push_back(out_var);
  auto cells = decompose(graph, all, params, opts);

  struct Raw {
    CellDesc domain;
    RatAffine value; // over the domain's free coordinates and parameters
  };
  std::vector<Raw> raw;
  for (const auto &c : cells) {
    const CellCoord &last = c.coords.back();
    if (last.is_interval()) throw DomainError("decompose_function: fibre with several values");
    Raw r;
    r.domain.vars = in_vars;
    r.domain.param_condition = c.param_condition;
    r.domain.coords.assign(c.coords.begin(), c.coords.end() - 1);
    r.value = c.in_free_coords(last.value, c.coords.size() - 1);
    raw.push_back(std::move(r));
  }

  // Join adjacent domain pieces carrying the same function.
  bool changed = true;
  while (changed && opts.merge) {
    changed = false;
    for (std::size_t i = 0; i < raw.size() && !changed; ++i)
      for (std::size_t j = 0; j < raw.size() && !changed; ++j) {
        if (i == j || raw[i].domain.coords.empty()) continue;
        CellDesc &A = raw[i].domain;
        CellDesc &B = raw[j].domain;
        if (!(A.param_condition == B.param_condition)) continue;
        std::size_t last = A.coords.size() - 1;
        if (!std::equal(A.coords.begin(), A.coords.begin() + static_cast<long>(last),
                        B.coords.begin()))
          continue;
        const CellCoord &a = A.coords[last];
        const CellCoord &b = B.coords[last];
        if (!b.is_interval()) continue;
        // B's function restricted to A must be A's function.
        RatAffine fb_on_a = A.in_free_coords(raw[j].value, A.coords.size());
        if (!(fb_on_a == A.in_free_coords(raw[i].value, A.coords.size()))) continue;
        CellCoord m = b;
        if (a.is_interval()) {
          if (a.modulus != b.modulus || a.residue != b.residue) continue;
          if (a.upper && b.lower && (*b.lower - *a.upper) == RatAffine(1)) {
            m.lower = a.lower;
          } else if (a.lower && b.upper && (*a.lower - *b.upper) == RatAffine(1)) {
            m.upper = a.upper;
          } else {
            continue;
          }
        } else {
          if (b.modulus != 1) continue;
          if (b.lower && (*b.lower - a.value) == RatAffine(1)) {
            m.lower = a.value;
          } else if (b.upper && (a.value - *b.upper) == RatAffine(1)) {
            m.upper = a.value;
          } else {
            continue;
          }
        }
        m.unbounded_fibers = b.unbounded_fibers || a.unbounded_fibers || !m.lower || !m.upper;
        B.coords[last] = m;
        raw.erase(raw.begin() + static_cast<long>(i));
        changed = true;
      }
  }

  std::vector<FunctionPiece> out;
  for (auto &r : raw) {
    FunctionPiece p;
    p.domain = r.domain;
    p.function = LinearFunction::from_affine(r.value, in_vars, classes_of(r.domain));
    // certify: on the domain the graph is exactly t = f(x)
    RatAffine t = RatAffine::var(out_var);
    Formula claim = mk_implies(p.domain.formula(), mk_iff(graph, rat_rel(Rel::Eq, t, r.value)));
    if (!decide(mk_forall(unassigned(claim, params), claim), params, opts.qe))
      throw DomainError("decompose_function: piece failed certification");
    out.push_back(std::move(p));
  }
  return out;
}

std::optional<int> dim(const Formula &f, const std::vector<std::string> &vars0,
                       const Assignment &params, const DecomposeOptions &opts) {
  Formula g = f.is_quantifier_free() ? f : eliminate(f, opts.qe);
  std::vector<std::string> vars = vars0;
  if (vars.empty())
    for (const auto &v : f.free_vars())
      if (!params.count(v)) vars.push_back(v);
  auto cells = decompose(g, vars, params, opts);
  if (cells.empty()) return std::nullopt;
  int d = 0;
  for (const auto &c : cells) d = std::max(d, c.dim());
  return d;
}

} // namespace pkit
