#include "pkit/qe.hpp"

#include "pkit/eval.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <map>
#include <unordered_set>

namespace pkit {

std::optional<std::pair<Integer, Integer>>
crt_merge(const std::vector<std::pair<Integer, Integer>> &congruences) {
  Integer N = 1, c = 0;
  for (const auto &[n, r] : congruences) {
    if (n < 1) throw DomainError("crt_merge: modulus must be positive");
    Integer g = gcd(N, n);
    Integer diff = r - c;
    if (!divides(g, diff)) return std::nullopt;
    Integer n2 = n / g;
    Integer t = mod((diff / g) * mod_inverse(N / g, n2), n2);
    c = c + N * t;
    N = N * n2;
    c = mod(c, N);
  }
  return std::make_pair(N, c);
}

namespace {

// ---- canonical atoms -------------------------------------------------------

// Variable part of a term (constant dropped).
LinearTerm var_part(const LinearTerm &t) {
  LinearTerm v = t;
  v.set_constant(0);
  return v;
}

Formula le(LinearTerm t) {
  if (t.is_constant()) return Formula::truth(t.constant() <= 0);
  Integer g = t.content();
  if (g != 1) {
    Integer c = t.constant();
    LinearTerm u = var_part(t);
    LinearTerm r;
    for (const auto &[v, k] : u.coeffs()) r.set_coeff(v, k / g);
    // g*u + c <= 0  <=>  u <= floor(-c/g)
    r.set_constant(-floor_div(-c, g));
    t = r;
  }
  Atom a;
  a.rel = Rel::Le;
  a.lhs = t;
  return Formula::atom(std::move(a));
}

Formula eq(LinearTerm t) {
  if (t.is_constant()) return Formula::truth(t.constant() == 0);
  Integer g = t.content();
  if (!divides(g, t.constant())) return Formula::truth(false);
  if (g != 1) {
    LinearTerm r;
    for (const auto &[v, k] : t.coeffs()) r.set_coeff(v, k / g);
    r.set_constant(t.constant() / g);
    t = r;
  }
  if (t.coeffs().front().second < 0) t = -t;
  Atom a;
  a.rel = Rel::Eq;
  a.lhs = t;
  return Formula::atom(std::move(a));
}

Integer sym_mod(const Integer &v, const Integer &n) {
  Integer r = mod(v, n);
  if (2 * r > n) r -= n;
  return r;
}

Formula cong(const LinearTerm &t, Integer N) {
  LinearTerm u;
  for (const auto &[v, k] : t.coeffs()) u.set_coeff(v, sym_mod(k, N));
  Integer c = mod(t.constant(), N);
  if (u.is_constant()) return Formula::truth(c == 0);
  Integer g = gcd(u.content(), N);
  if (!divides(g, c)) return Formula::truth(false);
  if (g != 1) {
    LinearTerm r;
    for (const auto &[v, k] : u.coeffs()) r.set_coeff(v, k / g);
    u = r;
    c /= g;
    N /= g;
    if (N == 1) return Formula::truth(true);
    LinearTerm w;
    for (const auto &[v, k] : u.coeffs()) w.set_coeff(v, sym_mod(k, N));
    u = w;
    if (u.is_constant()) return Formula::truth(mod(c, N) == 0);
  }
  if (u.coeffs().front().second < 0) {
    LinearTerm w;
    for (const auto &[v, k] : u.coeffs()) w.set_coeff(v, sym_mod(-k, N));
    u = w;
    c = -c;
  }
  u.set_constant(c);
  return Formula::cong(u, LinearTerm(0), N);
}

// Canonical atom from any atom, optionally negated.
Formula canon_atom(const Atom &a, bool positive) {
  LinearTerm d = a.diff();
  LinearTerm one(1);
  switch (a.rel) {
  case Rel::Le: return positive ? le(d) : le(-d + one);
  case Rel::Ge: return positive ? le(-d) : le(d + one);
  case Rel::Lt: return positive ? le(d + one) : le(-d);
  case Rel::Gt: return positive ? le(-d + one) : le(d);
  case Rel::Eq:
    if (positive) return eq(d);
    return mk_or({le(d + one), le(-d + one)});
  case Rel::Cong: {
    if (positive) return cong(d, a.modulus);
    std::vector<Formula> parts;
    for (Integer r = 1; r < a.modulus; ++r) parts.push_back(cong(d + LinearTerm(r), a.modulus));
    return mk_or(std::move(parts));
  }
  }
  return Formula::truth(false);
}

std::string key_of(const LinearTerm &varpart) { return varpart.str(); }

Formula junction(bool is_and, std::vector<Formula> kids);

Formula nnf(const Formula &f, bool positive) {
  switch (f.kind()) {
  case Kind::True: return Formula::truth(positive);
  case Kind::False: return Formula::truth(!positive);
  case Kind::Atom: return canon_atom(f.atom(), positive);
  case Kind::Not: return nnf(f.child(), !positive);
  case Kind::And:
  case Kind::Or: {
    std::vector<Formula> kids;
    kids.reserve(f.children().size());
    for (const auto &k : f.children()) kids.push_back(nnf(k, positive));
    bool is_and = (f.kind() == Kind::And) == positive;
    return junction(is_and, std::move(kids));
  }
  default: throw DomainError("simplify: formula is not quantifier-free");
  }
}

// Flattening, constant folding, bound merging, congruence merging, dedupe
// and absorption for a conjunction (is_and) or disjunction of NNF parts.
Formula junction(bool is_and, std::vector<Formula> kids) {
  Kind self = is_and ? Kind::And : Kind::Or;
  std::vector<Formula> flat;
  for (auto &k : kids) {
    if (k.is_true()) {
      if (is_and) continue;
      return Formula::truth(true);
    }
    if (k.is_false()) {
      if (!is_and) continue;
      return Formula::truth(false);
    }
    if (k.kind() == self) {
      for (const auto &g : k.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(k));
    }
  }

  if (!is_and) {
    // congruences on one variable part whose residue classes cover everything
    std::map<std::string, std::vector<std::pair<Integer, Integer>>> classes;
    for (const auto &k : flat)
      if (k.is_atom() && k.atom().rel == Rel::Cong)
        classes[key_of(k.atom().lhs)].emplace_back(k.atom().modulus, k.atom().rhs.constant());
    for (const auto &[key, cs] : classes) {
      if (cs.size() < 2) continue;
      Integer L = 1;
      for (const auto &c : cs) L = lcm(L, c.first);
      if (L > 4096) continue;
      bool all = true;
      for (long r = 0; all && r < L.get_si(); ++r) {
        bool hit = false;
        for (const auto &[n, c] : cs)
          if (mod(Integer(r) - c, n) == 0) {
            hit = true;
            break;
          }
        all = hit;
      }
      if (all) return Formula::truth(true);
    }
  }

  std::vector<std::optional<Formula>> out;
  std::map<std::string, std::size_t> le_slot;   // varpart -> index in out
  std::map<std::string, std::size_t> cong_slot; // lhs -> index
  std::unordered_set<Formula, FormulaHash> seen;

  for (auto &k : flat) {
    if (k.is_atom()) {
      const Atom &a = k.atom();
      if (a.rel == Rel::Le) {
        LinearTerm u = var_part(a.lhs);
        std::string key = key_of(u);
        const Integer &c = a.lhs.constant();
        auto it = le_slot.find(key);
        if (it != le_slot.end()) {
          const Integer &c0 = out[it->second]->atom().lhs.constant();
          // and: keep larger constant (tighter); or: keep smaller
          if (is_and ? c > c0 : c < c0) out[it->second] = k;
          continue;
        }
        // opposite bound on the same variable part
        auto opp = le_slot.find(key_of(-u));
        if (opp != le_slot.end()) {
          const Integer &c2 = out[opp->second]->atom().lhs.constant();
          // u + c <= 0 and -u + c2 <= 0: u <= -c, u >= c2
          if (is_and && c2 > -c) return Formula::truth(false);
          if (!is_and && c2 <= -c + 1) return Formula::truth(true);
        }
        le_slot[key] = out.size();
        out.push_back(k);
        continue;
      }
      if (a.rel == Rel::Cong && is_and) {
        std::string key = key_of(a.lhs);
        auto it = cong_slot.find(key);
        if (it != cong_slot.end()) {
          const Atom &b = out[it->second]->atom();
          auto merged = crt_merge({{a.modulus, a.rhs.constant()}, {b.modulus, b.rhs.constant()}});
          if (!merged) return Formula::truth(false);
          Formula m = cong(a.lhs - LinearTerm(merged->second), merged->first);
          if (m.is_atom()) {
            out[it->second] = m;
          } else {
            out[it->second].reset();
            cong_slot.erase(it);
          }
          continue;
        }
        cong_slot[key] = out.size();
        out.push_back(k);
        continue;
      }
    }
    if (!seen.insert(k).second) continue;
    out.push_back(k);
  }

  // Re-check Le opposites that were tightened after insertion, and Eq clashes.
  std::vector<Formula> result;
  std::unordered_set<Formula, FormulaHash> atoms;
  for (auto &o : out)
    if (o && o->is_atom()) atoms.insert(*o);
  std::map<std::string, Integer> eqs;
  for (auto &o : out) {
    if (!o) continue;
    if (o->is_atom() && o->atom().rel == Rel::Eq) {
      std::string key = key_of(var_part(o->atom().lhs));
      auto it = eqs.find(key);
      if (it != eqs.end() && it->second != o->atom().lhs.constant()) {
        if (is_and) return Formula::truth(false);
      }
      eqs[key] = o->atom().lhs.constant();
    }
    if (!o->is_atom() && (o->kind() == Kind::Or || o->kind() == Kind::And)) {
      // absorption: A and (A or B) = A; A or (A and B) = A
      bool absorbed = false;
      for (const auto &g : o->children())
        if (g.is_atom() && atoms.count(g)) {
          absorbed = true;
          break;
        }
      if (absorbed) continue;
    }
    result.push_back(*o);
  }
  if (is_and) {
    // u <= -c and u >= -c meet in the equation u + c = 0
    std::vector<Formula> drop, add;
    for (const auto &[key, slot] : le_slot) {
      const Formula &f = *out[slot];
      LinearTerm u = var_part(f.atom().lhs);
      auto opp = le_slot.find(key_of(-u));
      if (opp == le_slot.end()) continue;
      Integer c = f.atom().lhs.constant();
      Integer c2 = out[opp->second]->atom().lhs.constant();
      if (c2 > -c) return Formula::truth(false);
      if (c2 == -c && key < opp->first) {
        drop.push_back(f);
        drop.push_back(*out[opp->second]);
        add.push_back(eq(f.atom().lhs));
      }
    }
    if (!add.empty()) {
      std::vector<Formula> kept;
      for (auto &r : result)
        if (std::find(drop.begin(), drop.end(), r) == drop.end()) kept.push_back(std::move(r));
      for (auto &a : add) kept.push_back(std::move(a));
      return junction(true, std::move(kept));
    }
  } else {
    for (const auto &[key, slot] : le_slot) {
      const Formula &f = *out[slot];
      LinearTerm u = var_part(f.atom().lhs);
      auto opp = le_slot.find(key_of(-u));
      if (opp == le_slot.end()) continue;
      Integer c = f.atom().lhs.constant();
      Integer c2 = out[opp->second]->atom().lhs.constant();
      if (c2 <= -c + 1) return Formula::truth(true);
    }
  }
  if (result.empty()) return Formula::truth(is_and);
  if (result.size() == 1) return result[0];
  return is_and ? Formula::conj(std::move(result)) : Formula::disj(std::move(result));
}

Formula resimplify(const Formula &f) { return nnf(f, true); }

// ---- Cooper elimination ------------------------------------------------------

struct Budget {
  std::size_t limit;
  QeStats *stats;
  void check(const Formula &f) const {
    if (stats) stats->peak_nodes = std::max(stats->peak_nodes, f.size());
    if (f.size() > limit)
      throw ResourceLimit("quantifier elimination exceeded node budget (" +
                          std::to_string(f.size()) + " > " + std::to_string(limit) + ")");
  }
};

void collect_coeffs(const Formula &f, const std::string &x, Integer &L) {
  if (f.is_atom()) {
    Integer a = f.atom().diff().coeff(x);
    if (a != 0) L = lcm(L, abs(a));
    return;
  }
  for (const auto &k : f.children()) collect_coeffs(k, x, L);
}

// Scales every atom so that x has coefficient +-L, then renames L*x to x.
Formula unit_scale(const Formula &f, const std::string &x, const Integer &L) {
  return map_atoms(f, [&](const Atom &a) -> Formula {
    LinearTerm t = a.diff();
    Integer c = t.coeff(x);
    if (c == 0) return Formula::atom(a);
    Integer m = L / abs(c);
    t *= m;
    t.set_coeff(x, sgn(c));
    switch (a.rel) {
    case Rel::Le: return le(t);
    case Rel::Eq: return eq(t);
    case Rel::Cong: return cong(t, a.modulus * m);
    default: throw DomainError("unit_scale: non-canonical atom");
    }
  });
}

struct Bounds {
  std::vector<LinearTerm> lower; // x > b
  std::vector<LinearTerm> upper; // x < a
  Integer delta = 1;
};

void add_unique(std::vector<LinearTerm> &v, const LinearTerm &t) {
  if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
}

void collect_bounds(const Formula &f, const std::string &x, Bounds &b) {
  if (f.is_atom()) {
    const Atom &a = f.atom();
    LinearTerm t = a.diff();
    Integer c = t.coeff(x);
    if (c == 0) return;
    LinearTerm r = t.without(x);
    switch (a.rel) {
    case Rel::Le:
      if (c > 0) add_unique(b.upper, -r + LinearTerm(1)); // x <= -r
      else add_unique(b.lower, r - LinearTerm(1));        // x >= r
      break;
    case Rel::Eq: {
      LinearTerm v = c > 0 ? -r : r; // x = v
      add_unique(b.lower, v - LinearTerm(1));
      add_unique(b.upper, v + LinearTerm(1));
      break;
    }
    case Rel::Cong: b.delta = lcm(b.delta, a.modulus); break;
    default: break;
    }
    return;
  }
  for (const auto &k : f.children()) collect_bounds(k, x, b);
}

// F with x sent to -infinity (lower = true) or +infinity.
Formula at_infinity(const Formula &f, const std::string &x, bool minus) {
  return map_atoms(f, [&](const Atom &a) -> Formula {
    Integer c = a.diff().coeff(x);
    if (c == 0 || a.rel == Rel::Cong) return Formula::atom(a);
    if (a.rel == Rel::Eq) return Formula::truth(false);
    // x + r <= 0 holds at -inf; -x + r <= 0 holds at +inf
    return Formula::truth((c > 0) == minus);
  });
}

Formula subst_simpl(const Formula &f, const std::string &x, const LinearTerm &by) {
  return resimplify(substitute(f, x, by));
}

std::optional<Formula> top_unit_equality(const Formula &f, const std::string &x) {
  auto check = [&](const Formula &g) -> bool {
    return g.is_atom() && g.atom().rel == Rel::Eq && abs(g.atom().diff().coeff(x)) == 1;
  };
  if (check(f)) return f;
  if (f.kind() == Kind::And)
    for (const auto &k : f.children())
      if (check(k)) return k;
  return std::nullopt;
}

Formula cooper(const std::string &x, const Formula &psi, const Budget &budget);

// A disjunction whose every branch pins x by a unit equality, possibly
// after splitting a nested disjunction of the same shape.
bool defines_by_cases(const Formula &f, const std::string &x) {
  if (f.kind() != Kind::Or) return false;
  for (const auto &b : f.children()) {
    if (top_unit_equality(b, x)) continue;
    if (b.kind() != Kind::And) return false;
    bool nested = false;
    for (const auto &c : b.children()) nested = nested || defines_by_cases(c, x);
    if (!nested) return false;
  }
  return true;
}

Formula elim_exists(const std::string &x, const Formula &phi, const Budget &budget) {
  if (!phi.free_vars().count(x)) return phi;
  if (phi.kind() == Kind::Or) {
    std::vector<Formula> parts;
    for (const auto &k : phi.children()) parts.push_back(elim_exists(x, k, budget));
    Formula r = junction(false, std::move(parts));
    budget.check(r);
    return r;
  }
  if (phi.kind() == Kind::And && !top_unit_equality(phi, x)) {
    // a disjunction of x-definitions: split so each branch substitutes
    const auto &kids = phi.children();
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (!defines_by_cases(kids[i], x)) continue;
      std::vector<Formula> parts;
      for (const auto &branch : kids[i].children()) {
        std::vector<Formula> conj;
        for (std::size_t j = 0; j < kids.size(); ++j) conj.push_back(j == i ? branch : kids[j]);
        parts.push_back(elim_exists(x, junction(true, std::move(conj)), budget));
      }
      Formula r = junction(false, std::move(parts));
      budget.check(r);
      return r;
    }
  }
  if (phi.kind() == Kind::And) {
    std::vector<Formula> with, without;
    for (const auto &k : phi.children()) {
      if (k.free_vars().count(x)) with.push_back(k);
      else without.push_back(k);
    }
    if (!without.empty()) {
      Formula inner = with.size() == 1 ? with[0] : Formula::conj(with);
      without.push_back(cooper(x, inner, budget));
      Formula r = junction(true, std::move(without));
      budget.check(r);
      return r;
    }
  }
  return cooper(x, phi, budget);
}

Formula cooper(const std::string &x, const Formula &psi0, const Budget &budget) {
  Integer L = 1;
  collect_coeffs(psi0, x, L);
  Formula psi = psi0;
  if (L != 1) {
    psi = unit_scale(psi0, x, L);
    psi = junction(true, {psi, cong(LinearTerm::var(x), L)});
  }
  psi = resimplify(psi);
  if (!psi.free_vars().count(x)) return psi;

  if (auto e = top_unit_equality(psi, x)) {
    LinearTerm t = e->atom().diff();
    Integer c = t.coeff(x);
    LinearTerm r = t.without(x);
    LinearTerm value = c > 0 ? -r : r;
    Formula out = subst_simpl(psi, x, value);
    budget.check(out);
    return out;
  }

  Bounds b;
  collect_bounds(psi, x, b);
  bool use_lower = b.lower.size() <= b.upper.size();
  const auto &terms = use_lower ? b.lower : b.upper;
  Integer delta = b.delta;
  if (delta > 100000) throw ResourceLimit("quantifier elimination: modulus too large");

  std::vector<Formula> parts;
  std::size_t total = 0;
  auto push = [&](Formula f) {
    if (f.is_false()) return;
    total += f.size();
    if (total > budget.limit)
      throw ResourceLimit("quantifier elimination exceeded node budget");
    parts.push_back(std::move(f));
  };

  Formula inf = resimplify(at_infinity(psi, x, use_lower));
  bool inf_has_x = inf.free_vars().count(x) > 0;
  for (Integer j = 1; j <= delta; ++j) {
    LinearTerm v = LinearTerm(use_lower ? j : Integer(-j));
    push(subst_simpl(inf, x, v));
    if (!inf_has_x) break;
  }
  for (const auto &t : terms) {
    for (Integer j = 1; j <= delta; ++j) {
      LinearTerm v = use_lower ? t + LinearTerm(j) : t - LinearTerm(j);
      Formula f = subst_simpl(psi, x, v);
      if (f.is_true()) return f;
      push(std::move(f));
    }
  }
  Formula out = junction(false, std::move(parts));
  budget.check(out);
  return out;
}

// Cost estimate for eliminating x next from a QF formula.
std::size_t elimination_cost(const Formula &f, const std::string &x) {
  if (top_unit_equality(f, x)) return 1;
  if (f.kind() == Kind::And)
    for (const auto &k : f.children())
      if (defines_by_cases(k, x)) return k.children().size();
  Integer L = 1;
  collect_coeffs(f, x, L);
  Bounds b;
  collect_bounds(f, x, b);
  Integer d = lcm(b.delta, L);
  std::size_t sides = std::min(b.lower.size(), b.upper.size()) + 1;
  if (!d.fits_ulong_p() || d > 1000000) return static_cast<std::size_t>(-1);
  return sides * static_cast<std::size_t>(d.get_ui());
}

Formula elim_block(std::vector<std::string> vars, Formula body, const Budget &budget) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  while (!vars.empty()) {
    auto fv = body.free_vars();
    std::vector<std::string> live;
    for (const auto &v : vars)
      if (fv.count(v)) live.push_back(v);
    if (live.empty()) break;
    std::size_t best = 0, best_cost = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < live.size(); ++i) {
      std::size_t c = elimination_cost(body, live[i]);
      if (i == 0 || c < best_cost) {
        best = i;
        best_cost = c;
      }
    }
    body = elim_exists(live[best], body, budget);
    if (budget.stats) ++budget.stats->eliminated;
    vars = live;
    vars.erase(vars.begin() + static_cast<long>(best));
  }
  return body;
}

Formula elim_rec(const Formula &f, const Budget &budget) {
  switch (f.kind()) {
  case Kind::True:
  case Kind::False:
  case Kind::Atom: return resimplify(f);
  case Kind::And:
  case Kind::Or: {
    std::vector<Formula> kids;
    for (const auto &k : f.children()) kids.push_back(elim_rec(k, budget));
    return junction(f.kind() == Kind::And, std::move(kids));
  }
  case Kind::Not: return nnf(elim_rec(f.child(), budget), false);
  case Kind::Exists:
  case Kind::Forall: {
    Kind k = f.kind();
    std::vector<std::string> vars;
    Formula cur = f;
    while (cur.kind() == k) {
      vars.push_back(cur.bound_var());
      cur = cur.child();
    }
    Formula body = elim_rec(cur, budget);
    if (k == Kind::Exists) return elim_block(vars, body, budget);
    Formula neg = nnf(body, false);
    return nnf(elim_block(vars, neg, budget), false);
  }
  }
  return f;
}

Formula pretty_atom(const Atom &a) {
  if (a.rel == Rel::Cong) return Formula::atom(a);
  LinearTerm t = a.diff();
  LinearTerm pos, neg;
  for (const auto &[v, k] : t.coeffs()) {
    if (k > 0) pos.set_coeff(v, k);
    else neg.set_coeff(v, -k);
  }
  Integer c = t.constant();
  if (a.rel == Rel::Le) {
    if (pos.is_constant()) return Formula::rel(Rel::Ge, neg, LinearTerm(c));
    return Formula::rel(Rel::Le, pos, neg - LinearTerm(c));
  }
  if (a.rel == Rel::Eq) {
    if (pos.is_constant()) return Formula::rel(Rel::Eq, neg, LinearTerm(c));
    return Formula::rel(Rel::Eq, pos, neg - LinearTerm(c));
  }
  return Formula::atom(a);
}

} // namespace

Formula simplify(const Formula &qf) { return nnf(qf, true); }

Formula prettify(const Formula &qf) {
  return map_atoms(qf, [](const Atom &a) { return pretty_atom(a); });
}

Formula eliminate(const Formula &f, const QeOptions &opts, QeStats *stats) {
  Budget budget{opts.node_budget, stats};
  Formula r = elim_rec(f, budget);
  budget.check(r);
  return prettify(r);
}

bool decide(const Formula &f, const Assignment &params, const QeOptions &opts) {
  Formula g = eliminate(f, opts);
  for (const auto &v : g.free_vars())
    if (!params.count(v)) throw DomainError("decide: free variable '" + v + "' has no value");
  return eval(g, params);
}

std::optional<Assignment> satisfiable(const Formula &f, const Assignment &params,
                                      const QeOptions &opts) {
  std::vector<std::string> unknowns;
  for (const auto &v : f.free_vars())
    if (!params.count(v)) unknowns.push_back(v);
  if (!decide(mk_exists(unknowns, f), params, opts)) return std::nullopt;

  Assignment env = params;
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    const std::string &v = unknowns[i];
    std::vector<std::string> rest(unknowns.begin() + static_cast<long>(i) + 1, unknowns.end());
    Formula phi = simplify(eliminate(mk_exists(rest, f), opts));
    // Truth of phi in v is periodic (period delta) between consecutive
    // critical values, so a window around each critical value suffices.
    Integer delta = 1;
    std::vector<ModelElement> centers{ModelElement(0)};
    std::function<void(const Formula &)> scan = [&](const Formula &g) {
      if (g.is_atom()) {
        const Atom &a = g.atom();
        LinearTerm t = a.diff();
        Integer c = t.coeff(v);
        if (c == 0) return;
        if (a.rel == Rel::Cong) {
          delta = lcm(delta, a.modulus);
          return;
        }
        ScaledElement p = ScaledElement(t.without(v).eval(env)) * make_rational(-1, c);
        centers.push_back(p.floor());
        centers.push_back(p.ceil());
        return;
      }
      for (const auto &k : g.children()) scan(k);
    };
    scan(phi);
    if (delta > 100000) throw ResourceLimit("satisfiable: period too large");
    std::vector<ModelElement> cands;
    long w = delta.get_si() + 1;
    for (const auto &c : centers)
      for (long k = -w; k <= w; ++k) cands.push_back(c + ModelElement(k));
    std::sort(cands.begin(), cands.end(), [](const ModelElement &a, const ModelElement &b) {
      if (a.is_finite() != b.is_finite()) return a.is_finite();
      if (a.is_finite()) {
        Integer x = abs(a.z()), y = abs(b.z());
        if (x != y) return x < y;
        return a.z() > b.z();
      }
      return a < b;
    });
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    bool found = false;
    for (const auto &c : cands) {
      env[v] = c;
      if (eval(phi, env)) {
        found = true;
        break;
      }
    }
    if (!found) throw Error("satisfiable: no witness found for '" + v + "' (internal error)");
  }
  if (!decide(f, env, opts)) throw Error("satisfiable: witness failed verification");
  Assignment out;
  for (const auto &v : unknowns) out[v] = env[v];
  return out;
}

} // namespace pkit
