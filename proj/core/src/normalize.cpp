#include "pkit/normalize.hpp"

namespace pkit {

namespace {

constexpr long kMaxCases = 100000;

struct SplitCase {
  Formula guard;
  Integer C;      // constant after fixing residues
  RatAffine base; // sum of the exactly divisible parts, already divided by s
};

// Splits t = sum k_i a_i + l by residues modulo s of the parameters whose
// coefficient is not a multiple of s.
std::vector<SplitCase> split_by_residues(const LinearTerm &t, const Integer &s) {
  std::vector<std::pair<std::string, Integer>> split;
  RatAffine fixed;
  for (const auto &[v, k] : t.coeffs()) {
    if (divides(s, k)) fixed.set_coeff(v, Rational(k / s));
    else split.push_back({v, k});
  }
  Integer total = 1;
  for (std::size_t i = 0; i < split.size(); ++i) {
    total *= s;
    if (total > kMaxCases) throw ResourceLimit("normalize_atomic: too many residue cases");
  }
  std::vector<SplitCase> out;
  std::vector<Integer> r(split.size(), Integer(0));
  while (true) {
    SplitCase c;
    std::vector<Formula> guards;
    c.C = t.constant();
    c.base = fixed;
    for (std::size_t i = 0; i < split.size(); ++i) {
      const auto &[v, k] = split[i];
      guards.push_back(Formula::cong(LinearTerm::var(v), LinearTerm(r[i]), s));
      c.C += k * r[i];
      Rational q(k, s);
      q.canonicalize();
      c.base += RatAffine::var(v, q);
      c.base -= RatAffine(q * Rational(r[i]));
    }
    c.guard = mk_and(std::move(guards));
    out.push_back(std::move(c));
    std::size_t i = 0;
    for (; i < r.size(); ++i) {
      if (++r[i] < s) break;
      r[i] = 0;
    }
    if (i == r.size()) break;
  }
  return out;
}

GuardedAtom bound_case(const SplitCase &sc, const Integer &s, NormalAtom::Form form) {
  GuardedAtom g;
  g.guard = sc.guard;
  g.atom.form = form;
  Integer q = form == NormalAtom::Form::Le ? floor_div(sc.C, s) : ceil_div(sc.C, s);
  g.atom.bound = sc.base + RatAffine(Rational(q));
  return g;
}

} // namespace

Formula NormalAtom::to_formula(const std::string &var) const {
  if (form == Form::Cong) {
    if (modulus == 1) return Formula::truth(true);
    return Formula::cong(LinearTerm::var(var), LinearTerm(residue), modulus);
  }
  Integer L = bound.denominator();
  LinearTerm lhs = LinearTerm::var(var, L);
  LinearTerm rhs = bound.scaled_term(L);
  Rel r = form == Form::Eq ? Rel::Eq : form == Form::Le ? Rel::Le : Rel::Ge;
  return Formula::rel(r, lhs, rhs);
}

std::string NormalAtom::str(const std::string &var) const {
  switch (form) {
  case Form::Eq: return var + " = " + bound.str();
  case Form::Le: return var + " <= " + bound.str();
  case Form::Ge: return var + " >= " + bound.str();
  case Form::Cong: return var + " === " + residue.get_str() + " mod " + modulus.get_str();
  }
  return "";
}

std::vector<GuardedAtom> normalize_atomic(const Atom &atom, const std::string &var) {
  LinearTerm d = atom.diff();
  Integer s0 = d.coeff(var);
  LinearTerm r = d.without(var);
  std::vector<GuardedAtom> out;

  if (atom.rel == Rel::Cong) {
    const Integer &N = atom.modulus;
    Integer s = mod(s0, N);
    if (s == 0) {
      GuardedAtom g;
      g.guard = Formula::cong(r, LinearTerm(0), N);
      if (r.is_constant()) g.guard = Formula::truth(mod(r.constant(), N) == 0);
      if (!g.guard.is_false()) out.push_back(g);
      return out;
    }
    // s x === -r (mod N)
    LinearTerm t = -r;
    LinearTerm reduced;
    for (const auto &[v, k] : t.coeffs()) reduced.set_coeff(v, mod(k, N));
    reduced.set_constant(mod(t.constant(), N));
    for (auto &sc : split_by_residues(reduced, N)) {
      Integer C = mod(sc.C, N);
      Integer g = gcd(s, N);
      if (!divides(g, C)) continue;
      Integer n2 = N / g;
      GuardedAtom ga;
      ga.guard = sc.guard;
      ga.atom.form = NormalAtom::Form::Cong;
      ga.atom.modulus = n2;
      ga.atom.residue = n2 == 1 ? Integer(0) : mod(mod_inverse(s / g, n2) * (C / g), n2);
      out.push_back(ga);
    }
    return out;
  }

  if (s0 == 0) {
    GuardedAtom g;
    g.guard = Formula::atom(atom);
    if (d.is_constant()) {
      const Integer &v = d.constant();
      bool truth = false;
      switch (atom.rel) {
      case Rel::Eq: truth = v == 0; break;
      case Rel::Le: truth = v <= 0; break;
      case Rel::Ge: truth = v >= 0; break;
      case Rel::Lt: truth = v < 0; break;
      case Rel::Gt: truth = v > 0; break;
      default: break;
      }
      g.guard = Formula::truth(truth);
    }
    if (!g.guard.is_false()) out.push_back(g);
    return out;
  }

  if (atom.rel == Rel::Eq) {
    Integer s = abs(s0);
    LinearTerm t = s0 > 0 ? -r : r;
    for (auto &sc : split_by_residues(t, s)) {
      if (!divides(s, sc.C)) continue;
      GuardedAtom g;
      g.guard = sc.guard;
      g.atom.form = NormalAtom::Form::Eq;
      g.atom.bound = sc.base + RatAffine(Rational(sc.C / s));
      out.push_back(g);
    }
    return out;
  }

  // Inequalities: bring to d <= -delta (upper side) or d >= delta.
  bool upper_side = atom.rel == Rel::Le || atom.rel == Rel::Lt;
  int delta = (atom.rel == Rel::Lt || atom.rel == Rel::Gt) ? 1 : 0;
  Integer s = abs(s0);
  LinearTerm t;
  NormalAtom::Form form;
  if (upper_side) {
    // s0 x <= -r - delta
    if (s0 > 0) {
      t = -r - LinearTerm(delta);
      form = NormalAtom::Form::Le;
    } else {
      t = r + LinearTerm(delta);
      form = NormalAtom::Form::Ge;
    }
  } else {
    // s0 x >= -r + delta
    if (s0 > 0) {
      t = -r + LinearTerm(delta);
      form = NormalAtom::Form::Ge;
    } else {
      t = r - LinearTerm(delta);
      form = NormalAtom::Form::Le;
    }
  }
  for (auto &sc : split_by_residues(t, s)) out.push_back(bound_case(sc, s, form));
  return out;
}

std::vector<GuardedAtom> normalize_atomic(const Formula &atom, const std::string &var) {
  return normalize_atomic(atom.atom(), var);
}

Formula reassemble(const std::vector<GuardedAtom> &cases, const std::string &var) {
  std::vector<Formula> parts;
  for (const auto &c : cases) parts.push_back(mk_and({c.guard, c.atom.to_formula(var)}));
  return mk_or(std::move(parts));
}

} // namespace pkit
