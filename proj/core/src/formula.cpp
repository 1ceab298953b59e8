#include "pkit/formula.hpp"

#include <algorithm>

namespace pkit {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_int(const Integer &v) {
  return std::hash<std::string>{}(v.get_str(16));
}

} // namespace

// ---- LinearTerm ------------------------------------------------------------

LinearTerm LinearTerm::var(const std::string &name, const Integer &coeff) {
  LinearTerm t;
  if (coeff != 0) t.coeffs_.push_back({name, coeff});
  return t;
}

Integer LinearTerm::coeff(const std::string &var) const {
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), var,
                             [](const Entry &e, const std::string &v) { return e.first < v; });
  if (it != coeffs_.end() && it->first == var) return it->second;
  return 0;
}

void LinearTerm::set_coeff(const std::string &var, const Integer &c) {
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), var,
                             [](const Entry &e, const std::string &v) { return e.first < v; });
  if (it != coeffs_.end() && it->first == var) {
    if (c == 0) coeffs_.erase(it);
    else it->second = c;
  } else if (c != 0) {
    coeffs_.insert(it, {var, c});
  }
}

std::set<std::string> LinearTerm::vars() const {
  std::set<std::string> out;
  for (const auto &[v, c] : coeffs_) out.insert(v);
  return out;
}

LinearTerm &LinearTerm::operator+=(const LinearTerm &o) {
  std::vector<Entry> merged;
  merged.reserve(coeffs_.size() + o.coeffs_.size());
  auto a = coeffs_.cbegin();
  auto b = o.coeffs_.cbegin();
  while (a != coeffs_.cend() || b != o.coeffs_.cend()) {
    if (b == o.coeffs_.cend() || (a != coeffs_.cend() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == coeffs_.cend() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      Integer c = a->second + b->second;
      if (c != 0) merged.push_back({a->first, c});
      ++a;
      ++b;
    }
  }
  coeffs_ = std::move(merged);
  const_ += o.const_;
  return *this;
}

LinearTerm &LinearTerm::operator-=(const LinearTerm &o) { return *this += -o; }

LinearTerm &LinearTerm::operator*=(const Integer &k) {
  if (k == 0) {
    coeffs_.clear();
    const_ = 0;
    return *this;
  }
  for (auto &e : coeffs_) e.second *= k;
  const_ *= k;
  return *this;
}

LinearTerm LinearTerm::operator-() const {
  LinearTerm t = *this;
  for (auto &e : t.coeffs_) e.second = -e.second;
  t.const_ = -t.const_;
  return t;
}

LinearTerm LinearTerm::without(const std::string &var) const {
  LinearTerm t = *this;
  t.set_coeff(var, 0);
  return t;
}

LinearTerm LinearTerm::substitute(const std::string &var, const LinearTerm &by) const {
  Integer c = coeff(var);
  if (c == 0) return *this;
  return without(var) + by * c;
}

LinearTerm LinearTerm::rename(const std::string &from, const std::string &to) const {
  if (from == to) return *this;
  return substitute(from, LinearTerm::var(to));
}

Integer LinearTerm::content() const {
  Integer g = 0;
  for (const auto &e : coeffs_) g = gcd(g, e.second);
  return g;
}

ModelElement LinearTerm::eval(const Assignment &env) const {
  ModelElement acc(const_);
  for (const auto &[v, c] : coeffs_) {
    auto it = env.find(v);
    if (it == env.end()) throw DomainError("unbound variable '" + v + "'");
    acc += it->second * c;
  }
  return acc;
}

std::size_t LinearTerm::hash() const {
  std::size_t h = hash_int(const_);
  for (const auto &[v, c] : coeffs_)
    h = mix(mix(h, std::hash<std::string>{}(v)), hash_int(c));
  return h;
}

std::string LinearTerm::str() const {
  std::string out;
  for (const auto &[v, c] : coeffs_) {
    Integer a = abs(c);
    std::string body = a == 1 ? v : a.get_str() + "*" + v;
    if (out.empty()) out = c < 0 ? "-" + body : body;
    else out += (c < 0 ? " - " : " + ") + body;
  }
  if (out.empty()) return const_.get_str();
  if (const_ != 0) out += (const_ < 0 ? " - " : " + ") + Integer(abs(const_)).get_str();
  return out;
}

const char *rel_symbol(Rel r) {
  switch (r) {
  case Rel::Eq: return "==";
  case Rel::Le: return "<=";
  case Rel::Ge: return ">=";
  case Rel::Lt: return "<";
  case Rel::Gt: return ">";
  case Rel::Cong: return "===";
  }
  return "?";
}

// ---- Formula nodes ---------------------------------------------------------

struct Formula::Node {
  Kind kind = Kind::True;
  Atom atom;
  std::vector<Formula> kids;
  std::string var;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

std::shared_ptr<Formula::Node> make_node(Kind k) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  return n;
}

void finish(Formula::Node &n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911u;
  n.size = 1;
  if (n.kind == Kind::Atom) {
    h = mix(h, static_cast<std::size_t>(n.atom.rel));
    h = mix(h, n.atom.lhs.hash());
    h = mix(h, n.atom.rhs.hash());
    h = mix(h, hash_int(n.atom.modulus));
  }
  for (const auto &k : n.kids) {
    h = mix(h, k.hash());
    n.size += k.size();
  }
  if (!n.var.empty()) h = mix(h, std::hash<std::string>{}(n.var));
  n.hash = h;
}

} // namespace

Formula::Formula() : Formula(truth(true)) {}

Formula Formula::truth(bool v) {
  static const std::shared_ptr<const Node> t = [] {
    auto n = make_node(Kind::True);
    finish(*n);
    return n;
  }();
  static const std::shared_ptr<const Node> f = [] {
    auto n = make_node(Kind::False);
    finish(*n);
    return n;
  }();
  return Formula(v ? t : f);
}

Formula Formula::atom(Atom a) {
  if (a.rel == Rel::Cong) {
    if (a.modulus < 1) throw DomainError("congruence modulus must be positive");
    if (a.modulus == 1) return truth(true);
  }
  auto n = make_node(Kind::Atom);
  n->atom = std::move(a);
  finish(*n);
  return Formula(std::move(n));
}

Formula Formula::rel(Rel r, LinearTerm lhs, LinearTerm rhs) {
  if (r == Rel::Cong) throw DomainError("use Formula::cong for congruences");
  Atom a;
  a.rel = r;
  a.lhs = std::move(lhs);
  a.rhs = std::move(rhs);
  return atom(std::move(a));
}

Formula Formula::cong(const LinearTerm &t1, const LinearTerm &t2, const Integer &n) {
  if (n < 1) throw DomainError("congruence modulus must be positive");
  LinearTerm d = t1 - t2;
  Atom a;
  a.rel = Rel::Cong;
  a.modulus = n;
  a.rhs = LinearTerm(mod(-d.constant(), n));
  d.set_constant(0);
  a.lhs = d;
  return atom(std::move(a));
}

Formula Formula::conj(std::vector<Formula> parts) {
  auto n = make_node(Kind::And);
  n->kids = std::move(parts);
  finish(*n);
  return Formula(std::move(n));
}

Formula Formula::disj(std::vector<Formula> parts) {
  auto n = make_node(Kind::Or);
  n->kids = std::move(parts);
  finish(*n);
  return Formula(std::move(n));
}

Formula Formula::negate(Formula f) {
  auto n = make_node(Kind::Not);
  n->kids.push_back(std::move(f));
  finish(*n);
  return Formula(std::move(n));
}

Formula Formula::exists(const std::string &var, Formula body) {
  auto n = make_node(Kind::Exists);
  n->var = var;
  n->kids.push_back(std::move(body));
  finish(*n);
  return Formula(std::move(n));
}

Formula Formula::forall(const std::string &var, Formula body) {
  auto n = make_node(Kind::Forall);
  n->var = var;
  n->kids.push_back(std::move(body));
  finish(*n);
  return Formula(std::move(n));
}

Kind Formula::kind() const { return node_->kind; }

const Atom &Formula::atom() const {
  if (node_->kind != Kind::Atom) throw DomainError("not an atom");
  return node_->atom;
}

const std::vector<Formula> &Formula::children() const { return node_->kids; }

const Formula &Formula::child() const {
  if (node_->kids.size() != 1) throw DomainError("node has no single child");
  return node_->kids[0];
}

const std::string &Formula::bound_var() const { return node_->var; }

namespace {

void collect_free(const Formula &f, std::set<std::string> &bound,
                  std::set<std::string> &out) {
  switch (f.kind()) {
  case Kind::True:
  case Kind::False: return;
  case Kind::Atom:
    for (const auto &v : f.atom().lhs.vars())
      if (!bound.count(v)) out.insert(v);
    for (const auto &v : f.atom().rhs.vars())
      if (!bound.count(v)) out.insert(v);
    return;
  case Kind::Exists:
  case Kind::Forall: {
    bool fresh = bound.insert(f.bound_var()).second;
    collect_free(f.child(), bound, out);
    if (fresh) bound.erase(f.bound_var());
    return;
  }
  default:
    for (const auto &k : f.children()) collect_free(k, bound, out);
  }
}

} // namespace

std::set<std::string> Formula::free_vars() const {
  std::set<std::string> bound, out;
  collect_free(*this, bound, out);
  return out;
}

bool Formula::is_quantifier_free() const {
  switch (kind()) {
  case Kind::Exists:
  case Kind::Forall: return false;
  default:
    for (const auto &k : children())
      if (!k.is_quantifier_free()) return false;
    return true;
  }
}

std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula &a, const Formula &b) {
  if (a.node_ == b.node_) return true;
  const auto &x = *a.node_;
  const auto &y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size || x.var != y.var)
    return false;
  if (x.kind == Kind::Atom && !(x.atom == y.atom)) return false;
  if (x.kids.size() != y.kids.size()) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (x.kids[i] != y.kids[i]) return false;
  return true;
}

// ---- printing ----------------------------------------------------------------

namespace {

std::string print(const Formula &f);

bool needs_parens_in_junction(const Formula &k) {
  switch (k.kind()) {
  case Kind::True:
  case Kind::False:
  case Kind::Atom: return false;
  case Kind::Not: return !k.child().is_atom() && k.child().kind() != Kind::True &&
                         k.child().kind() != Kind::False;
  default: return true;
  }
}

std::string print_junction(const Formula &f, const char *op) {
  if (f.children().empty()) return f.kind() == Kind::And ? "(true)" : "(false)";
  std::string out;
  for (std::size_t i = 0; i < f.children().size(); ++i) {
    const auto &k = f.children()[i];
    if (i) out += op;
    out += needs_parens_in_junction(k) ? "(" + print(k) + ")" : print(k);
  }
  if (f.children().size() == 1) out = "(" + out + ")";
  return out;
}

std::string print(const Formula &f) {
  switch (f.kind()) {
  case Kind::True: return "true";
  case Kind::False: return "false";
  case Kind::Atom: {
    const Atom &a = f.atom();
    if (a.rel == Rel::Cong)
      return a.lhs.str() + " === " + a.rhs.str() + " mod " + a.modulus.get_str();
    return a.lhs.str() + " " + rel_symbol(a.rel) + " " + a.rhs.str();
  }
  case Kind::And: return print_junction(f, " and ");
  case Kind::Or: return print_junction(f, " or ");
  case Kind::Not: {
    const Formula &c = f.child();
    if (c.kind() == Kind::And || c.kind() == Kind::Or) return "not (" + print(c) + ")";
    return "not " + print(c);
  }
  case Kind::Exists: return "exists " + f.bound_var() + ". " + print(f.child());
  case Kind::Forall: return "forall " + f.bound_var() + ". " + print(f.child());
  }
  return "";
}

} // namespace

std::string Formula::str() const { return print(*this); }

// ---- simplifying constructors ------------------------------------------------

Formula mk_and(std::vector<Formula> parts) {
  std::vector<Formula> out;
  for (auto &p : parts) {
    if (p.is_true()) continue;
    if (p.is_false()) return Formula::truth(false);
    if (p.kind() == Kind::And) {
      for (const auto &k : p.children()) out.push_back(k);
    } else {
      out.push_back(std::move(p));
    }
  }
  if (out.empty()) return Formula::truth(true);
  if (out.size() == 1) return out[0];
  return Formula::conj(std::move(out));
}

Formula mk_or(std::vector<Formula> parts) {
  std::vector<Formula> out;
  for (auto &p : parts) {
    if (p.is_false()) continue;
    if (p.is_true()) return Formula::truth(true);
    if (p.kind() == Kind::Or) {
      for (const auto &k : p.children()) out.push_back(k);
    } else {
      out.push_back(std::move(p));
    }
  }
  if (out.empty()) return Formula::truth(false);
  if (out.size() == 1) return out[0];
  return Formula::disj(std::move(out));
}

Formula mk_not(const Formula &f) {
  if (f.is_true()) return Formula::truth(false);
  if (f.is_false()) return Formula::truth(true);
  if (f.kind() == Kind::Not) return f.child();
  return Formula::negate(f);
}

Formula mk_implies(const Formula &a, const Formula &b) { return mk_or({mk_not(a), b}); }

Formula mk_iff(const Formula &a, const Formula &b) {
  return mk_and({mk_implies(a, b), mk_implies(b, a)});
}

Formula mk_exists(const std::vector<std::string> &vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    if (body.is_true() || body.is_false()) break;
    body = Formula::exists(*it, std::move(body));
  }
  return body;
}

Formula mk_forall(const std::vector<std::string> &vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    if (body.is_true() || body.is_false()) break;
    body = Formula::forall(*it, std::move(body));
  }
  return body;
}

Formula closure(const Formula &f, const std::set<std::string> &keep) {
  std::vector<std::string> vars;
  for (const auto &v : f.free_vars())
    if (!keep.count(v)) vars.push_back(v);
  return mk_forall(vars, f);
}

std::string fresh_name(const std::string &base, const std::set<std::string> &taken) {
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

namespace {

Formula rebuild(const Formula &f, std::vector<Formula> kids) {
  switch (f.kind()) {
  case Kind::And: return mk_and(std::move(kids));
  case Kind::Or: return mk_or(std::move(kids));
  case Kind::Not: return mk_not(kids[0]);
  case Kind::Exists: return Formula::exists(f.bound_var(), kids[0]);
  case Kind::Forall: return Formula::forall(f.bound_var(), kids[0]);
  default: return f;
  }
}

Formula subst_atom(const Atom &a, const std::string &var, const LinearTerm &by) {
  if (!a.lhs.has(var) && !a.rhs.has(var)) return Formula::atom(a);
  if (a.rel == Rel::Cong)
    return Formula::cong(a.lhs.substitute(var, by), a.rhs.substitute(var, by), a.modulus);
  return Formula::rel(a.rel, a.lhs.substitute(var, by), a.rhs.substitute(var, by));
}

} // namespace

Formula substitute(const Formula &f, const std::string &var, const LinearTerm &by) {
  switch (f.kind()) {
  case Kind::True:
  case Kind::False: return f;
  case Kind::Atom: return subst_atom(f.atom(), var, by);
  case Kind::Exists:
  case Kind::Forall: {
    const std::string &b = f.bound_var();
    if (b == var) return f;
    if (!f.child().free_vars().count(var)) return f;
    auto by_vars = by.vars();
    if (by_vars.count(b)) {
      std::set<std::string> taken = by_vars;
      for (const auto &v : f.child().free_vars()) taken.insert(v);
      taken.insert(var);
      std::string nb = fresh_name(b, taken);
      Formula body = substitute(rename_free(f.child(), b, nb), var, by);
      return f.kind() == Kind::Exists ? Formula::exists(nb, body) : Formula::forall(nb, body);
    }
    Formula body = substitute(f.child(), var, by);
    return f.kind() == Kind::Exists ? Formula::exists(b, body) : Formula::forall(b, body);
  }
  default: {
    std::vector<Formula> kids;
    for (const auto &k : f.children()) kids.push_back(substitute(k, var, by));
    return rebuild(f, std::move(kids));
  }
  }
}

Formula rename_free(const Formula &f, const std::string &from, const std::string &to) {
  if (from == to) return f;
  return substitute(f, from, LinearTerm::var(to));
}

Formula map_atoms(const Formula &f, const std::function<Formula(const Atom &)> &fn) {
  switch (f.kind()) {
  case Kind::True:
  case Kind::False: return f;
  case Kind::Atom: return fn(f.atom());
  default: {
    std::vector<Formula> kids;
    for (const auto &k : f.children()) kids.push_back(map_atoms(k, fn));
    return rebuild(f, std::move(kids));
  }
  }
}

} // namespace pkit
