#include "pkit/rat_affine.hpp"

#include <algorithm>

namespace pkit {

namespace {
auto by_name = [](const RatAffine::Entry &e, const std::string &v) { return e.first < v; };
}

RatAffine::RatAffine(const LinearTerm &t) : const_(t.constant()) {
  for (const auto &[v, c] : t.coeffs()) coeffs_.push_back({v, Rational(c)});
}

RatAffine RatAffine::var(const std::string &name, const Rational &coeff) {
  RatAffine r;
  r.set_coeff(name, coeff);
  return r;
}

Rational RatAffine::coeff(const std::string &v) const {
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), v, by_name);
  if (it != coeffs_.end() && it->first == v) return it->second;
  return 0;
}

void RatAffine::set_coeff(const std::string &v, const Rational &c) {
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), v, by_name);
  if (it != coeffs_.end() && it->first == v) {
    if (c == 0) coeffs_.erase(it);
    else it->second = c;
  } else if (c != 0) {
    coeffs_.insert(it, {v, c});
  }
}

std::set<std::string> RatAffine::vars() const {
  std::set<std::string> out;
  for (const auto &e : coeffs_) out.insert(e.first);
  return out;
}

RatAffine &RatAffine::operator+=(const RatAffine &o) {
  for (const auto &[v, c] : o.coeffs_) set_coeff(v, coeff(v) + c);
  const_ += o.const_;
  return *this;
}

RatAffine &RatAffine::operator-=(const RatAffine &o) { return *this += -o; }

RatAffine &RatAffine::operator*=(const Rational &k) {
  if (k == 0) {
    coeffs_.clear();
    const_ = 0;
    return *this;
  }
  for (auto &e : coeffs_) e.second *= k;
  const_ *= k;
  return *this;
}

RatAffine RatAffine::operator-() const {
  RatAffine r = *this;
  return r *= Rational(-1);
}

RatAffine RatAffine::substitute(const std::string &v, const RatAffine &by) const {
  Rational c = coeff(v);
  if (c == 0) return *this;
  return without(v) + by * c;
}

RatAffine RatAffine::without(const std::string &v) const {
  RatAffine r = *this;
  r.set_coeff(v, 0);
  return r;
}

Integer RatAffine::denominator() const {
  Integer l = const_.get_den();
  for (const auto &e : coeffs_) l = lcm(l, e.second.get_den());
  return l;
}

LinearTerm RatAffine::scaled_term(const Integer &k) const {
  LinearTerm t;
  for (const auto &[v, c] : coeffs_) {
    Rational x = c * Rational(k);
    if (x.get_den() != 1) throw DomainError("scaled_term: denominator not cleared");
    t.set_coeff(v, x.get_num());
  }
  Rational x = const_ * Rational(k);
  if (x.get_den() != 1) throw DomainError("scaled_term: denominator not cleared");
  t.set_constant(x.get_num());
  return t;
}

ScaledElement RatAffine::eval(const Assignment &env) const {
  ScaledElement acc(std::vector<Rational>{}, const_);
  for (const auto &[v, c] : coeffs_) {
    auto it = env.find(v);
    if (it == env.end()) throw DomainError("unbound variable '" + v + "'");
    acc += ScaledElement(it->second) * c;
  }
  return acc;
}

ModelElement RatAffine::eval_element(const Assignment &env) const { return eval(env).to_model(); }

std::string RatAffine::str() const {
  std::string out;
  for (const auto &[v, c] : coeffs_) {
    Rational a = abs(c);
    std::string body = a == 1 ? v : a.get_str() + "*" + v;
    if (out.empty()) out = c < 0 ? "-" + body : body;
    else out += (c < 0 ? " - " : " + ") + body;
  }
  if (out.empty()) return const_.get_str();
  if (const_ != 0) out += (const_ < 0 ? " - " : " + ") + Rational(abs(const_)).get_str();
  return out;
}

LinearFunction LinearFunction::from_affine(const RatAffine &f, const std::vector<std::string> &inputs,
                                           const std::vector<std::pair<Integer, Integer>> &classes) {
  LinearFunction lf;
  lf.inputs = inputs;
  RatAffine rest = f;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Rational q = f.coeff(inputs[i]);
    Integer k = 1, c = 0;
    if (i < classes.size()) {
      k = classes[i].first;
      c = classes[i].second;
    }
    if (!divides(q.get_den(), k)) {
      // Residue information too coarse: fall back to the denominator itself
      // with residue 0 only when the caller gave no class.
      if (i < classes.size())
        throw DomainError("from_affine: coefficient denominator does not divide modulus");
      k = q.get_den();
      c = 0;
    }
    Rational sk = q * Rational(k);
    lf.s.push_back(sk.get_num());
    lf.k.push_back(k);
    lf.c.push_back(mod(c, k));
    rest = rest.without(inputs[i]);
    rest += RatAffine(q * Rational(mod(c, k)));
  }
  lf.gamma = rest;
  return lf;
}

RatAffine LinearFunction::as_affine() const {
  RatAffine r = gamma;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Rational q(s[i], k[i]);
    q.canonicalize();
    r += RatAffine::var(inputs[i], q);
    r -= RatAffine(q * Rational(c[i]));
  }
  return r;
}

Formula LinearFunction::domain() const {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (k[i] > 1) parts.push_back(Formula::cong(LinearTerm::var(inputs[i]), LinearTerm(c[i]), k[i]));
  return mk_and(std::move(parts));
}

bool LinearFunction::in_domain(const std::vector<ModelElement> &x) const {
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (x.at(i).residue(k[i]) != c[i]) return false;
  return true;
}

ModelElement LinearFunction::eval(const std::vector<ModelElement> &x, const Assignment &params) const {
  if (!in_domain(x)) throw DomainError("LinearFunction: input outside its congruence class");
  Assignment env = params;
  for (std::size_t i = 0; i < inputs.size(); ++i) env[inputs[i]] = x[i];
  return as_affine().eval_element(env);
}

std::string LinearFunction::str() const {
  std::string out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (s[i] == 0) continue;
    std::string arg = c[i] == 0 ? inputs[i] : "(" + inputs[i] + " - " + c[i].get_str() + ")";
    std::string coef = s[i] == 1 ? "" : s[i] == -1 ? "-" : s[i].get_str() + "*";
    std::string term = coef + arg + (k[i] == 1 ? "" : "/" + k[i].get_str());
    out += out.empty() ? term : " + " + term;
  }
  if (!gamma.coeffs().empty() || gamma.constant() != 0 || out.empty())
    out += out.empty() ? gamma.str() : " + " + gamma.str();
  return out;
}

std::vector<ModelElement> AffineMap::apply(const std::vector<ModelElement> &x,
                                           const Assignment &params) const {
  std::vector<ModelElement> out;
  std::size_t m = cols();
  for (std::size_t i = 0; i < rows(); ++i) {
    ScaledElement acc = gamma[i].eval(params);
    for (std::size_t j = 0; j < m; ++j) {
      if (A[i][j] == 0) continue;
      if (!moduli.empty() && x[j].residue(moduli[i * m + j]) != c[i * m + j])
        throw DomainError("AffineMap: input outside its congruence class");
      acc += ScaledElement(x[j] - ModelElement(c[i * m + j])) * A[i][j];
    }
    out.push_back(acc.to_model());
  }
  return out;
}

std::vector<ModelElement> AffineMap::gamma_values(const Assignment &params) const {
  std::vector<ModelElement> out;
  for (const auto &g : gamma) out.push_back(g.eval_element(params));
  return out;
}

bool AffineMap::is_identity() const {
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (A[i][j] != (i == j ? 1 : 0)) return false;
  return rows() == cols();
}

AffineMap matrix_representation(const std::vector<LinearFunction> &fs) {
  AffineMap m;
  if (fs.empty()) return m;
  std::size_t arity = fs[0].inputs.size();
  for (const auto &f : fs) {
    if (f.inputs.size() != arity)
      throw DomainError("matrix_representation: functions differ in arity");
    std::vector<Rational> row;
    for (std::size_t j = 0; j < arity; ++j) {
      Rational q(f.s[j], f.k[j]);
      q.canonicalize();
      row.push_back(q);
      m.c.push_back(f.c[j]);
      m.moduli.push_back(f.k[j]);
    }
    m.A.push_back(std::move(row));
    m.gamma.push_back(f.gamma);
  }
  return m;
}

} // namespace pkit
