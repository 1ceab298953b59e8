#include "pkit/eval.hpp"

#include <optional>

namespace pkit {

bool eval_atom(const Atom &a, const Assignment &env) {
  ModelElement d = a.lhs.eval(env) - a.rhs.eval(env);
  switch (a.rel) {
  case Rel::Eq: return d.is_zero();
  case Rel::Le: return d.sign() <= 0;
  case Rel::Ge: return d.sign() >= 0;
  case Rel::Lt: return d.sign() < 0;
  case Rel::Gt: return d.sign() > 0;
  case Rel::Cong: return d.residue(a.modulus) == 0;
  }
  return false;
}

namespace {

bool eval_qf(const Formula &f, const Assignment &env) {
  switch (f.kind()) {
  case Kind::True: return true;
  case Kind::False: return false;
  case Kind::Atom: return eval_atom(f.atom(), env);
  case Kind::And:
    for (const auto &k : f.children())
      if (!eval_qf(k, env)) return false;
    return true;
  case Kind::Or:
    for (const auto &k : f.children())
      if (eval_qf(k, env)) return true;
    return false;
  case Kind::Not: return !eval_qf(f.child(), env);
  case Kind::Exists:
  case Kind::Forall:
    throw DomainError("eval: formula is not quantifier-free; use the qe module");
  }
  return false;
}

bool eval_win(const Formula &f, Assignment &env, long w) {
  switch (f.kind()) {
  case Kind::And:
    for (const auto &k : f.children())
      if (!eval_win(k, env, w)) return false;
    return true;
  case Kind::Or:
    for (const auto &k : f.children())
      if (eval_win(k, env, w)) return true;
    return false;
  case Kind::Not: return !eval_win(f.child(), env, w);
  case Kind::Exists:
  case Kind::Forall: {
    bool ex = f.kind() == Kind::Exists;
    const std::string &v = f.bound_var();
    auto saved = env.find(v) != env.end() ? std::optional<ModelElement>(env[v]) : std::nullopt;
    bool result = !ex;
    for (long x = -w; x <= w; ++x) {
      env[v] = ModelElement(x);
      if (eval_win(f.child(), env, w) == ex) {
        result = ex;
        break;
      }
    }
    if (saved) env[v] = *saved;
    else env.erase(v);
    return result;
  }
  default: return eval_qf(f, env);
  }
}

} // namespace

bool eval(const Formula &f, const Assignment &env, ModelKind model) {
  if (model == ModelKind::Standard) {
    for (const auto &[k, v] : env)
      if (!v.is_finite())
        throw DomainError("standard model: value of '" + k + "' is infinite");
  }
  return eval_qf(f, env);
}

bool eval_windowed(const Formula &f, const Assignment &env, long window) {
  Assignment e = env;
  return eval_win(f, e, window);
}

} // namespace pkit
