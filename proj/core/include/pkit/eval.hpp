#pragma once

#include "pkit/formula.hpp"
#include "pkit/model.hpp"

namespace pkit {

enum class ModelKind { Standard, Nonstandard };

bool eval_atom(const Atom &a, const Assignment &env);

/// Truth of a quantifier-free formula. In the standard model every bound
/// value must be finite.
bool eval(const Formula &f, const Assignment &env,
          ModelKind model = ModelKind::Nonstandard);

/// Approximate evaluation over standard Z where quantifiers range over
/// [-window, window] only. For test oracles; not a decision procedure.
bool eval_windowed(const Formula &f, const Assignment &env, long window);

} // namespace pkit
