#pragma once

// Definable groups used as fixtures across the test binaries.

#include "pkit/group.hpp"
#include "pkit/parser.hpp"

#include <string>
#include <vector>

namespace fixtures {

using pkit::DefinableGroup;

/// [0, m) with x + y reduced by `wrap` once the sum reaches m.
inline DefinableGroup cyclic(long m, long wrap) {
  DefinableGroup g;
  g.name = "Z" + std::to_string(m);
  std::string M = std::to_string(m), W = std::to_string(wrap);
  g.carrier = pkit::parse("0 <= x and x < " + M);
  g.op = pkit::parse("(z == x + y and x + y < " + M + ") or (z == x + y - " + W + " and x + y >= " + M + ")");
  return g;
}

inline DefinableGroup cyclic(long m) { return cyclic(m, m); }

/// Addition modulo an infinite H on [0, H).
inline DefinableGroup mod_h() {
  DefinableGroup g;
  g.name = "modH";
  g.carrier = pkit::parse("0 <= x and x < H");
  g.op = pkit::parse("(z == x + y and x + y < H) or (z == x + y - H and x + y >= H)");
  g.params = {{"H", pkit::parse_element("inf")}};
  return g;
}

/// x o y = x + y - c on the shifted carrier [c, c + H): identity c.
inline DefinableGroup twisted() {
  DefinableGroup g;
  g.name = "twisted";
  g.carrier = pkit::parse("c <= x and x < c + H");
  g.op = pkit::parse("(z == x + y - c and x + y - c < c + H) or (z == x + y - c - H and x + y - c >= c + H)");
  g.params = {{"H", pkit::parse_element("inf")}, {"c", pkit::parse_element("5")}};
  return g;
}

/// Z12 with one corrupted entry 1 * 1 = 3.
inline DefinableGroup corrupted() {
  DefinableGroup g = cyclic(12, 12);
  g.name = "corrupted";
  g.op = pkit::parse("(x == 1 and y == 1 and z == 3) or (not (x == 1 and y == 1) and "
                     "((z == x + y and x + y < 12) or (z == x + y - 12 and x + y >= 12)))");
  return g;
}

/// Z_m1 x ... x Z_mk with coordinatewise addition.
inline DefinableGroup product(const std::vector<long> &ms) {
  DefinableGroup g;
  g.n = ms.size();
  g.name = "Z";
  auto xs = g.xs(), ys = g.ys(), zs = g.zs();
  std::string car, op;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    std::string M = std::to_string(ms[i]);
    std::string s = xs[i] + " + " + ys[i];
    g.name += (i ? "x" : "") + M;
    car += (i ? " and " : "") + ("0 <= " + xs[i] + " and " + xs[i] + " < " + M);
    op += (i ? " and " : "") + ("((" + zs[i] + " == " + s + " and " + s + " < " + M + ") or (" + zs[i] +
                                " == " + s + " - " + M + " and " + s + " >= " + M + "))");
  }
  g.carrier = pkit::parse(car);
  g.op = pkit::parse(op);
  return g;
}

} // namespace fixtures
