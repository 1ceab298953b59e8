#include "pkit/json_io.hpp"

#include "pkit/parser.hpp"

#include <filesystem>

namespace pkit {

namespace {

std::string ratstr(const Rational &q) { return to_string(q); }

Json ints(const std::vector<Integer> &v) {
  Json a = Json::array();
  for (const auto &x : v) {
    if (x.fits_slong_p()) a.push_back(x.get_si());
    else a.push_back(to_string(x));
  }
  return a;
}

Json point(const Point &p) { return Json(p); }

Json checks(const std::vector<AxiomCheck> &cs) {
  Json out = Json::array();
  for (const auto &c : cs) {
    Json j{{"name", c.name}, {"holds", c.holds}, {"sentence", c.sentence}};
    if (c.counterexample) j["counterexample"] = to_json(*c.counterexample);
    out.push_back(j);
  }
  return out;
}

Json require(const Json &j, const char *key) {
  if (!j.contains(key)) throw DomainError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Point point_from_json(const Json &j) {
  if (!j.is_array()) throw DomainError("expected an integer array");
  return j.get<Point>();
}

} // namespace

Json envelope(const std::string &command, const std::string &input, Json result) {
  return Json{{"schema", kSchema}, {"command", command}, {"input", input}, {"result", std::move(result)}};
}

Json to_json(const ModelElement &e) { return e.str(); }

Json to_json(const std::vector<ModelElement> &v) {
  Json a = Json::array();
  for (const auto &e : v) a.push_back(e.str());
  return a;
}

Json to_json(const Assignment &a) {
  Json o = Json::object();
  for (const auto &[k, v] : a) o[k] = v.str();
  return o;
}

Json to_json(const CellDesc &c) {
  Json coords = Json::array();
  for (std::size_t j = 0; j < c.coords.size(); ++j) {
    const auto &co = c.coords[j];
    Json x{{"var", c.vars[j]}, {"type", co.is_interval() ? "interval" : "graph"}};
    if (co.is_interval()) {
      x["lower"] = co.lower ? Json(co.lower->str()) : Json(nullptr);
      x["upper"] = co.upper ? Json(co.upper->str()) : Json(nullptr);
      if (co.modulus != 1) x["congruence"] = {{"modulus", to_string(co.modulus)}, {"residue", to_string(co.residue)}};
      x["unbounded_fibers"] = co.unbounded_fibers;
    } else {
      x["value"] = co.value.str();
    }
    coords.push_back(x);
  }
  return Json{{"signature", c.signature()},
              {"dim", c.dim()},
              {"coords", coords},
              {"param_condition", c.param_condition.str()},
              {"formula", c.formula().str()}};
}

Json to_json(const PartitionReport &r) {
  Json ov = Json::array();
  for (const auto &[i, j] : r.overlapping) ov.push_back({i, j});
  return Json{{"covers", r.covers}, {"disjoint", r.disjoint}, {"overlapping", ov}};
}

Json to_json(const Box &b) {
  Json sides = Json::array();
  for (const auto &s : b.sides) {
    Json x{{"lo", s.lo.str()}, {"hi", s.hi.str()}};
    if (s.modulus != 1) x["congruence"] = {{"modulus", to_string(s.modulus)}, {"residue", to_string(s.residue)}};
    sides.push_back(x);
  }
  Json j{{"sides", sides}, {"margins_infinite", b.margins_infinite()}};
  if (b.anchor) j["anchor"] = to_json(*b.anchor);
  return j;
}

Json to_json(const CBox &b) {
  return Json{{"cell", to_json(b.cell)}, {"free", b.free}, {"box", to_json(b.box)}};
}

Json to_json(const Parallelogram &p) {
  Json strips = Json::array();
  for (const auto &s : p.strips) {
    Json co = Json::array();
    for (const auto &c : s.coeffs) co.push_back(ratstr(c));
    strips.push_back({{"coeffs", co}, {"lower", s.lower.str()}, {"upper", s.upper.str()}});
  }
  Json congs = Json::array();
  for (const auto &c : p.congruences)
    congs.push_back({{"coeffs", ints(c.coeffs)}, {"residue", to_string(c.residue)}, {"modulus", to_string(c.modulus)}});
  Json graph = Json::array();
  for (std::size_t i = 0; i < p.graph.size(); ++i)
    if (p.graph[i]) {
      Json co = Json::array();
      for (const auto &c : p.graph[i]->coeffs) co.push_back(ratstr(c));
      graph.push_back({{"coordinate", i}, {"coeffs", co}, {"offset", p.graph[i]->offset.str()}});
    }
  Json j{{"n", p.n}, {"free", p.free}, {"strips", strips}, {"congruences", congs}, {"graph", graph}};
  if (p.center) {
    j["center"] = to_json(*p.center);
    j["centered"] = p.is_centered();
  }
  return j;
}

Json to_json(const GroupReport &r) {
  Json j{{"ok", r.ok()}, {"checks", checks(r.checks)}};
  j["identity"] = r.identity ? to_json(*r.identity) : Json(nullptr);
  return j;
}

Json to_json(const LocalLinearity &l) {
  auto mat = [](const std::vector<std::vector<Rational>> &m) {
    Json a = Json::array();
    for (const auto &row : m) {
      Json r = Json::array();
      for (const auto &q : row) r.push_back(ratstr(q));
      a.push_back(r);
    }
    return a;
  };
  Json gamma = Json::array();
  for (const auto &g : l.gamma) gamma.push_back(g.str());
  return Json{{"M", mat(l.M)},           {"N", mat(l.N)},
              {"gamma", gamma},          {"box_a", to_json(l.box_a)},
              {"box_b", to_json(l.box_b)}, {"sentence", l.sentence}};
}

Json to_json(const AdditionBox &b) {
  return Json{{"center", to_json(b.center)},
              {"center_inverse", to_json(b.center_inverse)},
              {"box", to_json(b.box)},
              {"shrinks", b.shrinks},
              {"sentence", b.sentence}};
}

Json to_json(const AbelianReport &r) {
  auto opt = [](const std::optional<int> &v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"ok", r.ok()},
              {"subgroup", r.subgroup.str()},
              {"constants", to_json(r.constants)},
              {"addition_box", to_json(r.box)},
              {"abelian", r.abelian},
              {"subgroup_closed", r.subgroup_closed},
              {"contains_box", r.contains_box},
              {"dim_group", opt(r.dim_group)},
              {"dim_subgroup", opt(r.dim_subgroup)}};
}

Json to_json(const IntBox &b) { return Json{{"lo", b.lo}, {"hi", b.hi}}; }

Json to_json(const SeparationReport &r) {
  Json j{{"ok", r.ok()},
         {"separated", r.separated},
         {"meets_box_at_zero", r.meets_box_at_zero},
         {"pairs_checked", r.points_checked}};
  if (r.witness) j["witness"] = {{"lambda", point(r.witness->first)}, {"other", point(r.witness->second)}};
  return j;
}

Json to_json(const LadderReport &r, const FiniteGroup &g) {
  Json levels = Json::array();
  for (const auto &lv : r.levels)
    levels.push_back({{"n", lv.n},
                      {"points", lv.points},
                      {"image", lv.image},
                      {"kernel", lv.kernel},
                      {"conflicts", lv.conflicts}});
  Json lattice = Json::array();
  for (const auto &row : r.lattice) lattice.push_back(ints(row));
  return Json{{"levels", levels},
              {"stable_level", r.stable_level ? Json(*r.stable_level) : Json(nullptr)},
              {"lattice", lattice},
              {"g0_size", r.g0.size()},
              {"group_size", g.size()},
              {"index", r.index},
              {"well_defined", r.well_defined},
              {"images_monotone", r.images_monotone},
              {"g0_subgroup", r.g0_subgroup},
              {"lattice_meets_box_at_zero", r.lattice_meets_box_at_zero},
              {"f1_generic", r.f1_generic},
              {"trace", r.trace}};
}

Json to_json(const Quotient &q, std::size_t max_representatives) {
  Json hnf = Json::array();
  for (const auto &row : q.hnf) hnf.push_back(ints(row));
  Json reps = Json::array();
  for (std::size_t i = 0; i < q.representatives.size() && i < max_representatives; ++i)
    reps.push_back(point(q.representatives[i]));
  return Json{{"hnf", hnf},
              {"order", to_string(q.order)},
              {"invariant_factors", ints(q.invariant_factors)},
              {"representatives", reps},
              {"representatives_total", q.representatives.size()}};
}

Json to_json(const IsomorphismReport &r) {
  return Json{{"ok", r.ok()},
              {"sizes_match", r.sizes_match},
              {"well_defined", r.well_defined},
              {"homomorphism", r.homomorphism},
              {"bijective", r.bijective},
              {"detail", r.detail}};
}

std::vector<ModelElement> elements_from_json(const Json &j) {
  std::vector<ModelElement> out;
  auto one = [](const Json &x) {
    if (x.is_number_integer()) return ModelElement(x.get<long>());
    if (x.is_string()) return parse_element(x.get<std::string>());
    throw DomainError("model element must be an integer or a string");
  };
  if (j.is_array())
    for (const auto &x : j) out.push_back(one(x));
  else
    out.push_back(one(j));
  return out;
}

GroupFile group_from_json(const Json &j) {
  GroupFile f;
  DefinableGroup &g = f.group;
  g.name = j.value("name", std::string("group"));
  g.n = j.value("n", std::size_t{1});
  g.carrier = parse(require(j, "carrier").get<std::string>());
  g.op = parse(require(j, "op").get<std::string>());
  if (j.contains("params"))
    for (const auto &[k, v] : j.at("params").items()) g.params[k] = elements_from_json(v).at(0);
  if (j.contains("identity")) g.identity = elements_from_json(j.at("identity"));
  if (j.contains("bound")) g.bound = elements_from_json(j.at("bound")).at(0);
  if (j.contains("points")) {
    const auto &p = j.at("points");
    if (p.contains("a")) f.a = elements_from_json(p.at("a"));
    if (p.contains("b")) f.b = elements_from_json(p.at("b"));
  }
  for (const auto *pt : {&f.a, &f.b})
    if (!pt->empty() && pt->size() != g.n) throw DomainError("point dimension differs from the group's");
  return f;
}

GroupFile load_group(const std::string &path) {
  try {
    return group_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception &e) {
    throw SyntaxError(path + ": " + e.what(), 0, 0);
  }
}

LatticeFile lattice_from_json(const Json &j, const std::string &base_dir) {
  LatticeFile f;
  const Json &box = require(j, "box");
  f.lattice.box.lo = point_from_json(require(box, "lo"));
  f.lattice.box.hi = point_from_json(require(box, "hi"));
  if (f.lattice.box.lo.size() != f.lattice.box.hi.size()) throw DomainError("box lo/hi sizes differ");
  if (j.contains("generators"))
    for (const auto &g : j.at("generators")) f.lattice.generators.push_back(point_from_json(g));
  f.lattice.depth = j.value("depth", 3);
  f.budget = j.value("budget", 16L);
  f.stress_trials = j.value("stress_trials", std::size_t{10000});
  if (j.contains("group")) {
    const Json &g = j.at("group");
    if (g.is_string()) f.group = load_group((std::filesystem::path(base_dir) / g.get<std::string>()).string());
    else f.group = group_from_json(g);
    f.center = point_from_json(require(j, "center"));
  }
  return f;
}

LatticeFile load_lattice(const std::string &path) {
  try {
    return lattice_from_json(Json::parse(read_file(path)),
                             std::filesystem::path(path).parent_path().string());
  } catch (const Json::exception &e) {
    throw SyntaxError(path + ": " + e.what(), 0, 0);
  }
}

} // namespace pkit
