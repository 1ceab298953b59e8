#pragma once

// JSON reports (schema "pkit/1") and the .group / .lattice input formats.

#include "pkit/cells.hpp"
#include "pkit/geometry.hpp"
#include "pkit/group.hpp"
#include "pkit/lattice.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace pkit {

using Json = nlohmann::ordered_json;

inline constexpr const char *kSchema = "pkit/1";

/// {"schema": "pkit/1", "command": ..., "input": ..., "result": ...}
Json envelope(const std::string &command, const std::string &input, Json result);

Json to_json(const ModelElement &e);
Json to_json(const std::vector<ModelElement> &v);
Json to_json(const Assignment &a);
Json to_json(const CellDesc &c);
Json to_json(const PartitionReport &r);
Json to_json(const Box &b);
Json to_json(const CBox &b);
Json to_json(const Parallelogram &p);
Json to_json(const GroupReport &r);
Json to_json(const LocalLinearity &l);
Json to_json(const AdditionBox &b);
Json to_json(const AbelianReport &r);
Json to_json(const IntBox &b);
Json to_json(const SeparationReport &r);
Json to_json(const LadderReport &r, const FiniteGroup &g);
Json to_json(const Quotient &q, std::size_t max_representatives = 64);
Json to_json(const IsomorphismReport &r);

std::vector<ModelElement> elements_from_json(const Json &j);

/// A .group file: carrier, op and params as in .pres syntax, optional
/// identity, optional "points" {"a": [...], "b": [...]}.
struct GroupFile {
  DefinableGroup group;
  std::vector<ModelElement> a, b;
};
GroupFile group_from_json(const Json &j);
GroupFile load_group(const std::string &path);

/// A .lattice file. Either a bare local lattice {box, generators, depth} or
/// a ladder input {group, center, box, budget, stress_trials}; "group" is an
/// inline group object or a path relative to the lattice file.
struct LatticeFile {
  LocalLattice lattice;
  std::optional<GroupFile> group;
  Point center;
  long budget = 16;
  std::size_t stress_trials = 10000;
};
LatticeFile lattice_from_json(const Json &j, const std::string &base_dir = ".");
LatticeFile load_lattice(const std::string &path);

} // namespace pkit
