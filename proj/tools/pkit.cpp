// pkit: command-line front end. Exit codes: 0 ok, 1 verification failure,
// 2 usage or input error, 3 resource limit.

#include "pkit/cells.hpp"
#include "pkit/eval.hpp"
#include "pkit/geometry.hpp"
#include "pkit/group.hpp"
#include "pkit/json_io.hpp"
#include "pkit/lattice.hpp"
#include "pkit/parser.hpp"
#include "pkit/qe.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace pkit;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kResource = 3 };

struct Global {
  bool json = false;
  bool timing = false;
  std::uint64_t seed = 1;
};

struct Outcome {
  Json result;
  std::string text;
  int code = kOk;
};

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<ModelElement> parse_point(const std::string &s) {
  std::vector<ModelElement> out;
  for (const auto &p : split_list(s)) out.push_back(parse_element(p));
  return out;
}

std::string join(const std::vector<ModelElement> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s;
}

std::string join(const Point &v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string join(const std::vector<Integer> &v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + "]";
}

// Free variables of the document that are not bound parameters, or the
// explicit --vars list.
std::vector<std::string> set_vars(const Document &doc, const std::string &vars) {
  if (!vars.empty()) return split_list(vars);
  std::vector<std::string> out;
  for (const auto &v : doc.formula.free_vars())
    if (!doc.params.count(v)) out.push_back(v);
  return out;
}

// ---- formulas --------------------------------------------------------------

Outcome cmd_qe(const std::string &path) {
  Document doc = load_document(path);
  QeStats st;
  Formula q = prettify(simplify(eliminate(doc.formula, {}, &st)));
  Outcome o;
  o.result = {{"formula", q.str()}, {"eliminated", st.eliminated}, {"peak_nodes", st.peak_nodes}};
  o.text = q.str();
  return o;
}

Outcome cmd_decide(const std::string &path) {
  Document doc = load_document(path);
  for (const auto &v : doc.formula.free_vars())
    if (!doc.params.count(v)) throw DomainError("free variable " + v + " has no value; use `sat` or bind it with let");
  bool t = decide(doc.formula, doc.params);
  Outcome o;
  o.result = {{"value", t}};
  o.text = t ? "true" : "false";
  return o;
}

Outcome cmd_sat(const std::string &path) {
  Document doc = load_document(path);
  auto w = satisfiable(doc.formula, doc.params);
  Outcome o;
  o.result = {{"satisfiable", w.has_value()}};
  if (w) {
    o.result["witness"] = to_json(*w);
    for (const auto &[k, v] : *w) o.text += (o.text.empty() ? "" : " ") + k + "=" + v.str();
  } else {
    o.text = "unsat";
  }
  return o;
}

Outcome cmd_cells(const std::string &path, const std::string &vars, bool certify) {
  Document doc = load_document(path);
  auto vs = set_vars(doc, vars);
  Formula f = doc.formula.is_quantifier_free() ? doc.formula : eliminate(doc.formula);
  auto cells = decompose(f, vs, doc.params);
  Outcome o;
  Json arr = Json::array();
  for (const auto &c : cells) {
    arr.push_back(to_json(c));
    o.text += c.str() + "\n";
  }
  o.result = {{"vars", vs}, {"cells", arr}};
  if (certify) {
    auto rep = certify_partition(f, cells, doc.params);
    o.result["certificate"] = to_json(rep);
    o.text += std::string("partition: covers=") + (rep.covers ? "yes" : "no") +
              " disjoint=" + (rep.disjoint ? "yes" : "no") + "\n";
    if (!rep.ok()) o.code = kFailed;
  }
  if (!o.text.empty()) o.text.pop_back();
  return o;
}

Outcome cmd_dim(const std::string &path, const std::string &vars) {
  Document doc = load_document(path);
  auto d = dim(doc.formula, set_vars(doc, vars), doc.params);
  Outcome o;
  o.result = {{"dim", d ? Json(*d) : Json(nullptr)}};
  o.text = d ? std::to_string(*d) : "empty";
  return o;
}

Outcome cmd_boxes(const std::string &path, const std::string &vars, const std::string &point, bool finite) {
  Document doc = load_document(path);
  auto vs = set_vars(doc, vars);
  Formula f = doc.formula.is_quantifier_free() ? doc.formula : eliminate(doc.formula);
  auto cells = decompose(f, vs, doc.params);
  BoxOptions bo;
  bo.allow_finite = finite;
  Outcome o;
  Json arr = Json::array();
  auto emit = [&](const CellDesc &c, const std::vector<ModelElement> &a) {
    CBox b = cbox_around(c, a, doc.params, bo);
    arr.push_back({{"point", to_json(a)}, {"cbox", to_json(b)}});
    o.text += "around (" + join(a) + "): " + b.box.str() + " in " + c.str() + "\n";
  };
  if (!point.empty()) {
    auto a = parse_point(point);
    bool found = false;
    for (const auto &c : cells)
      if (cell_contains(c, a, doc.params)) {
        emit(c, a);
        found = true;
        break;
      }
    if (!found) throw DomainError("point is not in the set");
  } else {
    std::vector<ModelElement> over;
    for (const auto &[k, v] : doc.params) over.push_back(v);
    for (const auto &c : cells) emit(c, generic_point(c, doc.params, over));
  }
  o.result = {{"vars", vs}, {"boxes", arr}};
  if (!o.text.empty()) o.text.pop_back();
  return o;
}

Outcome cmd_parallelograms(const std::string &path, const std::string &vars, const std::string &bound, bool split) {
  Document doc = load_document(path);
  auto vs = set_vars(doc, vars);
  Formula f = doc.formula.is_quantifier_free() ? doc.formula : eliminate(doc.formula);
  auto ps = decompose_bounded(f, vs, parse_element(bound), doc.params);
  std::vector<ModelElement> over;
  for (const auto &[k, v] : doc.params) over.push_back(v);
  Outcome o;
  Json arr = Json::array();
  for (const auto &p : ps) {
    Json j = to_json(p);
    o.text += p.str() + "\n";
    if (split && p.is_open()) {
      Json pieces = Json::array();
      for (const auto &q : split_generic_centers(p, over)) {
        pieces.push_back(to_json(q));
        o.text += "  centered piece: " + q.str() + "\n";
      }
      j["generic_center_pieces"] = pieces;
    }
    arr.push_back(j);
  }
  o.result = {{"vars", vs}, {"parallelograms", arr}};
  if (!o.text.empty()) o.text.pop_back();
  return o;
}

// ---- groups ----------------------------------------------------------------

std::string check_lines(const GroupReport &r) {
  std::string s;
  for (const auto &c : r.checks) {
    s += c.name + ": " + (c.holds ? "holds" : "FAILS");
    if (c.counterexample) {
      s += " (counterexample";
      for (const auto &[k, v] : *c.counterexample)
        if (k[0] != '_') s += " " + k + "=" + v.str();
      s += ")";
    }
    s += "\n";
  }
  return s;
}

Outcome cmd_group(const std::string &action, const std::string &path, const std::string &a_arg,
                  const std::string &b_arg) {
  GroupFile gf = load_group(path);
  const DefinableGroup &g = gf.group;
  auto a = a_arg.empty() ? gf.a : parse_point(a_arg);
  auto b = b_arg.empty() ? gf.b : parse_point(b_arg);
  Outcome o;
  if (action == "verify") {
    auto rep = verify_group(g);
    o.result = to_json(rep);
    o.text = check_lines(rep) + (rep.ok() ? "group" : "not a group");
    if (!rep.ok()) o.code = kFailed;
    return o;
  }
  if (a.empty()) throw DomainError("group " + action + " needs a point a (file \"points\" or --a)");
  if (action == "localize") {
    if (b.empty()) b = a;
    auto ll = local_linearity(g, a, b);
    auto box = local_addition_box(g, a);
    o.result = {{"local_linearity", to_json(ll)}, {"addition_box", to_json(box)}};
    std::ostringstream os;
    os << "x*y = M x + N y + gamma around (" << join(a) << "), (" << join(b) << ")\n";
    for (std::size_t i = 0; i < ll.M.size(); ++i) {
      os << "  row " << i << ": M=";
      for (const auto &q : ll.M[i]) os << to_string(q) << " ";
      os << "N=";
      for (const auto &q : ll.N[i]) os << to_string(q) << " ";
      os << "gamma=" << ll.gamma[i].str() << "\n";
    }
    os << "addition box: " << box.box.box.str();
    o.text = os.str();
    return o;
  }
  if (action == "abelianize") {
    auto r = abelian_finite_index(g, a);
    o.result = to_json(r);
    std::ostringstream os;
    os << "H = " << (r.subgroup.is_quantifier_free() ? prettify(r.subgroup) : r.subgroup).str() << "\n"
       << "abelian: " << (r.abelian ? "yes" : "no") << ", closed: " << (r.subgroup_closed ? "yes" : "no")
       << ", contains box: " << (r.contains_box ? "yes" : "no") << "\n"
       << "dim(G) = " << (r.dim_group ? std::to_string(*r.dim_group) : "?")
       << ", dim(H) = " << (r.dim_subgroup ? std::to_string(*r.dim_subgroup) : "?");
    o.text = os.str();
    if (!r.ok()) o.code = kFailed;
    return o;
  }
  throw DomainError("unknown group action " + action);
}

// ---- lattices --------------------------------------------------------------

Outcome cmd_lattice(const std::string &action, const std::string &path, std::uint64_t seed) {
  LatticeFile lf = load_lattice(path);
  Outcome o;
  if (action == "check" || action == "quotient") {
    auto rep = check_local_lattice(lf.lattice);
    o.result = {{"box", to_json(lf.lattice.box)}, {"separation", to_json(rep)}};
    o.text = "box " + lf.lattice.box.str() + ": " + (rep.ok() ? "local lattice" : "NOT a local lattice");
    if (rep.witness) o.text += " (witness " + join(rep.witness->first) + " and " + join(rep.witness->second) + ")";
    if (!rep.ok()) {
      o.code = kFailed;
      return o;
    }
    if (action == "quotient") {
      auto q = quotient(lf.lattice);
      o.result["quotient"] = to_json(q);
      o.text += "\norder " + to_string(q.order) + ", invariant factors " + join(q.invariant_factors);
    }
    return o;
  }
  if (action != "ladder") throw DomainError("unknown lattice action " + action);
  if (!lf.group) throw DomainError("lattice ladder needs \"group\" and \"center\"");

  FiniteGroup G(lf.group->group);
  BaseMap f(G, lf.center, lf.lattice.box);
  LadderOptions lo;
  lo.budget = lf.budget;
  auto lad = ladder(f, lo);
  o.result = {{"group", lf.group->group.name}, {"box", to_json(f.box())}, {"ladder", to_json(lad, G)}};
  std::string text;
  for (const auto &t : lad.trace) text += t + "\n";
  bool ok = lad.stable_level && lad.well_defined && lad.images_monotone && lad.g0_subgroup &&
            lad.lattice_meets_box_at_zero && lad.lattice.size() == f.box().dim();

  std::mt19937_64 rng(seed);
  std::size_t disagreements = 0;
  for (const auto &lv : lad.levels) disagreements += well_definedness_stress(f, lv.n, lf.stress_trials, rng);
  o.result["stress"] = {{"trials_per_level", lf.stress_trials}, {"disagreements", disagreements}};
  ok = ok && disagreements == 0;

  if (lad.lattice.size() == f.box().dim()) {
    std::vector<Point> gens;
    for (const auto &row : lad.lattice) {
      Point p;
      for (const auto &x : row) p.push_back(x.get_si());
      gens.push_back(p);
    }
    auto sep = check_local_lattice({f.box(), gens, lf.lattice.depth});
    auto q = quotient(lad.lattice, f.box().dim());
    auto iso = verify_isomorphism(f, lad, q);
    o.result["separation"] = to_json(sep);
    o.result["quotient"] = to_json(q);
    o.result["isomorphism"] = to_json(iso);
    text += "lattice check: " + std::string(sep.ok() ? "passes" : "FAILS") + "\n";
    text += "B/Lambda: order " + to_string(q.order) + ", invariant factors " + join(q.invariant_factors) + "\n";
    if (lad.index == 1) {
      auto known = abelian_invariants(G);
      o.result["group_invariant_factors"] = Json::array();
      for (const auto &d : known) o.result["group_invariant_factors"].push_back(to_string(d));
      text += "group invariant factors " + join(known) + "\n";
      ok = ok && known == q.invariant_factors;
    }
    text += "isomorphism onto G0: " + std::string(iso.ok() ? "verified" : "FAILS " + iso.detail);
    ok = ok && sep.ok() && iso.ok();
  } else {
    text += "lattice not full rank within the budget";
  }
  o.result["ok"] = ok;
  o.text = text;
  if (!ok) o.code = kFailed;
  return o;
}

// ---- corpus ----------------------------------------------------------------

struct CorpusResult {
  std::string file;
  Json report;
  bool ok = false;
};

CorpusResult run_corpus_file(const std::string &file, std::uint64_t seed, std::size_t samples, long window) {
  CorpusResult r{file, Json::object(), false};
  try {
    Document doc = load_document(file);
    QeStats st;
    Formula q = eliminate(doc.formula, {}, &st);
    std::vector<std::string> vs;
    for (const auto &v : doc.formula.free_vars())
      if (!doc.params.count(v)) vs.push_back(v);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(-window, window);
    std::size_t bad = 0, n = vs.empty() ? 1 : samples;
    for (std::size_t i = 0; i < n; ++i) {
      Assignment env = doc.params;
      for (const auto &v : vs) env[v] = ModelElement(pick(rng));
      if (decide(doc.formula, env) != eval(q, env)) ++bad;
    }
    r.ok = bad == 0;
    r.report = {{"file", file}, {"ok", r.ok}, {"vars", vs}, {"samples", n}, {"disagreements", bad},
                {"qf_nodes", st.peak_nodes}, {"eliminated", st.eliminated}};
  } catch (const std::exception &e) {
    r.report = {{"file", file}, {"ok", false}, {"error", e.what()}};
  }
  return r;
}

Outcome cmd_corpus(const std::vector<std::string> &inputs, std::uint64_t seed, std::size_t samples, long window,
                   unsigned threads) {
  std::vector<std::string> files;
  for (const auto &in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto &e : fs::directory_iterator(in))
        if (e.path().extension() == ".pres") files.push_back(e.path().string());
    } else {
      files.push_back(in);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusResult> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) results[i] = run_corpus_file(files[i], seed + i, samples, window);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, files.size()); ++t) pool.emplace_back(worker);
  for (auto &t : pool) t.join();

  Outcome o;
  Json arr = Json::array();
  std::size_t failed = 0;
  for (const auto &r : results) {
    arr.push_back(r.report);
    if (!r.ok) ++failed;
    o.text += (r.ok ? "ok    " : "FAIL  ") + r.file;
    if (r.report.contains("error")) o.text += ": " + r.report["error"].get<std::string>();
    o.text += "\n";
  }
  o.text += std::to_string(files.size() - failed) + "/" + std::to_string(files.size()) + " files sound";
  o.result = {{"files", arr}, {"failed", failed}};
  if (failed) o.code = kFailed;
  return o;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"pkit: Presburger arithmetic toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_flag("--json", g.json, "Print a JSON report (schema pkit/1)");
  app.add_flag("--timing", g.timing, "Report wall time");
  app.add_option("--seed", g.seed, "Seed for randomized checks");

  std::string file, vars, point, bound = "inf", a_arg, b_arg, action;
  bool certify = false, split = false, finite = false;
  std::vector<std::string> corpus_inputs;
  std::size_t samples = 200;
  long window = 30;
  unsigned threads = 0;

  auto *qe = app.add_subcommand("qe", "Eliminate quantifiers");
  auto *dec = app.add_subcommand("decide", "Decide a sentence");
  auto *sat = app.add_subcommand("sat", "Find a satisfying assignment");
  auto *cells = app.add_subcommand("cells", "Cell decomposition");
  auto *dimc = app.add_subcommand("dim", "Dimension of a definable set");
  auto *boxes = app.add_subcommand("boxes", "Boxes around generic points of cells");
  auto *par = app.add_subcommand("parallelograms", "Decompose a bounded set into parallelograms");
  auto *grp = app.add_subcommand("group", "Definable group pipelines");
  auto *lat = app.add_subcommand("lattice", "Local lattices and quotients");
  auto *cor = app.add_subcommand("corpus", "Check QE soundness on .pres files");
  for (auto *s : {qe, dec, sat, cells, dimc, boxes, par}) s->add_option("file", file, ".pres file")->required();
  for (auto *s : {cells, dimc, boxes, par}) s->add_option("--vars", vars, "Comma-separated set variables");
  cells->add_flag("--certify", certify, "Decide coverage and disjointness");
  boxes->add_option("--point", point, "Comma-separated model elements");
  boxes->add_flag("--finite", finite, "Allow finite margins (standard sets)");
  par->add_option("--bound", bound, "Bound alpha on every coordinate");
  par->add_flag("--split", split, "Split open pieces into pieces with generic centers");
  grp->add_option("action", action, "verify | localize | abelianize")
      ->required()
      ->check(CLI::IsMember({"verify", "localize", "abelianize"}));
  grp->add_option("file", file, ".group file")->required();
  grp->add_option("--a", a_arg, "Point a (comma-separated)");
  grp->add_option("--b", b_arg, "Point b (comma-separated)");
  lat->add_option("action", action, "check | ladder | quotient")
      ->required()
      ->check(CLI::IsMember({"check", "ladder", "quotient"}));
  lat->add_option("file", file, ".lattice file")->required();
  cor->add_option("inputs", corpus_inputs, "Files or directories")->required();
  cor->add_option("--samples", samples, "Random assignments per file");
  cor->add_option("--window", window, "Sample coordinates from [-window, window]");
  cor->add_option("--threads", threads, "Worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  auto *sub = app.get_subcommands().front();
  std::string name = sub->get_name();
  auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    if (name == "qe") out = cmd_qe(file);
    else if (name == "decide") out = cmd_decide(file);
    else if (name == "sat") out = cmd_sat(file);
    else if (name == "cells") out = cmd_cells(file, vars, certify);
    else if (name == "dim") out = cmd_dim(file, vars);
    else if (name == "boxes") out = cmd_boxes(file, vars, point, finite);
    else if (name == "parallelograms") out = cmd_parallelograms(file, vars, bound, split);
    else if (name == "group") out = cmd_group(action, file, a_arg, b_arg);
    else if (name == "lattice") out = cmd_lattice(action, file, g.seed);
    else out = cmd_corpus(corpus_inputs, g.seed, samples, window, threads);
  } catch (const ResourceLimit &e) {
    std::cerr << "pkit: resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const std::exception &e) {
    std::cerr << "pkit: " << e.what() << "\n";
    return kUsage;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (name == "group" || name == "lattice") name += " " + action;
  if (g.json) {
    Json report = envelope(name, name == "corpus" ? "" : file, out.result);
    report["exit_code"] = out.code;
    if (g.timing) report["timing_ms"] = ms;
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << out.text << "\n";
    if (g.timing) std::cerr << "time: " << ms << " ms\n";
  }
  return out.code;
}
