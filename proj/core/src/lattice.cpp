#include "pkit/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace pkit {

namespace {

constexpr std::size_t kMaxGridPoints = 4000000;

// Mixed-radix indexing of the integer points of a box.
struct Grid {
  Point lo, hi;

  std::size_t size() const {
    std::size_t s = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      auto w = static_cast<std::size_t>(hi[i] - lo[i] + 1);
      if (s > kMaxGridPoints / w) throw ResourceLimit("box has too many integer points");
      s *= w;
    }
    return s;
  }
  bool contains(const Point &p) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
  std::size_t index(const Point &p) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < lo.size(); ++i) r = r * static_cast<std::size_t>(hi[i] - lo[i] + 1) + (p[i] - lo[i]);
    return r;
  }
  Point point(std::size_t r) const {
    Point p(lo.size());
    for (std::size_t i = lo.size(); i-- > 0;) {
      auto w = static_cast<std::size_t>(hi[i] - lo[i] + 1);
      p[i] = lo[i] + static_cast<long>(r % w);
      r /= w;
    }
    return p;
  }
};

Grid grid_of(const IntBox &b) { return Grid{b.lo, b.hi}; }

Point add(const Point &a, const Point &b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Point sub(const Point &a, const Point &b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

bool is_zero(const Point &p) {
  return std::all_of(p.begin(), p.end(), [](long v) { return v == 0; });
}

IntVec to_int(const Point &p) { return IntVec(p.begin(), p.end()); }

Point to_point(const IntVec &v) {
  Point p;
  for (const auto &x : v) {
    if (!x.fits_slong_p()) throw ResourceLimit("lattice coordinate out of range");
    p.push_back(x.get_si());
  }
  return p;
}

std::string show(const Point &p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

void check_box(const IntBox &b) {
  if (b.lo.size() != b.hi.size() || b.lo.empty()) throw DomainError("box bounds have mismatched dimensions");
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (b.lo[i] > 0 || b.hi[i] < 0) throw DomainError("box must contain 0");
}

// Nonzero points of the box lying in the row lattice of h.
std::optional<Point> lattice_point_in_box(const IntMat &h, const IntBox &b) {
  Grid g = grid_of(b);
  std::size_t n = g.size();
  for (std::size_t r = 0; r < n; ++r) {
    Point p = g.point(r);
    if (!is_zero(p) && in_row_lattice(h, to_int(p))) return p;
  }
  return std::nullopt;
}

} // namespace

bool IntBox::contains(const Point &p) const { return grid_of(*this).contains(p); }

std::vector<Point> IntBox::points() const {
  Grid g = grid_of(*this);
  std::vector<Point> out;
  std::size_t n = g.size();
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) out.push_back(g.point(r));
  return out;
}

IntBox IntBox::scaled(long n) const {
  IntBox b = *this;
  for (auto &v : b.lo) v *= n;
  for (auto &v : b.hi) v *= n;
  return b;
}

std::string IntBox::str() const {
  std::string s;
  for (std::size_t i = 0; i < dim(); ++i)
    s += (i ? "x" : "") + ("[" + std::to_string(lo[i]) + "," + std::to_string(hi[i]) + "]");
  return s;
}

SeparationReport check_local_lattice(const LocalLattice &lat, std::optional<int> depth) {
  check_box(lat.box);
  const std::size_t k = lat.box.dim();
  for (const auto &g : lat.generators)
    if (g.size() != k) throw DomainError("generator dimension differs from the box");
  const int d = depth.value_or(lat.depth);

  // all integer combinations with coefficients in [-d, d]
  std::set<Point> gen{Point(k, 0)};
  std::vector<long> coef(lat.generators.size(), -d);
  if (!lat.generators.empty()) {
    for (;;) {
      Point p(k, 0);
      for (std::size_t i = 0; i < coef.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) p[j] += coef[i] * lat.generators[i][j];
      gen.insert(p);
      std::size_t i = 0;
      while (i < coef.size() && coef[i] == d) coef[i++] = -d;
      if (i == coef.size()) break;
      ++coef[i];
    }
  }

  SeparationReport rep;
  rep.separated = true;
  for (const auto &l : gen) {
    for (const auto &m : gen) {
      ++rep.points_checked;
      if (m != l && lat.box.contains(sub(m, l))) {
        rep.separated = false;
        rep.witness = std::make_pair(l, m);
        break;
      }
    }
    if (!rep.separated) break;
  }

  IntMat rows;
  for (const auto &g : lat.generators) rows.push_back(to_int(g));
  IntMat h = hermite_normal_form(rows);
  auto hit = h.empty() ? std::nullopt : lattice_point_in_box(h, lat.box);
  rep.meets_box_at_zero = !hit.has_value();
  if (hit && !rep.witness) rep.witness = std::make_pair(Point(k, 0), *hit);
  return rep;
}

// ---- base map --------------------------------------------------------------

BaseMap::BaseMap(const FiniteGroup &g, Point center, IntBox box)
    : g_(&g), center_(std::move(center)), box_(std::move(box)) {
  check_box(box_);
  if (box_.dim() != g.n() || center_.size() != g.n()) throw DomainError("box, center and group dimensions differ");
  std::size_t a = g.index(center_);
  if (a == FiniteGroup::npos) throw DomainError("center " + show(center_) + " is not in the group");
  center_inverse_ = g.inverse(a);
  Grid gr = grid_of(box_);
  std::size_t n = gr.size();
  values_.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    Point b = gr.point(r);
    std::size_t ab = g.index(add(center_, b));
    if (ab == FiniteGroup::npos)
      throw DomainError("center + " + show(b) + " leaves the carrier; the box is too large");
    values_[r] = g.mul(ab, center_inverse_);
  }
}

std::size_t BaseMap::operator()(const Point &b) const {
  Grid gr = grid_of(box_);
  if (!gr.contains(b)) throw DomainError(show(b) + " is outside the box " + box_.str());
  return values_[gr.index(b)];
}

std::size_t BaseMap::along(const std::vector<Point> &parts) const {
  std::size_t v = g_->identity();
  for (const auto &p : parts) v = g_->mul(v, (*this)(p));
  return v;
}

std::vector<Point> BaseMap::decompose(const Point &p) const {
  std::vector<Point> parts;
  Point rem = p;
  while (!is_zero(rem)) {
    Point step(rem.size());
    for (std::size_t i = 0; i < rem.size(); ++i) step[i] = std::clamp(rem[i], box_.lo[i], box_.hi[i]);
    if (is_zero(step)) throw DomainError(show(p) + " is not a sum of box elements");
    parts.push_back(step);
    rem = sub(rem, step);
  }
  if (parts.empty()) parts.push_back(Point(p.size(), 0));
  return parts;
}

std::optional<std::vector<Point>> BaseMap::random_decomposition(const Point &p, long n,
                                                                std::mt19937_64 &rng) const {
  if (n < 1) throw DomainError("decomposition length must be positive");
  const std::size_t k = p.size();
  std::vector<Point> parts(static_cast<std::size_t>(n), Point(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    long lo = box_.lo[i], hi = box_.hi[i], rem = p[i];
    if (rem < n * lo || rem > n * hi) return std::nullopt;
    for (long j = 0; j < n; ++j) {
      long left = n - j - 1;
      long a = std::max(lo, rem - left * hi), b = std::min(hi, rem - left * lo);
      long v = std::uniform_int_distribution<long>(a, b)(rng);
      parts[static_cast<std::size_t>(j)][i] = v;
      rem -= v;
    }
    // decouple the coordinates' positions
    std::vector<long> col(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) col[static_cast<std::size_t>(j)] = parts[static_cast<std::size_t>(j)][i];
    std::shuffle(col.begin(), col.end(), rng);
    for (long j = 0; j < n; ++j) parts[static_cast<std::size_t>(j)][i] = col[static_cast<std::size_t>(j)];
  }
  std::shuffle(parts.begin(), parts.end(), rng);
  return parts;
}

// ---- ladder ----------------------------------------------------------------

LadderReport ladder(const BaseMap &f, const LadderOptions &opts) {
  const FiniteGroup &G = f.group();
  const IntBox &B = f.box();
  const std::size_t k = B.dim();
  const std::size_t e = G.identity();
  const std::size_t unset = FiniteGroup::npos;

  LadderReport rep;
  std::vector<Point> box_pts = B.points();

  Grid prev = grid_of(B);
  std::vector<std::size_t> prev_val(box_pts.size());
  for (std::size_t r = 0; r < box_pts.size(); ++r) prev_val[r] = f(box_pts[r]);
  std::set<std::size_t> prev_image(prev_val.begin(), prev_val.end());

  IntMat kernel_rows;
  auto record = [&](long n, const Grid &g, const std::vector<std::size_t> &val, std::size_t conflicts,
                    const std::set<std::size_t> &image) {
    LadderLevel lv;
    lv.n = n;
    lv.points = val.size();
    lv.image = image.size();
    lv.conflicts = conflicts;
    for (std::size_t r = 0; r < val.size(); ++r)
      if (val[r] == e) {
        ++lv.kernel;
        Point p = g.point(r);
        if (!is_zero(p)) kernel_rows.push_back(to_int(p));
      }
    kernel_rows = hermite_normal_form(kernel_rows);
    rep.levels.push_back(lv);
    std::ostringstream os;
    os << "n=" << n << " |nB|=" << lv.points << " |f_n(nB)|=" << lv.image << " |Lambda_n|=" << lv.kernel
       << " rank=" << kernel_rows.size();
    if (conflicts) os << " conflicts=" << conflicts;
    rep.trace.push_back(os.str());
  };
  auto complete = [&](std::size_t g0_size) {
    return rep.stable_level && kernel_rows.size() == k && determinant_of_hnf(kernel_rows) == Integer(g0_size);
  };

  record(1, prev, prev_val, 0, prev_image);
  std::set<std::size_t> g0 = prev_image;

  for (long n = 2; n <= opts.budget; ++n) {
    Grid cur = grid_of(B.scaled(n));
    std::size_t npts;
    try {
      npts = cur.size();
    } catch (const ResourceLimit &) {
      rep.trace.push_back("n=" + std::to_string(n) + " stopped: nB has too many points");
      break;
    }
    std::vector<std::size_t> val(npts, unset);
    std::vector<char> bad(npts, 0);
    for (std::size_t r = 0; r < npts; ++r) {
      Point p = cur.point(r);
      // every split p = q + b with q in (n-1)B covers all decompositions
      for (const auto &b : box_pts) {
        Point q = sub(p, b);
        if (!prev.contains(q)) continue;
        std::size_t v = G.mul(prev_val[prev.index(q)], f(b));
        if (val[r] == unset) val[r] = v;
        else if (val[r] != v) bad[r] = 1;
      }
    }
    std::size_t conflicts = static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
    if (conflicts) rep.well_defined = false;
    std::set<std::size_t> image(val.begin(), val.end());
    if (!std::includes(image.begin(), image.end(), prev_image.begin(), prev_image.end()))
      rep.images_monotone = false;
    record(n, cur, val, conflicts, image);
    g0.insert(image.begin(), image.end());
    if (!rep.stable_level && image == prev_image) rep.stable_level = n - 1;
    prev = cur;
    prev_val = std::move(val);
    prev_image = std::move(image);
    if (opts.stop_when_complete && complete(g0.size())) break;
  }
  if (!rep.stable_level) rep.trace.push_back("no stabilization within the level budget");

  rep.lattice = kernel_rows;
  rep.g0.assign(g0.begin(), g0.end());
  rep.g0_subgroup = true;
  for (std::size_t x : rep.g0)
    for (std::size_t y : rep.g0)
      if (!g0.count(G.mul(x, y))) rep.g0_subgroup = false;
  rep.index = G.size() % rep.g0.size() == 0 ? G.size() / rep.g0.size() : 0;
  rep.lattice_meets_box_at_zero = rep.lattice.empty() || !lattice_point_in_box(rep.lattice, B);

  std::set<std::size_t> f1;
  for (const auto &b : box_pts) f1.insert(f(b));
  rep.f1_generic = is_generic_finite(G, std::vector<std::size_t>(f1.begin(), f1.end())).generic;
  return rep;
}

// ---- quotient --------------------------------------------------------------

Quotient quotient(const IntMat &lattice, std::size_t k) {
  Quotient q;
  q.hnf = hermite_normal_form(lattice);
  if (q.hnf.size() != k) throw DomainError("lattice has rank " + std::to_string(q.hnf.size()) + " < " +
                                           std::to_string(k) + ": the quotient is infinite");
  q.order = determinant_of_hnf(q.hnf);
  for (const auto &d : smith_invariants(q.hnf))
    if (d != 1) q.invariant_factors.push_back(d);
  if (q.order > Integer(static_cast<unsigned long>(kMaxGridPoints)))
    throw ResourceLimit("quotient too large to enumerate");
  Point hi(k);
  for (std::size_t i = 0; i < k; ++i) hi[i] = q.hnf[i][i].get_si() - 1;
  Grid g{Point(k, 0), hi};
  std::size_t n = g.size();
  for (std::size_t r = 0; r < n; ++r) q.representatives.push_back(g.point(r));
  return q;
}

Quotient quotient(const LocalLattice &lat) {
  IntMat rows;
  for (const auto &g : lat.generators) rows.push_back(to_int(g));
  return quotient(rows, lat.box.dim());
}

IsomorphismReport verify_isomorphism(const BaseMap &f, const LadderReport &lad, const Quotient &q) {
  IsomorphismReport rep;
  const FiniteGroup &G = f.group();
  if (q.order != Integer(static_cast<unsigned long>(lad.g0.size()))) {
    rep.detail = "size mismatch: |B/Lambda| = " + to_string(q.order) + ", |G0| = " + std::to_string(lad.g0.size());
    return rep;
  }
  rep.sizes_match = true;
  // D Z^k lies in the lattice, so shifting by multiples of D moves any point
  // into the cone spanned by the box without changing its coset
  const IntBox &B = f.box();
  const long D = q.order.get_si();
  auto phi = [&](Point p) {
    long t = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if ((B.hi[i] == 0 && p[i] > 0) || (B.lo[i] == 0 && p[i] < 0)) t = std::max(t, (std::abs(p[i]) + D - 1) / D);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (B.hi[i] == 0) p[i] -= t * D;
      else if (B.lo[i] == 0) p[i] += t * D;
    }
    return f.along(f.decompose(p));
  };

  std::vector<std::size_t> img;
  for (const auto &r : q.representatives) img.push_back(phi(r));

  rep.well_defined = true;
  for (std::size_t i = 0; i < q.representatives.size() && rep.well_defined; ++i)
    for (const auto &row : q.hnf)
      for (int s : {1, -1}) {
        Point l = to_point(row);
        if (s < 0)
          for (auto &v : l) v = -v;
        Point p = add(q.representatives[i], l);
        if (phi(p) != img[i]) {
          rep.well_defined = false;
          rep.detail = "f differs on " + show(q.representatives[i]) + " and " + show(p);
          break;
        }
      }

  std::map<Point, std::size_t> rep_index;
  for (std::size_t i = 0; i < q.representatives.size(); ++i) rep_index[q.representatives[i]] = i;
  rep.homomorphism = true;
  for (std::size_t i = 0; i < q.representatives.size() && rep.homomorphism; ++i)
    for (std::size_t j = 0; j < q.representatives.size(); ++j) {
      Point s = to_point(reduce_mod(q.hnf, to_int(add(q.representatives[i], q.representatives[j]))));
      if (img[rep_index.at(s)] != G.mul(img[i], img[j])) {
        rep.homomorphism = false;
        if (rep.detail.empty())
          rep.detail = "not a homomorphism at " + show(q.representatives[i]) + ", " + show(q.representatives[j]);
        break;
      }
    }

  std::set<std::size_t> seen(img.begin(), img.end());
  std::set<std::size_t> g0(lad.g0.begin(), lad.g0.end());
  rep.bijective = seen == g0;
  if (!rep.bijective && rep.detail.empty()) rep.detail = "the map is not onto G0 or not injective";
  return rep;
}

// ---- independent classification ------------------------------------------

std::vector<Integer> abelian_invariants(const FiniteGroup &g) {
  const std::size_t n = g.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (g.mul(a, b) != g.mul(b, a)) throw DomainError("group is not abelian");

  std::vector<std::size_t> order(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t x = a, m = 1;
    while (x != g.identity()) {
      x = g.mul(x, a);
      ++m;
    }
    order[a] = m;
  }

  // for each prime p, the p-primary part from counts of elements killed by p^j
  std::vector<std::vector<std::size_t>> primary; // per prime, exponents descending
  std::vector<std::size_t> primes;
  std::size_t rest = n;
  for (std::size_t p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    primes.push_back(p);
    // c_j = log_p #{x : x^(p^j) = e}; number of cyclic factors of exponent >= j is c_j - c_{j-1}
    std::vector<std::size_t> c{0};
    std::size_t pj = 1;
    for (;;) {
      pj *= p;
      std::size_t cnt = 0;
      for (std::size_t a = 0; a < n; ++a)
        if (pj % order[a] == 0) ++cnt;
      std::size_t lg = 0;
      while (cnt > 1) {
        cnt /= p;
        ++lg;
      }
      if (lg == c.back()) break;
      c.push_back(lg);
    }
    std::vector<std::size_t> at_least; // at_least[j-1] = #factors with exponent >= j
    for (std::size_t j = 1; j < c.size(); ++j) at_least.push_back(c[j] - c[j - 1]);
    std::vector<std::size_t> exps;
    for (std::size_t j = 0; j < at_least.size(); ++j) {
      std::size_t next = j + 1 < at_least.size() ? at_least[j + 1] : 0;
      for (std::size_t t = 0; t < at_least[j] - next; ++t) exps.push_back(j + 1);
    }
    std::sort(exps.rbegin(), exps.rend());
    primary.push_back(exps);
  }

  std::size_t len = 0;
  for (const auto &e : primary) len = std::max(len, e.size());
  std::vector<Integer> out(len, 1); // out[0] is the largest factor
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (std::size_t t = 0; t < primary[i].size(); ++t) {
      Integer pe = 1;
      for (std::size_t u = 0; u < primary[i][t]; ++u) pe *= static_cast<unsigned long>(primes[i]);
      out[t] *= pe;
    }
  std::reverse(out.begin(), out.end());
  return out;
}

std::size_t well_definedness_stress(const BaseMap &f, long n, std::size_t trials, std::mt19937_64 &rng) {
  const IntBox &B = f.box();
  std::size_t bad = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Point p(B.dim());
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = std::uniform_int_distribution<long>(n * B.lo[i], n * B.hi[i])(rng);
    auto d1 = f.random_decomposition(p, n, rng), d2 = f.random_decomposition(p, n, rng);
    if (!d1 || !d2) throw Error("sampled point outside nB");
    if (f.along(*d1) != f.along(*d2)) ++bad;
  }
  return bad;
}

} // namespace pkit
