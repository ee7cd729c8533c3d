#include "subshift/blueprint.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace subshift {
namespace {

using ElemSet = std::unordered_set<Elem>;

Elem z1(int64_t n) {
  Elem e;
  e.vec = {n};
  return e;
}

// contiguous stretch of Z, when the set is one
struct Interval {
  int64_t lo, hi;
};

std::optional<Interval> as_interval(const Group& g,
                                    const std::vector<Elem>& s) {
  if (g.kind() != Group::Kind::Zd || s.empty()) return std::nullopt;
  if (s.front().vec.size() != 1) return std::nullopt;
  int64_t lo = s.front().vec[0], hi = lo;
  for (const Elem& e : s) {
    lo = std::min(lo, e.vec[0]);
    hi = std::max(hi, e.vec[0]);
  }
  if (hi - lo + 1 != static_cast<int64_t>(s.size())) return std::nullopt;
  return Interval{lo, hi};
}

std::vector<Elem> interval_elems(int64_t lo, int64_t hi) {
  std::vector<Elem> out;
  if (lo > hi) return out;
  out.reserve(static_cast<size_t>(hi - lo + 1));
  for (int64_t v = lo; v <= hi; ++v) out.push_back(z1(v));
  return out;
}

WitnessReport confirmed(std::vector<Elem> witness, int64_t window_radius) {
  WitnessReport r;
  r.status = Status::Confirmed;
  r.witness = std::move(witness);
  r.window_radius = window_radius;
  return r;
}

WitnessReport refuted_at(Elem bad, int64_t window_radius) {
  WitnessReport r;
  r.status = Status::Refuted;
  r.counterexample = std::move(bad);
  r.window_radius = window_radius;
  return r;
}

WitnessReport refuted_pair(Elem a, Elem b, int64_t window_radius) {
  WitnessReport r;
  r.status = Status::Refuted;
  r.counterexample_pair = {std::move(a), std::move(b)};
  r.window_radius = window_radius;
  return r;
}

const Elem& least_elem(const Group& g, const std::vector<Elem>& s) {
  const Elem* best = &s.front();
  for (const Elem& e : s)
    if (g.less(e, *best)) best = &e;
  return *best;
}

bool contains_identity(const Group& g, const std::vector<Elem>& s) {
  Elem id = g.identity();
  for (const Elem& e : s)
    if (e == id) return true;
  return false;
}

// least number of bits b with 2^b >= coeff * k^degree, floored at 3
int64_t demand_bits(const GrowthTarget& t, int64_t k) {
  if (t.coeff < 1 || t.degree < 0) throw SpecError("bad growth target");
  __int128 v = t.coeff;
  for (int i = 0; i < t.degree; ++i) {
    v *= k;
    if (v > (__int128)1 << 90) throw SpecError("growth target overflows");
  }
  int64_t bits = 0;
  while (((__int128)1 << bits) < v) ++bits;
  return std::max<int64_t>(3, bits);
}

// greedy separated placements of A inside ball(r); clusters shaped AA^-1
int64_t cluster_count_in_ball(const Group& g, const std::vector<Elem>& A,
                              const std::vector<Elem>& shape, int64_t r,
                              const std::vector<Elem>& region) {
  ElemSet taken;
  int64_t cnt = 0;
  for (const Elem& lam : region) {
    bool fits = true;
    for (const Elem& a : A)
      if (g.length(g.mul(lam, a)) > r) {
        fits = false;
        break;
      }
    if (!fits) continue;
    std::vector<Elem> cells;
    cells.reserve(shape.size());
    bool fresh = true;
    for (const Elem& s : shape) {
      Elem c = g.mul(lam, s);
      if (taken.count(c)) {
        fresh = false;
        break;
      }
      cells.push_back(std::move(c));
    }
    if (!fresh) continue;
    for (Elem& c : cells) taken.insert(std::move(c));
    ++cnt;
  }
  return cnt;
}

// positions triangle: dd[n][k] collects every level-k tile slot inside F_n
void rebuild_triangle(Blueprint& bp) {
  const Group& g = *bp.group;
  int top = bp.top_level();
  bp.dd.assign(top + 1, {});
  bp.dd[0] = {{g.identity()}};
  for (int n = 1; n <= top; ++n) {
    const BlueprintLevel& lv = bp.levels[n - 1];
    bp.dd[n].assign(n + 1, {});
    bp.dd[n][n] = {g.identity()};
    for (int k = n - 1; k >= 0; --k) {
      ElemSet seen;
      std::vector<Elem> row;
      for (int m = k; m < n; ++m) {
        for (const Elem& d : lv.delta[m])
          for (const Elem& psi : bp.dd[m][k]) {
            Elem p = g.mul(d, psi);
            if (!seen.insert(p).second)
              throw SpecError("blueprint positions collide");
            row.push_back(std::move(p));
          }
      }
      sort_enumeration(g, row);
      bp.dd[n][k] = std::move(row);
    }
  }
  if (bp.positions.empty()) bp.positions = bp.dd[top];
}

}  // namespace

std::vector<Elem> set_inverse(const Group& g, const std::vector<Elem>& s) {
  std::vector<Elem> out;
  out.reserve(s.size());
  for (const Elem& e : s) out.push_back(g.inv(e));
  sort_enumeration(g, out);
  return out;
}

std::vector<Elem> set_product(const Group& g, const std::vector<Elem>& a,
                              const std::vector<Elem>& b) {
  if (a.empty() || b.empty()) return {};
  auto ia = as_interval(g, a), ib = as_interval(g, b);
  std::vector<Elem> out;
  if (ia && ib) {
    out = interval_elems(ia->lo + ib->lo, ia->hi + ib->hi);
  } else {
    if (a.size() * b.size() > (size_t(1) << 26))
      throw SpecError("set product too large");
    ElemSet seen;
    for (const Elem& x : a)
      for (const Elem& y : b) {
        Elem p = g.mul(x, y);
        if (seen.insert(p).second) out.push_back(std::move(p));
      }
  }
  sort_enumeration(g, out);
  return out;
}

std::vector<Elem> shrink_into_ball(const Group& g, int64_t r,
                                   const std::vector<Elem>& v) {
  if (v.empty()) throw SpecError("shrink needs a nonempty probe set");
  std::vector<Elem> out;
  if (auto iv = as_interval(g, v)) {
    int64_t lo = std::max(-r, -r - iv->lo);
    int64_t hi = std::min(r, r - iv->hi);
    out = interval_elems(lo, hi);
  } else {
    for (const Elem& cand : g.ball(r)) {
      bool ok = true;
      for (const Elem& x : v)
        if (g.length(g.mul(cand, x)) > r) {
          ok = false;
          break;
        }
      if (ok) out.push_back(cand);
    }
  }
  sort_enumeration(g, out);
  return out;
}

std::vector<Elem> max_disjoint(const Group& g, const std::vector<Elem>& A,
                               const std::vector<Elem>& region,
                               const std::vector<Elem>& forbidden) {
  if (A.empty()) throw SpecError("packing needs a nonempty tile");
  if (region.empty()) return {};

  // fast lane: contiguous stretches of Z with the identity translate legal
  auto ia = as_interval(g, A);
  auto ir = as_interval(g, region);
  if (ia && ir && forbidden.empty() && ir->lo <= ia->lo && ia->hi <= ir->hi) {
    int64_t w = ia->hi - ia->lo + 1;
    std::vector<Elem> out{z1(0)};
    bool up = true, down = true;
    for (int64_t k = 1; up || down; ++k) {
      if (up) {
        int64_t p = k * w;
        if (p + ia->lo >= ir->lo && p + ia->hi <= ir->hi)
          out.push_back(z1(p));
        else
          up = false;
      }
      if (down) {
        int64_t p = -k * w;
        if (p + ia->lo >= ir->lo && p + ia->hi <= ir->hi)
          out.push_back(z1(p));
        else
          down = false;
      }
    }
    sort_enumeration(g, out);
    return out;
  }

  ElemSet rset(region.begin(), region.end());
  ElemSet bad(forbidden.begin(), forbidden.end());
  Elem a0inv = g.inv(least_elem(g, A));
  std::vector<Elem> cand;
  cand.reserve(region.size());
  {
    ElemSet seen;
    for (const Elem& r : region) {
      Elem c = g.mul(r, a0inv);
      if (seen.insert(c).second) cand.push_back(std::move(c));
    }
  }
  sort_enumeration(g, cand);

  ElemSet covered;
  std::vector<Elem> out;
  std::vector<Elem> tile;
  for (const Elem& c : cand) {
    bool ok = true;
    tile.clear();
    for (const Elem& a : A) {
      Elem p = g.mul(c, a);
      if (!rset.count(p) || bad.count(p) || covered.count(p)) {
        ok = false;
        break;
      }
      tile.push_back(std::move(p));
    }
    if (!ok) continue;
    for (Elem& p : tile) covered.insert(std::move(p));
    out.push_back(c);
  }
  return out;
}

RhoResult rho_exact(const Group& g, const std::vector<Elem>& B,
                    const std::vector<Elem>& A, int64_t exact_bound) {
  if (A.empty() || B.empty()) throw SpecError("rho needs nonempty sets");
  if (!contains_identity(g, A))
    throw SpecError("rho needs the identity in the probe tile");
  if (static_cast<int64_t>(B.size()) > exact_bound)
    throw SpecError("exact rho limited to |B| <= " +
                    std::to_string(exact_bound));

  std::vector<Elem> points = B;
  sort_enumeration(g, points);
  ElemSet bset(points.begin(), points.end());

  // demands: points whose whole translate tile stays inside B
  std::vector<Elem> demands;
  std::vector<ElemSet> demand_tiles;
  for (const Elem& b : points) {
    ElemSet tile;
    bool in = true;
    for (const Elem& a : A) {
      Elem p = g.mul(b, a);
      if (!bset.count(p)) {
        in = false;
        break;
      }
      tile.insert(std::move(p));
    }
    if (!in) continue;
    demands.push_back(b);
    demand_tiles.push_back(std::move(tile));
  }

  const size_t nd = demands.size(), np = points.size();
  RhoResult res;
  res.exact = true;
  if (nd == 0) return res;

  std::vector<uint32_t> pm(np, 0);
  std::vector<std::vector<int>> demand_points(nd);
  for (size_t j = 0; j < np; ++j)
    for (size_t i = 0; i < nd; ++i) {
      bool meets = false;
      for (const Elem& a : A)
        if (demand_tiles[i].count(g.mul(points[j], a))) {
          meets = true;
          break;
        }
      if (meets) {
        pm[j] |= uint32_t(1) << i;
        demand_points[i].push_back(static_cast<int>(j));
      }
    }
  for (size_t i = 0; i < nd; ++i)
    if (demand_points[i].empty())
      throw SpecError("rho demand admits no covering point");

  uint32_t all = (nd >= 32) ? ~uint32_t(0) : ((uint32_t(1) << nd) - 1);
  int maxcov = 1;
  for (size_t j = 0; j < np; ++j)
    maxcov = std::max(maxcov, std::popcount(pm[j]));

  // greedy cover seeds the bound
  std::vector<int> best_pick, cur;
  uint32_t cov = 0;
  while (cov != all) {
    int bj = -1, bc = 0;
    for (size_t j = 0; j < np; ++j) {
      int c = std::popcount(pm[j] & ~cov);
      if (c > bc) {
        bc = c;
        bj = static_cast<int>(j);
      }
    }
    best_pick.push_back(bj);
    cov |= pm[bj];
  }
  int64_t best = static_cast<int64_t>(best_pick.size());

  std::function<void(uint32_t)> go = [&](uint32_t covd) {
    if (covd == all) {
      if (static_cast<int64_t>(cur.size()) < best) {
        best = static_cast<int64_t>(cur.size());
        best_pick = cur;
      }
      return;
    }
    int64_t rem = std::popcount(all & ~covd);
    int64_t lb = (rem + maxcov - 1) / maxcov;
    if (static_cast<int64_t>(cur.size()) + lb >= best) return;
    size_t pick = 0, fewest = SIZE_MAX;
    for (size_t i = 0; i < nd; ++i) {
      if (covd >> i & 1) continue;
      if (demand_points[i].size() < fewest) {
        fewest = demand_points[i].size();
        pick = i;
      }
    }
    for (int j : demand_points[pick]) {
      cur.push_back(j);
      go(covd | pm[j]);
      cur.pop_back();
    }
  };
  go(0);

  res.value = best;
  for (int j : best_pick) res.witness.push_back(points[j]);
  sort_enumeration(g, res.witness);
  return res;
}

RhoResult rho_greedy(const Group& g, const std::vector<Elem>& B,
                     const std::vector<Elem>& A) {
  if (A.empty() || B.empty()) throw SpecError("rho needs nonempty sets");
  if (!contains_identity(g, A))
    throw SpecError("rho needs the identity in the probe tile");
  RhoResult res;
  res.witness = max_disjoint(g, A, B);
  res.value = static_cast<int64_t>(res.witness.size());
  return res;
}

RhoResult rho_cluster_bound(const Group& g, const std::vector<Elem>& B,
                            const std::vector<Elem>& A) {
  if (A.empty() || B.empty()) throw SpecError("rho needs nonempty sets");
  if (!contains_identity(g, A))
    throw SpecError("rho needs the identity in the probe tile");
  std::vector<Elem> sorted = B;
  sort_enumeration(g, sorted);
  ElemSet bset(sorted.begin(), sorted.end());
  std::vector<Elem> shape = set_product(g, A, set_inverse(g, A));
  ElemSet taken;
  RhoResult res;
  for (const Elem& lam : sorted) {
    bool fits = true;
    for (const Elem& a : A)
      if (!bset.count(g.mul(lam, a))) {
        fits = false;
        break;
      }
    if (!fits) continue;
    std::vector<Elem> cells;
    cells.reserve(shape.size());
    bool fresh = true;
    for (const Elem& s : shape) {
      Elem c = g.mul(lam, s);
      if (taken.count(c)) {
        fresh = false;
        break;
      }
      cells.push_back(std::move(c));
    }
    if (!fresh) continue;
    for (Elem& c : cells) taken.insert(std::move(c));
    res.witness.push_back(lam);
  }
  res.value = static_cast<int64_t>(res.witness.size());
  return res;
}

GrowthSequence build_growth_sequence(const GroupPtr& gp, int64_t seed_radius,
                                     const std::vector<GrowthTarget>& targets) {
  if (!gp) throw SpecError("growth sequence needs a group");
  if (seed_radius < 1) throw SpecError("growth seed needs radius >= 1");
  if (targets.empty()) throw SpecError("growth sequence needs targets");
  const Group& g = *gp;
  GrowthSequence gs;
  gs.group = gp;
  gs.targets = targets;
  gs.radii.push_back(seed_radius);

  bool zline = g.kind() == Group::Kind::Zd && g.identity().vec.size() == 1;
  for (size_t n = 1; n <= targets.size(); ++n) {
    int64_t prev = gs.radii.back();
    // the new ball must swallow the previous one times every difference set
    int64_t start = prev;
    for (size_t j = 0; j < n; ++j) start += 2 * gs.radii[j];
    int64_t chosen = -1, req = 0, cert = 0;
    if (zline) {
      int64_t spacing = 4 * prev + 1;
      for (int64_t r = start;; ++r) {
        req = demand_bits(targets[n - 1], 2 * r + 1);
        cert = 1 + 2 * ((r - prev) / spacing);
        if (cert >= req) {
          chosen = r;
          break;
        }
        if (r - start > (int64_t(1) << 24))
          throw SpecError("growth level failed to certify");
      }
    } else {
      std::vector<Elem> A = g.ball(prev);
      std::vector<Elem> shape = set_product(g, A, set_inverse(g, A));
      for (int64_t r = start;; ++r) {
        std::vector<Elem> region = g.ball(r);
        req = demand_bits(targets[n - 1],
                          static_cast<int64_t>(region.size()));
        cert = cluster_count_in_ball(g, A, shape, r, region);
        if (cert >= req) {
          chosen = r;
          break;
        }
        if (r - start > 4096)
          throw SpecError("growth level failed to certify");
      }
    }
    gs.radii.push_back(chosen);
    gs.required.push_back(req);
    gs.certified.push_back(cert);
  }
  return gs;
}

Blueprint build_blueprint(const GrowthSequence& gs) {
  if (!gs.group) throw SpecError("blueprint needs a group");
  int top = static_cast<int>(gs.radii.size()) - 1;
  if (top < 1) throw SpecError("blueprint needs at least one level");
  const Group& g = *gs.group;

  Blueprint bp;
  bp.group = gs.group;
  bp.growth = gs;
  bp.seed = g.ball(gs.radii[0]);
  Elem prev_a = g.identity(), prev_b = g.identity();

  for (int n = 1; n <= top; ++n) {
    BlueprintLevel lv;
    lv.delta.assign(n, {});
    int64_t rn = gs.radii[n];
    std::vector<Elem> region = g.ball(rn);

    std::vector<Elem> covered;
    std::vector<Elem> probe{g.identity()};  // grows into the difference chain
    for (int k = n - 1; k >= 0; --k) {
      std::vector<Elem> legal =
          (k == n - 1) ? region : shrink_into_ball(g, rn, probe);
      std::vector<Elem> slots = max_disjoint(g, bp.tile(k), legal, covered);
      for (const Elem& s : slots)
        for (const Elem& f : bp.tile(k)) covered.push_back(g.mul(s, f));
      lv.delta[k] = std::move(slots);
      if (k > 0) {
        const std::vector<Elem>& fk = bp.tile(k);
        probe = set_product(g, set_product(g, set_inverse(g, fk), fk), probe);
      }
    }

    const std::vector<Elem>& head = lv.delta[n - 1];
    if (head.size() < 3) throw SpecError("top transversal too thin");
    if (!(head[0] == g.identity()))
      throw SpecError("top transversal must start at the identity");
    lv.gamma = head[0];
    lv.alpha = head[1];
    lv.beta = head[2];
    lv.a = g.mul(lv.alpha, prev_a);
    lv.b = g.mul(lv.beta, prev_b);
    prev_a = lv.a;
    prev_b = lv.b;
    lv.ledger.assign(head.begin() + 3, head.end());
    if (!lv.ledger.empty()) lv.theta = lv.ledger.front();

    sort_enumeration(g, covered);
    lv.tile = std::move(covered);
    bp.levels.push_back(std::move(lv));
  }
  rebuild_triangle(bp);
  return bp;
}

bool BlueprintVerifyReport::all_confirmed() const {
  for (const BlueprintAxiomReports& ax : levels)
    for (const WitnessReport* r :
         {&ax.disjoint, &ax.dense, &ax.coherent, &ax.uniform, &ax.growth})
      if (r->status != Status::Confirmed) return false;
  return !levels.empty();
}

nlohmann::json BlueprintVerifyReport::to_json(const Group& g) const {
  nlohmann::json out = nlohmann::json::array();
  for (size_t i = 0; i < levels.size(); ++i) {
    nlohmann::json jl;
    jl["level"] = i + 1;
    jl["disjoint"] = levels[i].disjoint.to_json(g);
    jl["dense"] = levels[i].dense.to_json(g);
    jl["coherent"] = levels[i].coherent.to_json(g);
    jl["uniform"] = levels[i].uniform.to_json(g);
    jl["growth"] = levels[i].growth.to_json(g);
    out.push_back(std::move(jl));
  }
  return out;
}

BlueprintVerifyReport verify_blueprint(const Blueprint& bp) {
  if (!bp.group) throw SpecError("blueprint needs a group");
  const Group& g = *bp.group;
  int top = bp.top_level();
  if (top < 1 || bp.growth.radii.size() != static_cast<size_t>(top) + 1)
    throw SpecError("blueprint levels disagree with growth radii");
  if (bp.positions.size() != static_cast<size_t>(top) + 1)
    throw SpecError("blueprint needs one position row per level");
  for (int n = 1; n <= top; ++n)
    if (bp.levels[n - 1].delta.size() != static_cast<size_t>(n))
      throw SpecError("blueprint level has a malformed transversal list");
  int64_t wr = bp.growth.radii.back();

  BlueprintVerifyReport rep;
  rep.levels.resize(top);
  for (BlueprintAxiomReports& ax : rep.levels) {
    ax.disjoint = confirmed({}, wr);
    ax.dense = confirmed({}, wr);
    ax.coherent = confirmed({}, wr);
    ax.uniform = confirmed({}, wr);
    ax.growth = confirmed({}, wr);
  }

  // reaggregate once up front; tampered slots may refuse to, which dooms
  // every uniformity comparison below
  bool triangle_ok = true;
  Blueprint fresh = bp;
  try {
    fresh.positions.clear();
    rebuild_triangle(fresh);
  } catch (const SpecError&) {
    triangle_ok = false;
  }

  ElemSet topcells(bp.tile(top).begin(), bp.tile(top).end());

  Elem pa = g.identity(), pb = g.identity();
  for (int n = 1; n <= top; ++n) {
    BlueprintAxiomReports& ax = rep.levels[n - 1];
    const BlueprintLevel& lv = bp.levels[n - 1];
    const std::vector<Elem>& fn = bp.tile(n);

    // disjoint: window translates of the level tile never overlap
    std::unordered_map<Elem, Elem> owner;  // cell -> slot that placed it
    for (const Elem& d : bp.positions[n])
      for (const Elem& f : fn) {
        Elem c = g.mul(d, f);
        auto [it, inserted] = owner.emplace(c, d);
        if (!inserted && ax.disjoint.status == Status::Confirmed)
          ax.disjoint = refuted_pair(it->second, d, wr);
      }

    // coherent, inside the tile: the chosen sub-tiles split F_n exactly
    {
      ElemSet cells(fn.begin(), fn.end());
      std::unordered_map<Elem, Elem> sub;
      for (int k = 0; k < n && ax.coherent.status == Status::Confirmed; ++k)
        for (const Elem& d : lv.delta[k]) {
          for (const Elem& f : bp.tile(k)) {
            Elem c = g.mul(d, f);
            if (!cells.count(c)) {
              ax.coherent = refuted_at(c, wr);
              break;
            }
            auto [it, inserted] = sub.emplace(c, d);
            if (!inserted) {
              ax.coherent = refuted_pair(it->second, d, wr);
              break;
            }
          }
          if (ax.coherent.status != Status::Confirmed) break;
        }
      if (ax.coherent.status == Status::Confirmed && sub.size() != fn.size())
        for (const Elem& c : fn)
          if (!sub.count(c)) {
            ax.coherent = refuted_at(c, wr);
            break;
          }
    }

    // coherent, across the window: a lower tile that meets a level-n tile
    // must sit wholly inside it
    for (int k = 0; k < n && ax.coherent.status == Status::Confirmed; ++k)
      for (const Elem& p : bp.positions[k]) {
        bool any = false, all = true, same = true;
        Elem who = g.identity();
        bool first = true;
        for (const Elem& f : bp.tile(k)) {
          auto it = owner.find(g.mul(p, f));
          if (it == owner.end()) {
            all = false;
            continue;
          }
          any = true;
          if (first) {
            who = it->second;
            first = false;
          } else if (!(it->second == who)) {
            same = false;
          }
        }
        if (any && (!all || !same)) {
          ax.coherent = refuted_at(p, wr);
          break;
        }
      }

    // dense: window slots thickened by F_n F_n^-1 swallow the ball; a miss
    // only counts where the whole candidate zone is visible in the prefix
    {
      std::vector<Elem> u = set_product(g, bp.positions[n], fn);
      std::vector<Elem> shape = set_product(g, fn, set_inverse(g, fn));
      u = set_product(g, u, set_inverse(g, fn));
      ElemSet uset(u.begin(), u.end());
      for (const Elem& w : g.ball(wr)) {
        if (uset.count(w)) continue;
        bool visible = true;
        for (const Elem& v : shape)
          if (!topcells.count(g.mul(w, v))) {
            visible = false;
            break;
          }
        if (visible) {
          ax.dense = refuted_at(w, wr);
          break;
        }
      }
    }

    // uniform: every window slot carries the same relative slot pattern,
    // and that pattern is the aggregated one
    if (!triangle_ok) {
      ax.uniform = refuted_at(g.identity(), wr);
    } else {
      for (int k = 0; k <= n && ax.uniform.status == Status::Confirmed;
           ++k) {
        std::unordered_map<Elem, std::vector<Elem>> rel;
        for (const Elem& p : bp.positions[k]) {
          auto it = owner.find(p);
          if (it == owner.end()) continue;  // outside every level-n tile
          rel[it->second].push_back(g.mul(g.inv(it->second), p));
        }
        const std::vector<Elem>& want = fresh.dd[n][k];
        for (const Elem& d : bp.positions[n]) {
          std::vector<Elem>& got = rel[d];
          sort_enumeration(g, got);
          if (got != want) {
            ax.uniform = refuted_at(d, wr);
            break;
          }
        }
      }
    }

    // growth: three named leading slots, spares forming the ledger, and the
    // running a/b products
    {
      const std::vector<Elem>& head = lv.delta[n - 1];
      if (head.size() < 3 || !(head[0] == g.identity())) {
        ax.growth = refuted_at(head.empty() ? g.identity() : head[0], wr);
      } else {
        bool names = head[0] == lv.gamma && head[1] == lv.alpha &&
                     head[2] == lv.beta &&
                     lv.ledger ==
                         std::vector<Elem>(head.begin() + 3, head.end()) &&
                     lv.theta.has_value() == !lv.ledger.empty() &&
                     (!lv.theta || *lv.theta == lv.ledger.front());
        Elem wa = g.mul(lv.alpha, pa), wb = g.mul(lv.beta, pb);
        if (!names || !(lv.a == wa) || !(lv.b == wb))
          ax.growth = refuted_at(head[0], wr);
      }
      // keep checking later levels against the stored chain
      pa = lv.a;
      pb = lv.b;
    }
  }
  return rep;
}

nlohmann::json Blueprint::to_json() const {
  nlohmann::json out;
  out["group"] = group->to_json();
  nlohmann::json jg;
  jg["radii"] = growth.radii;
  jg["targets"] = nlohmann::json::array();
  for (const GrowthTarget& t : growth.targets)
    jg["targets"].push_back({{"coeff", t.coeff}, {"degree", t.degree}});
  jg["required"] = growth.required;
  jg["certified"] = growth.certified;
  out["growth"] = std::move(jg);
  out["seed"] = nlohmann::json::array();
  for (const Elem& e : seed) out["seed"].push_back(group->print(e));
  out["levels"] = nlohmann::json::array();
  for (const BlueprintLevel& lv : levels) {
    nlohmann::json jl;
    jl["F"] = nlohmann::json::array();
    for (const Elem& e : lv.tile) jl["F"].push_back(group->print(e));
    jl["delta"] = nlohmann::json::array();
    for (const auto& row : lv.delta) {
      nlohmann::json jr = nlohmann::json::array();
      for (const Elem& e : row) jr.push_back(group->print(e));
      jl["delta"].push_back(std::move(jr));
    }
    jl["gamma"] = group->print(lv.gamma);
    jl["alpha"] = group->print(lv.alpha);
    jl["beta"] = group->print(lv.beta);
    jl["a"] = group->print(lv.a);
    jl["b"] = group->print(lv.b);
    jl["ledger"] = nlohmann::json::array();
    for (const Elem& e : lv.ledger) jl["ledger"].push_back(group->print(e));
    if (lv.theta)
      jl["theta"] = group->print(*lv.theta);
    else
      jl["theta"] = nullptr;
    out["levels"].push_back(std::move(jl));
  }
  out["positions"] = nlohmann::json::array();
  for (const auto& row : positions) {
    nlohmann::json jr = nlohmann::json::array();
    for (const Elem& e : row) jr.push_back(group->print(e));
    out["positions"].push_back(std::move(jr));
  }
  return out;
}

Blueprint Blueprint::from_json(const nlohmann::json& j) {
  Blueprint bp;
  bp.group = Group::from_json(j.at("group"));
  const Group& g = *bp.group;
  const nlohmann::json& jg = j.at("growth");
  bp.growth.group = bp.group;
  bp.growth.radii = jg.at("radii").get<std::vector<int64_t>>();
  for (const nlohmann::json& jt : jg.at("targets"))
    bp.growth.targets.push_back(
        {jt.at("coeff").get<int64_t>(), jt.at("degree").get<int>()});
  bp.growth.required = jg.at("required").get<std::vector<int64_t>>();
  bp.growth.certified = jg.at("certified").get<std::vector<int64_t>>();
  for (const nlohmann::json& je : j.at("seed"))
    bp.seed.push_back(g.parse(je.get<std::string>()));
  for (const nlohmann::json& jl : j.at("levels")) {
    BlueprintLevel lv;
    for (const nlohmann::json& je : jl.at("F"))
      lv.tile.push_back(g.parse(je.get<std::string>()));
    for (const nlohmann::json& jr : jl.at("delta")) {
      std::vector<Elem> row;
      for (const nlohmann::json& je : jr)
        row.push_back(g.parse(je.get<std::string>()));
      lv.delta.push_back(std::move(row));
    }
    lv.gamma = g.parse(jl.at("gamma").get<std::string>());
    lv.alpha = g.parse(jl.at("alpha").get<std::string>());
    lv.beta = g.parse(jl.at("beta").get<std::string>());
    lv.a = g.parse(jl.at("a").get<std::string>());
    lv.b = g.parse(jl.at("b").get<std::string>());
    for (const nlohmann::json& je : jl.at("ledger"))
      lv.ledger.push_back(g.parse(je.get<std::string>()));
    if (!jl.at("theta").is_null())
      lv.theta = g.parse(jl.at("theta").get<std::string>());
    bp.levels.push_back(std::move(lv));
  }
  for (const nlohmann::json& jr : j.at("positions")) {
    std::vector<Elem> row;
    for (const nlohmann::json& je : jr)
      row.push_back(g.parse(je.get<std::string>()));
    bp.positions.push_back(std::move(row));
  }
  if (bp.levels.empty()) throw SpecError("blueprint needs at least one level");
  for (size_t n = 0; n < bp.levels.size(); ++n)
    if (bp.levels[n].delta.size() != n + 1)
      throw SpecError("blueprint level has a malformed transversal list");
  rebuild_triangle(bp);
  return bp;
}

GrowthSequence standard_z_growth() {
  return build_growth_sequence(Group::zd(1), 1,
                               {{32, 4}, {16, 0}, {16, 0}});
}

const Blueprint& standard_z_blueprint() {
  static const Blueprint bp = build_blueprint(standard_z_growth());
  return bp;
}

}  // namespace subshift
