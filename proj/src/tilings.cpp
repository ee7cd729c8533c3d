#include "subshift/tilings.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace subshift {
namespace {

using ElemSet = std::unordered_set<Elem>;

int64_t ipow_checked(int64_t base, int exp) {
  int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > (int64_t(1) << 40) / std::max<int64_t>(base, 1))
      throw SpecError("tiling size overflows");
    v *= base;
  }
  return v;
}

Elem zvec(const std::vector<int64_t>& v) {
  Elem e;
  e.vec = v;
  return e;
}

int64_t reach(const Group& g, const std::vector<Elem>& tile) {
  int64_t r = 0;
  for (const Elem& f : tile) r = std::max(r, g.length(f));
  return r;
}

std::vector<Elem> left_translate(const Group& g, const Elem& a,
                                 const std::vector<Elem>& s) {
  std::vector<Elem> out;
  out.reserve(s.size());
  for (const Elem& f : s) out.push_back(g.mul(a, f));
  sort_enumeration(g, out);
  return out;
}

// every vector in [lo,hi]^d with entries from the given value list
std::vector<Elem> value_cube(const Group& g, const std::vector<int64_t>& values,
                             int d) {
  std::vector<Elem> out;
  std::vector<int64_t> cur(d, 0);
  std::vector<size_t> pick(d, 0);
  while (true) {
    for (int i = 0; i < d; ++i) cur[i] = values[pick[i]];
    out.push_back(zvec(cur));
    int i = d - 1;
    while (i >= 0 && ++pick[i] == values.size()) pick[i--] = 0;
    if (i < 0) break;
  }
  sort_enumeration(g, out);
  return out;
}

std::vector<int64_t> range_values(int64_t lo, int64_t hi) {
  std::vector<int64_t> v;
  v.reserve(hi - lo + 1);
  for (int64_t a = lo; a <= hi; ++a) v.push_back(a);
  return v;
}

int64_t cofinal_prefix_count(const Group& g, const ElemSet& tile) {
  int64_t n = static_cast<int64_t>(tile.size());
  for (int64_t i = 0; i <= n; ++i)
    if (!tile.count(g.enumerate(i))) return i;
  return n;
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

std::vector<int64_t> lattice_residue(const Elem& e, int64_t mod) {
  std::vector<int64_t> r(e.vec.size());
  for (size_t i = 0; i < e.vec.size(); ++i)
    r[i] = ((e.vec[i] % mod) + mod) % mod;
  return r;
}

void validate_prefix(const CccPrefix& p) {
  if (!p.group) throw SpecError("tiling prefix has no group");
  if (p.levels.empty()) throw SpecError("tiling prefix has no levels");
  if (p.cofinal_radii.size() != p.levels.size())
    throw SpecError("tiling prefix needs one cofinal radius per level");
  for (const CccLevel& l : p.levels) {
    if (l.tile.empty()) throw SpecError("tiling level has an empty tile");
    if (l.decomp.empty())
      throw SpecError("tiling level has an empty decomposition");
    if (l.lattice) {
      if (l.modulus < 1) throw SpecError("lattice modulus must be positive");
      if (p.group->kind() != Group::Kind::Zd)
        throw SpecError("lattice transversals need Z^d");
    } else if (l.delta.empty()) {
      throw SpecError("tiling level has an empty transversal");
    }
  }
}

}  // namespace

CccPrefix zd_ccc(int d, int64_t m, int levels, bool one_sided) {
  if (d < 1) throw SpecError("zd_ccc needs d >= 1");
  if (m < 3 || m % 2 == 0) throw SpecError("zd_ccc needs odd m >= 3");
  if (levels < 0) throw SpecError("zd_ccc needs levels >= 0");
  int64_t side = ipow_checked(m, levels);
  if (ipow_checked(side, d) > (int64_t(1) << 24))
    throw SpecError("zd_ccc top tile too large");
  GroupPtr g = Group::zd(d);
  CccPrefix p;
  p.group = g;
  for (int n = 0; n <= levels; ++n) {
    int64_t sz = ipow_checked(m, n);
    CccLevel l;
    l.lattice = true;
    l.modulus = sz;
    l.tile = one_sided ? value_cube(*g, range_values(0, sz - 1), d)
                       : value_cube(*g, range_values(-(sz - 1) / 2, (sz - 1) / 2), d);
    if (n == 0) {
      l.decomp = {g->identity()};
    } else {
      int64_t step = sz / m;
      std::vector<int64_t> vals;
      for (int64_t i = one_sided ? 0 : -(m - 1) / 2;
           i <= (one_sided ? m - 1 : (m - 1) / 2); ++i)
        vals.push_back(i * step);
      l.decomp = value_cube(*g, vals, d);
    }
    ElemSet tset(l.tile.begin(), l.tile.end());
    p.cofinal_radii.push_back(cofinal_prefix_count(*g, tset));
    p.levels.push_back(std::move(l));
  }
  return p;
}

FreeExtension free_tile_extend(const GroupPtr& f, const std::vector<Elem>& S,
                               const Elem& z) {
  if (!f || f->kind() != Group::Kind::Free)
    throw SpecError("free_tile_extend needs a free group");
  if (z == f->identity()) throw SpecError("cannot absorb the identity");
  ElemSet sset(S.begin(), S.end());
  if (!sset.count(f->identity()))
    throw SpecError("tile must contain the identity");
  if (sset.count(z)) throw SpecError("word to absorb is already inside");
  Elem sigma;
  sigma.word = z.word.substr(z.word.size() - 1);
  Elem sigma_inv = f->inv(sigma);
  int64_t k = 0;
  Elem power = f->identity();
  for (int64_t j = 1; j <= static_cast<int64_t>(S.size()); ++j) {
    power = f->mul(power, sigma_inv);
    if (sset.count(power)) k = j;
  }
  Elem w = z;
  for (int64_t j = 0; j < k; ++j) w = f->mul(w, sigma);
  FreeExtension out;
  out.w = w;
  out.tiles = S;
  for (const Elem& s : S) {
    Elem ws = f->mul(w, s);
    if (sset.count(ws)) throw SpecError("tile extension collides with itself");
    out.tiles.push_back(ws);
  }
  sort_enumeration(*f, out.tiles);
  return out;
}

CccPrefix free_ccc(int rank, int levels, const std::vector<Elem>& seed) {
  GroupPtr f = Group::free_group(rank);
  if (levels < 0) throw SpecError("free_ccc needs levels >= 0");
  std::vector<Elem> S = seed.empty() ? std::vector<Elem>{f->identity()} : seed;
  sort_enumeration(*f, S);
  std::vector<std::vector<Elem>> tiles = {S};
  std::vector<Elem> ws;
  for (int n = 1; n <= levels; ++n) {
    ElemSet sset(S.begin(), S.end());
    if (!sset.count(f->identity()))
      throw SpecError("free_ccc seed must contain the identity");
    Elem z;
    bool found = false;
    for (int64_t i = 0; i < (int64_t(1) << 22); ++i) {
      Elem e = f->enumerate(i);
      if (sset.count(e)) continue;
      if (e.word.size() == 1 || sset.count(f->parse(e.word.substr(0, e.word.size() - 1)))) {
        z = e;
        found = true;
        break;
      }
    }
    if (!found) throw SpecError("free_ccc found nothing to absorb");
    FreeExtension ext = free_tile_extend(f, S, z);
    ws.push_back(ext.w);
    S = ext.tiles;
    tiles.push_back(S);
  }
  CccPrefix p;
  p.group = f;
  // transversals multiply out top down, leftmost factor first
  std::vector<std::vector<Elem>> deltas(levels + 1);
  deltas[levels] = {f->identity()};
  for (int n = levels - 1; n >= 0; --n) {
    for (const Elem& d : deltas[n + 1])
      for (const Elem& c : {f->identity(), ws[n]})
        deltas[n].push_back(f->mul(d, c));
    sort_enumeration(*f, deltas[n]);
  }
  for (int n = 0; n <= levels; ++n) {
    CccLevel l;
    l.tile = tiles[n];
    l.delta = deltas[n];
    l.decomp = n == 0 ? std::vector<Elem>{f->identity()}
                      : std::vector<Elem>{f->identity(), ws[n - 1]};
    sort_enumeration(*f, l.decomp);
    ElemSet tset(l.tile.begin(), l.tile.end());
    p.cofinal_radii.push_back(cofinal_prefix_count(*f, tset));
    p.levels.push_back(std::move(l));
  }
  return p;
}

CccPrefix rf_ccc(int64_t m, int levels, int d) {
  if (m < 2) throw SpecError("rf_ccc needs m >= 2");
  if (d < 1) throw SpecError("rf_ccc needs d >= 1");
  if (levels < 0) throw SpecError("rf_ccc needs levels >= 0");
  if (ipow_checked(ipow_checked(m, levels), d) > (int64_t(1) << 24))
    throw SpecError("rf_ccc top tile too large");
  GroupPtr g = Group::zd(d);
  CccPrefix p;
  p.group = g;
  std::vector<Elem> F = {g->identity()};
  {
    CccLevel l;
    l.tile = F;
    l.lattice = true;
    l.modulus = 1;
    l.decomp = {g->identity()};
    p.levels.push_back(l);
    p.cofinal_radii.push_back(1);
  }
  int64_t index = ipow_checked(m, d);
  for (int n = 1; n <= levels; ++n) {
    int64_t prev_mod = p.levels[n - 1].modulus;
    ElemSet fset(F.begin(), F.end());
    Elem missed;
    for (int64_t i = 0;; ++i) {
      missed = g->enumerate(i);
      if (!fset.count(missed)) break;
    }
    // the unique old tile cell congruent to the missed element
    Elem anchor;
    bool found = false;
    for (const Elem& c : F) {
      bool same = true;
      for (int i = 0; i < d; ++i)
        same = same && (missed.vec[i] - c.vec[i]) % prev_mod == 0;
      if (same) {
        anchor = c;
        found = true;
        break;
      }
    }
    if (!found) throw SpecError("rf_ccc tile is not a transversal");
    Elem steered = g->mul(missed, g->inv(anchor));
    std::vector<Elem> delta = {g->identity(), steered};
    std::map<std::vector<int64_t>, bool> used;
    auto coset = [&](const Elem& e) {
      std::vector<int64_t> r(d);
      for (int i = 0; i < d; ++i)
        r[i] = (((e.vec[i] / prev_mod) % m) + m) % m;
      return r;
    };
    used[coset(delta[0])] = true;
    if (used.count(coset(steered)))
      throw SpecError("rf_ccc steered representative collides");
    used[coset(steered)] = true;
    for (int64_t i = 0; static_cast<int64_t>(delta.size()) < index; ++i) {
      Elem v = g->enumerate(i);
      Elem lambda = v;
      for (int c = 0; c < d; ++c) lambda.vec[c] *= prev_mod;
      if (used.count(coset(lambda))) continue;
      used[coset(lambda)] = true;
      delta.push_back(lambda);
    }
    sort_enumeration(*g, delta);
    std::vector<Elem> next;
    next.reserve(delta.size() * F.size());
    ElemSet seen;
    for (const Elem& dd : delta)
      for (const Elem& c : F) {
        Elem u = g->mul(dd, c);
        if (!seen.insert(u).second)
          throw SpecError("rf_ccc level overlaps itself");
        next.push_back(u);
      }
    sort_enumeration(*g, next);
    F = std::move(next);
    CccLevel l;
    l.tile = F;
    l.lattice = true;
    l.modulus = prev_mod * m;
    l.decomp = delta;
    p.levels.push_back(std::move(l));
    ElemSet tset(F.begin(), F.end());
    p.cofinal_radii.push_back(cofinal_prefix_count(*g, tset));
  }
  return p;
}

bool CccVerifyReport::all_confirmed() const {
  for (const CccAxiomReports& l : levels)
    for (const WitnessReport* r :
         {&l.disjoint, &l.cover, &l.coherent, &l.centered, &l.cofinal})
      if (r->status != Status::Confirmed) return false;
  return true;
}

nlohmann::json CccVerifyReport::to_json(const Group& g) const {
  nlohmann::json out;
  out["all_confirmed"] = all_confirmed();
  out["levels"] = nlohmann::json::array();
  for (const CccAxiomReports& l : levels) {
    nlohmann::json jl;
    jl["disjoint"] = l.disjoint.to_json(g);
    jl["cover"] = l.cover.to_json(g);
    jl["coherent"] = l.coherent.to_json(g);
    jl["centered"] = l.centered.to_json(g);
    jl["cofinal"] = l.cofinal.to_json(g);
    out["levels"].push_back(std::move(jl));
  }
  return out;
}

CccVerifyReport verify_ccc(const CccPrefix& p, int64_t window_radius) {
  validate_prefix(p);
  const Group& g = *p.group;
  size_t top = p.levels.size() - 1;
  bool any_lattice = false;
  for (const CccLevel& l : p.levels) any_lattice = any_lattice || l.lattice;
  if (any_lattice && window_radius < reach(g, p.levels[top].tile))
    throw SpecError("window smaller than one tile");
  std::vector<Elem> window;
  if (any_lattice) window = g.ball(window_radius);

  // explicit transversals are judged against the top level's footprint
  if (p.levels[top].lattice)
    for (const CccLevel& l : p.levels)
      if (!l.lattice)
        throw SpecError("explicit transversals need an explicit top level");
  std::vector<Elem> target;
  if (!p.levels[top].lattice) {
    ElemSet seen;
    for (const Elem& d : p.levels[top].delta)
      for (const Elem& f : p.levels[top].tile) {
        Elem u = g.mul(d, f);
        if (seen.insert(u).second) target.push_back(u);
      }
    sort_enumeration(g, target);
  }
  ElemSet target_set(target.begin(), target.end());

  CccVerifyReport rep;
  int64_t prev_cofinal = -1;
  for (size_t n = 0; n < p.levels.size(); ++n) {
    const CccLevel& l = p.levels[n];
    CccAxiomReports ax;
    ElemSet tile_set(l.tile.begin(), l.tile.end());

    if (l.lattice) {
      std::map<std::vector<int64_t>, std::vector<Elem>> buckets;
      for (const Elem& f : l.tile)
        buckets[lattice_residue(f, l.modulus)].push_back(f);
      ax.disjoint = confirmed({}, window_radius);
      for (const auto& [res, fs] : buckets)
        if (fs.size() > 1) {
          ax.disjoint =
              refuted_pair(g.identity(), g.mul(fs[0], g.inv(fs[1])),
                           window_radius);
          break;
        }
      ax.cover = confirmed({}, window_radius);
      for (const Elem& w : window)
        if (!buckets.count(lattice_residue(w, l.modulus))) {
          ax.cover = refuted_at(w, window_radius);
          break;
        }
    } else {
      std::unordered_map<Elem, Elem> first_rep;
      std::vector<Elem> covered;
      ax.disjoint = confirmed({}, -1);
      for (const Elem& d : l.delta)
        for (const Elem& f : l.tile) {
          Elem u = g.mul(d, f);
          auto [it, fresh] = first_rep.emplace(u, d);
          if (fresh) {
            covered.push_back(u);
          } else if (ax.disjoint.status == Status::Confirmed) {
            ax.disjoint = refuted_pair(it->second, d, -1);
          }
        }
      ax.cover = confirmed({}, -1);
      sort_enumeration(g, covered);
      for (const Elem& u : covered)
        if (!target_set.count(u)) {
          ax.cover = refuted_at(u, -1);
          break;
        }
      if (ax.cover.status == Status::Confirmed)
        for (const Elem& t : target)
          if (!first_rep.count(t)) {
            ax.cover = refuted_at(t, -1);
            break;
          }
    }

    if (n == 0) {
      ax.coherent = l.decomp.size() == 1 && l.decomp[0] == g.identity()
                        ? confirmed({}, -1)
                        : refuted_at(l.decomp[0], -1);
    } else {
      const CccLevel& child = p.levels[n - 1];
      ax.coherent = confirmed({}, -1);
      std::unordered_map<Elem, Elem> piece;
      for (const Elem& c : l.decomp) {
        for (const Elem& f : child.tile) {
          Elem u = g.mul(c, f);
          auto [it, fresh] = piece.emplace(u, c);
          if (!fresh) {
            ax.coherent = refuted_pair(it->second, c, -1);
            break;
          }
          if (!tile_set.count(u)) {
            ax.coherent = refuted_at(u, -1);
            break;
          }
        }
        if (ax.coherent.status != Status::Confirmed) break;
      }
      if (ax.coherent.status == Status::Confirmed &&
          piece.size() != l.tile.size())
        for (const Elem& f : l.tile)
          if (!piece.count(f)) {
            ax.coherent = refuted_at(f, -1);
            break;
          }
      if (ax.coherent.status == Status::Confirmed && l.lattice &&
          child.lattice) {
        int d = static_cast<int>(g.identity().vec.size());
        int64_t q = l.modulus / child.modulus;
        bool ok = l.modulus % child.modulus == 0 &&
                  static_cast<int64_t>(l.decomp.size()) == ipow_checked(q, d);
        for (const Elem& c : l.decomp)
          for (int64_t coord : c.vec) ok = ok && coord % child.modulus == 0;
        if (!ok) ax.coherent = refuted_at(l.decomp.back(), -1);
      }
      if (ax.coherent.status == Status::Confirmed && !l.lattice &&
          !child.lattice) {
        ElemSet child_delta(child.delta.begin(), child.delta.end());
        std::unordered_map<Elem, Elem> prod;
        for (const Elem& d : l.delta) {
          for (const Elem& c : l.decomp) {
            Elem u = g.mul(d, c);
            auto [it, fresh] = prod.emplace(u, d);
            if (!fresh || !child_delta.count(u)) {
              ax.coherent = refuted_at(u, -1);
              break;
            }
          }
          if (ax.coherent.status != Status::Confirmed) break;
        }
        if (ax.coherent.status == Status::Confirmed &&
            prod.size() != child.delta.size())
          ax.coherent = refuted_at(child.delta.back(), -1);
      }
    }

    bool centered = tile_set.count(g.identity());
    if (!l.lattice) {
      bool in_delta = false;
      for (const Elem& d : l.delta) in_delta = in_delta || d == g.identity();
      centered = centered && in_delta;
    }
    ax.centered = centered ? confirmed({g.identity()}, -1)
                           : refuted_at(g.identity(), -1);

    int64_t j = cofinal_prefix_count(g, tile_set);
    bool cof = j == p.cofinal_radii[n] && (n == 0 || j > prev_cofinal);
    if (cof)
      ax.cofinal = confirmed(
          j > 0 ? std::vector<Elem>{g.enumerate(j - 1)} : std::vector<Elem>{},
          -1);
    else
      ax.cofinal = refuted_at(g.enumerate(j), -1);
    prev_cofinal = j;

    rep.levels.push_back(std::move(ax));
  }
  return rep;
}

CccPrefix translate_tiling(const CccPrefix& p, size_t level, const Elem& d0,
                           int64_t window_radius) {
  validate_prefix(p);
  if (level >= p.levels.size()) throw SpecError("no such tiling level");
  const Group& g = *p.group;
  CccPrefix out = p;
  CccLevel& l = out.levels[level];
  l.tile = left_translate(g, d0, l.tile);
  l.decomp = left_translate(g, d0, l.decomp);
  Elem d0_inv = g.inv(d0);
  if (l.lattice) {
    // the shifted transversal is no lattice; materialize it on the window
    std::vector<Elem> made;
    int64_t cap = window_radius + reach(g, p.levels[level].tile) + g.length(d0);
    for (const Elem& w : g.ball(cap)) {
      bool on = true;
      for (int64_t c : w.vec) on = on && c % l.modulus == 0;
      if (on) made.push_back(g.mul(w, d0_inv));
    }
    sort_enumeration(g, made);
    l.lattice = false;
    l.modulus = 0;
    l.delta = std::move(made);
  } else {
    for (Elem& d : l.delta) d = g.mul(d, d0_inv);
    sort_enumeration(g, l.delta);
  }
  if (level + 1 < out.levels.size()) {
    for (Elem& c : out.levels[level + 1].decomp) c = g.mul(c, d0_inv);
    sort_enumeration(g, out.levels[level + 1].decomp);
  }
  ElemSet tset(l.tile.begin(), l.tile.end());
  out.cofinal_radii[level] = cofinal_prefix_count(g, tset);
  return out;
}

CccPrefix recenter(const CccPrefix& p) {
  validate_prefix(p);
  if (p.group->kind() != Group::Kind::Zd)
    throw SpecError("recenter works on Z^d prefixes");
  for (const CccLevel& l : p.levels)
    if (!l.lattice) throw SpecError("recenter works on lattice transversals");
  const Group& g = *p.group;
  int d = static_cast<int>(g.identity().vec.size());
  CccPrefix out = p;
  std::vector<std::vector<int64_t>> centers(p.levels.size());
  for (size_t n = 0; n < p.levels.size(); ++n) {
    std::vector<int64_t> lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = hi[i] = p.levels[n].tile[0].vec[i];
      for (const Elem& f : p.levels[n].tile) {
        lo[i] = std::min(lo[i], f.vec[i]);
        hi[i] = std::max(hi[i], f.vec[i]);
      }
    }
    std::vector<int64_t> c(d);
    for (int i = 0; i < d; ++i) c[i] = lo[i] + (hi[i] - lo[i]) / 2;
    centers[n] = c;
    Elem shift = g.inv(zvec(c));
    out.levels[n].tile = left_translate(g, shift, p.levels[n].tile);
    if (n > 0) {
      std::vector<Elem> dec;
      for (const Elem& e : p.levels[n].decomp) {
        std::vector<int64_t> v(d);
        for (int i = 0; i < d; ++i)
          v[i] = e.vec[i] + centers[n - 1][i] - c[i];
        dec.push_back(zvec(v));
      }
      sort_enumeration(g, dec);
      out.levels[n].decomp = std::move(dec);
    }
    ElemSet tset(out.levels[n].tile.begin(), out.levels[n].tile.end());
    out.cofinal_radii[n] = cofinal_prefix_count(g, tset);
  }
  return out;
}

nlohmann::json CccPrefix::to_json() const {
  nlohmann::json out;
  out["group"] = group->to_json();
  out["levels"] = nlohmann::json::array();
  for (const CccLevel& l : levels) {
    nlohmann::json jl;
    jl["F"] = nlohmann::json::array();
    for (const Elem& f : l.tile) jl["F"].push_back(group->print(f));
    jl["delta_kind"] = l.lattice ? "lattice" : "window";
    if (l.lattice) {
      jl["delta"] = l.modulus;
    } else {
      jl["delta"] = nlohmann::json::array();
      for (const Elem& d : l.delta) jl["delta"].push_back(group->print(d));
    }
    jl["decomp"] = nlohmann::json::array();
    for (const Elem& c : l.decomp) jl["decomp"].push_back(group->print(c));
    out["levels"].push_back(std::move(jl));
  }
  out["cofinal_radii"] = cofinal_radii;
  return out;
}

CccPrefix CccPrefix::from_json(const nlohmann::json& j) {
  CccPrefix p;
  p.group = Group::from_json(j.at("group"));
  for (const nlohmann::json& jl : j.at("levels")) {
    CccLevel l;
    for (const nlohmann::json& f : jl.at("F"))
      l.tile.push_back(p.group->parse(f.get<std::string>()));
    std::string kind = jl.at("delta_kind").get<std::string>();
    if (kind == "lattice") {
      l.lattice = true;
      l.modulus = jl.at("delta").get<int64_t>();
    } else if (kind == "window") {
      for (const nlohmann::json& d : jl.at("delta"))
        l.delta.push_back(p.group->parse(d.get<std::string>()));
    } else {
      throw SpecError("unknown transversal kind " + kind);
    }
    for (const nlohmann::json& c : jl.at("decomp"))
      l.decomp.push_back(p.group->parse(c.get<std::string>()));
    p.levels.push_back(std::move(l));
  }
  p.cofinal_radii = j.at("cofinal_radii").get<std::vector<int64_t>>();
  validate_prefix(p);
  return p;
}

}  // namespace subshift
