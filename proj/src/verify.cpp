#include "subshift/verify.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace subshift {

std::string status_string(Status s) {
  switch (s) {
    case Status::Confirmed: return "ConfirmedOnWindow";
    case Status::Refuted: return "Refuted";
    case Status::Inconclusive: return "Inconclusive";
  }
  throw SpecError("bad status");
}

Status status_from_string(const std::string& s) {
  if (s == "ConfirmedOnWindow") return Status::Confirmed;
  if (s == "Refuted") return Status::Refuted;
  if (s == "Inconclusive") return Status::Inconclusive;
  throw SpecError("unknown status: " + s);
}

nlohmann::json WitnessReport::to_json(const Group& g) const {
  nlohmann::json j;
  j["status"] = status_string(status);
  j["window_radius"] = window_radius;
  if (witness) {
    auto arr = nlohmann::json::array();
    for (const auto& t : *witness) arr.push_back(g.print(t));
    j["witness"] = std::move(arr);
  }
  if (counterexample) j["counterexample"] = g.print(*counterexample);
  if (counterexample_pair)
    j["counterexample"] = nlohmann::json::array(
        {g.print(counterexample_pair->first),
         g.print(counterexample_pair->second)});
  if (searched_radius) j["searched_radius"] = *searched_radius;
  return j;
}

WitnessReport WitnessReport::from_json(const nlohmann::json& j,
                                       const Group& g) {
  WitnessReport r;
  try {
    r.status = status_from_string(j.at("status").get<std::string>());
    r.window_radius = j.value("window_radius", int64_t{-1});
    if (j.contains("witness")) {
      std::vector<Elem> w;
      for (const auto& s : j.at("witness"))
        w.push_back(g.parse(s.get<std::string>()));
      r.witness = std::move(w);
    }
    if (j.contains("counterexample")) {
      const auto& c = j.at("counterexample");
      if (c.is_array())
        r.counterexample_pair = {g.parse(c.at(0).get<std::string>()),
                                 g.parse(c.at(1).get<std::string>())};
      else
        r.counterexample = g.parse(c.get<std::string>());
    }
    if (j.contains("searched_radius"))
      r.searched_radius = j.at("searched_radius").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad report: ") + e.what());
  }
  return r;
}

namespace {

class Memo {
 public:
  explicit Memo(const Coloring& x) : x_(x) {}
  CellValue at(const Elem& g) const {
    auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    CellValue v = x_.at(g);
    cache_.emplace(g, v);
    return v;
  }

 private:
  const Coloring& x_;
  mutable std::unordered_map<Elem, CellValue, ElemHash> cache_;
};

// Walks probe candidates in enumeration order up to length r_max.  fn
// returns true to stop early.  Product enumerations are not length sorted,
// so those get materialized and filtered.
void for_each_probe(const Group& g, int64_t r_max, bool one_sided,
                    const std::function<bool(const Elem&)>& fn) {
  if (one_sided && g.kind() != Group::Kind::Zd)
    throw SpecError("one-sided probes require Z");
  if (g.kind() == Group::Kind::Product) {
    for (const auto& t : g.ball(r_max))
      if (fn(t)) return;
    return;
  }
  for (int64_t i = 0;; ++i) {
    if (g.is_finite() && i >= g.size()) return;
    Elem t = g.enumerate(i);
    if (g.length(t) > r_max) return;
    if (one_sided && t.vec[0] < 0) continue;
    if (fn(t)) return;
  }
}

std::vector<Elem> probe_ball(const Group& g, int64_t r, bool one_sided) {
  std::vector<Elem> out;
  for_each_probe(g, r, one_sided, [&](const Elem& t) {
    out.push_back(t);
    return false;
  });
  return out;
}

enum class Probe { Hit, Miss, Undefined };

// Shared skeleton for the forall-g exists-t checks.  probe(g, t) answers
// whether t witnesses g.  undefined_point carries the offending cell out for
// the error message.
struct ExistsScan {
  const Group& group;
  const SearchOpts& opts;
  std::string context;

  WitnessReport run(const std::vector<Elem>& W,
                    const std::function<Probe(const Elem&, const Elem&,
                                              Elem&)>& probe) {
    WitnessReport rep;
    rep.window_radius = opts.window_radius;
    std::unordered_set<Elem, ElemHash> excluded(opts.exceptional.begin(),
                                                opts.exceptional.end());
    std::vector<Elem> hits;      // first witness per g, for minimize
    int64_t confirmed_radius = 0;
    bool any_unknown = false;

    for (const auto& g : W) {
      if (excluded.count(g)) continue;
      bool witnessed = false;
      bool undefined_seen = false;
      Elem bad_point;
      auto attempt = [&](const Elem& t) {
        Elem bp;
        switch (probe(g, t, bp)) {
          case Probe::Hit:
            witnessed = true;
            hits.push_back(t);
            confirmed_radius = std::max(confirmed_radius, group.length(t));
            return true;
          case Probe::Undefined:
            if (!opts.partial)
              throw WindowTooSmallError(group.print(bp), context);
            undefined_seen = true;
            return false;
          case Probe::Miss:
            return false;
        }
        return false;
      };
      if (opts.T) {
        for (const auto& t : *opts.T)
          if (attempt(t)) break;
      } else {
        for_each_probe(group, opts.r_max, opts.one_sided, attempt);
      }
      if (witnessed) continue;
      if (!opts.T) {
        // searches never refute
        rep.status = Status::Inconclusive;
        rep.searched_radius = opts.r_max;
        return rep;
      }
      if (undefined_seen) {
        any_unknown = true;
        continue;
      }
      rep.status = Status::Refuted;
      rep.counterexample = g;
      return rep;
    }

    if (any_unknown) {
      rep.status = Status::Inconclusive;
      rep.searched_radius = opts.T ? -1 : opts.r_max;
      return rep;
    }
    rep.status = Status::Confirmed;
    if (opts.minimize) {
      sort_enumeration(group, hits);
      hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
      rep.witness = std::move(hits);
    } else if (opts.T) {
      std::vector<Elem> w = *opts.T;
      sort_enumeration(group, w);
      rep.witness = std::move(w);
    } else {
      rep.witness = probe_ball(group, confirmed_radius, opts.one_sided);
    }
    return rep;
  }
};

}  // namespace

WitnessReport check_blocking(const Coloring& x, const Elem& s,
                             const std::vector<Elem>& W,
                             const SearchOpts& opts) {
  const Group& g = *x.group();
  if (s == g.identity()) throw SpecError("blocking shift must not be 1_G");
  Memo memo(x);
  ExistsScan scan{g, opts, "checking blocking of " + g.print(s)};
  return scan.run(W, [&](const Elem& gg, const Elem& t, Elem& bad) {
    Elem gt = g.mul(gg, t);
    CellValue a = memo.at(gt);
    if (!a.defined()) {
      bad = gt;
      return Probe::Undefined;
    }
    Elem gst = g.mul(g.mul(gg, s), t);
    CellValue b = memo.at(gst);
    if (!b.defined()) {
      bad = gst;
      return Probe::Undefined;
    }
    return a.bit() != b.bit() ? Probe::Hit : Probe::Miss;
  });
}

WitnessReport check_minimality(const Coloring& x, const std::vector<Elem>& A,
                               const std::vector<Elem>& W,
                               const SearchOpts& opts) {
  const Group& g = *x.group();
  if (A.empty()) throw SpecError("minimality pattern must be nonempty");
  Memo memo(x);
  std::vector<std::pair<Elem, int>> pattern;
  for (const auto& a : A) {
    CellValue v = memo.at(a);
    if (!v.defined())
      throw WindowTooSmallError(g.print(a), "reading the minimality pattern");
    pattern.emplace_back(a, v.bit());
  }
  ExistsScan scan{g, opts, "checking minimality"};
  return scan.run(W, [&](const Elem& gg, const Elem& t, Elem& bad) {
    Elem gt = g.mul(gg, t);
    bool undef = false;
    for (const auto& [a, want] : pattern) {
      Elem gta = g.mul(gt, a);
      CellValue v = memo.at(gta);
      if (!v.defined()) {
        bad = gta;
        undef = true;
        continue;
      }
      if (v.bit() != want) return Probe::Miss;
    }
    return undef ? Probe::Undefined : Probe::Hit;
  });
}

WitnessReport check_slender(const GroupPtr& gp,
                            const std::function<bool(const Elem&)>& member,
                            const std::vector<Elem>& W,
                            const SearchOpts& opts) {
  ExistsScan scan{*gp, opts, "checking slenderness"};
  return scan.run(W, [&](const Elem& gg, const Elem& t, Elem&) {
    return member(gp->mul(gg, t)) ? Probe::Miss : Probe::Hit;
  });
}

namespace {

struct SigMask {
  std::vector<uint64_t> def, val;
  bool operator==(const SigMask&) const = default;
};

struct SigHash {
  size_t operator()(const SigMask& m) const {
    size_t h = 1469598103934665603ull;
    for (uint64_t w : m.def) h = (h ^ w) * 1099511628211ull;
    for (uint64_t w : m.val) h = (h ^ w) * 1099511628211ull;
    return h;
  }
};

bool masks_witness(const SigMask& a, const SigMask& b) {
  for (size_t i = 0; i < a.def.size(); ++i)
    if (a.def[i] & b.def[i] & (a.val[i] ^ b.val[i])) return true;
  return false;
}

// signature of every g in W against the probe list; nullopt bit = undefined
std::vector<SigMask> signatures(const Coloring& x, const std::vector<Elem>& W,
                                const std::vector<Elem>& T, bool partial,
                                const std::string& context) {
  const Group& g = *x.group();
  Memo memo(x);
  size_t words = (T.size() + 63) / 64;
  std::vector<SigMask> sigs;
  sigs.reserve(W.size());
  for (const auto& gg : W) {
    SigMask m{std::vector<uint64_t>(words, 0), std::vector<uint64_t>(words, 0)};
    for (size_t i = 0; i < T.size(); ++i) {
      Elem gt = g.mul(gg, T[i]);
      CellValue v = memo.at(gt);
      if (!v.defined()) {
        if (!partial) throw WindowTooSmallError(g.print(gt), context);
        continue;
      }
      m.def[i / 64] |= uint64_t{1} << (i % 64);
      if (v.bit()) m.val[i / 64] |= uint64_t{1} << (i % 64);
    }
    sigs.push_back(std::move(m));
  }
  return sigs;
}

struct OrthoOutcome {
  bool ok = false;
  bool definite_fail = false;  // false with ok=false: only unknown pairs
  int64_t g0 = -1, g1 = -1;    // indices into W of the first failing pair
};

OrthoOutcome orthogonal_on(const std::vector<SigMask>& sx,
                           const std::vector<SigMask>& sy, size_t probes) {
  // dedupe signatures, remembering the first window index carrying each
  std::unordered_map<SigMask, int64_t, SigHash> ux, uy;
  for (size_t i = 0; i < sx.size(); ++i) ux.try_emplace(sx[i], i);
  for (size_t i = 0; i < sy.size(); ++i) uy.try_emplace(sy[i], i);
  if (ux.size() * uy.size() > 100'000'000ull)
    throw SpecError("orthogonality window too rich; shrink W or T");
  std::vector<uint64_t> used((probes + 63) / 64, 0);
  for (size_t i = 0; i < probes; ++i) used[i / 64] |= uint64_t{1} << (i % 64);
  OrthoOutcome out;
  out.ok = true;
  bool fail_definite = false;
  int64_t b0 = -1, b1 = -1;
  for (const auto& [mx, i] : ux) {
    for (const auto& [my, j] : uy) {
      if (masks_witness(mx, my)) continue;
      out.ok = false;
      // definite failure only when every probe was defined on both sides
      bool all_def = true;
      for (size_t w = 0; w < used.size(); ++w)
        all_def = all_def && (mx.def[w] & my.def[w]) == used[w];
      if (!all_def) continue;
      if (!fail_definite || std::pair(i, j) < std::pair(b0, b1)) {
        fail_definite = true;
        b0 = i;
        b1 = j;
      }
    }
  }
  if (!out.ok) {
    out.definite_fail = fail_definite;
    out.g0 = b0;
    out.g1 = b1;
  }
  return out;
}

}  // namespace

WitnessReport check_orthogonality(const Coloring& x, const Coloring& y,
                                  const std::vector<Elem>& W,
                                  const SearchOpts& opts) {
  const Group& g = *x.group();
  if (!g.same_as(*y.group()))
    throw SpecError("orthogonality needs colorings over one group");
  WitnessReport rep;
  rep.window_radius = opts.window_radius;
  const std::string ctx = "checking orthogonality";

  auto attempt = [&](const std::vector<Elem>& T) -> std::optional<OrthoOutcome> {
    auto sx = signatures(x, W, T, opts.partial, ctx);
    auto sy = signatures(y, W, T, opts.partial, ctx);
    auto o = orthogonal_on(sx, sy, T.size());
    if (o.ok) return std::nullopt;
    return o;
  };

  if (opts.T) {
    std::vector<Elem> T = *opts.T;
    sort_enumeration(g, T);
    auto bad = attempt(T);
    if (!bad) {
      rep.status = Status::Confirmed;
      rep.witness = std::move(T);
      return rep;
    }
    if (bad->definite_fail) {
      rep.status = Status::Refuted;
      rep.counterexample_pair = {W[bad->g0], W[bad->g1]};
    } else {
      rep.status = Status::Inconclusive;
      rep.searched_radius = -1;
    }
    return rep;
  }

  for (int64_t r = 0; r <= opts.r_max; ++r) {
    auto T = probe_ball(g, r, opts.one_sided);
    if (!attempt(T)) {
      rep.status = Status::Confirmed;
      rep.witness = std::move(T);
      return rep;
    }
  }
  rep.status = Status::Inconclusive;
  rep.searched_radius = opts.r_max;
  return rep;
}

WitnessReport check_aperiodic(const Coloring& x, const Elem& s,
                              const std::vector<Elem>& W) {
  const Group& g = *x.group();
  if (s == g.identity()) throw SpecError("aperiodicity shift must not be 1_G");
  Memo memo(x);
  WitnessReport rep;
  int64_t max_len = 0;
  for (const auto& t : W) {
    max_len = std::max(max_len, g.length(t));
    CellValue a = memo.at(g.mul(s, t));
    CellValue b = memo.at(t);
    if (a.defined() && b.defined() && a.bit() != b.bit()) {
      rep.status = Status::Confirmed;
      rep.witness = std::vector<Elem>{t};
      return rep;
    }
  }
  rep.status = Status::Inconclusive;
  rep.searched_radius = max_len;
  return rep;
}

int64_t check_strong_blocking(const Coloring& x, const Elem& s,
                              const std::vector<Elem>& W) {
  const Group& g = *x.group();
  Memo memo(x);
  int64_t count = 0;
  for (const auto& t : W) {
    CellValue a = memo.at(g.mul(s, t));
    CellValue b = memo.at(t);
    if (a.defined() && b.defined() && a.bit() != b.bit()) ++count;
  }
  return count;
}

WitnessReport check_membership_test(
    const Coloring& x, const std::vector<Elem>& delta_window,
    const std::vector<std::pair<Elem, uint8_t>>& VP, const std::vector<Elem>& W,
    const SearchOpts& opts) {
  const Group& g = *x.group();
  Memo memo(x);
  std::unordered_set<Elem, ElemHash> delta(delta_window.begin(),
                                           delta_window.end());
  WitnessReport rep;
  rep.window_radius = opts.window_radius;
  bool any_unknown = false;
  for (const auto& gg : W) {
    bool matches = true;
    bool undef = false;
    for (const auto& [v, want] : VP) {
      Elem gv = g.mul(gg, v);
      CellValue c = memo.at(gv);
      if (!c.defined()) {
        if (!opts.partial)
          throw WindowTooSmallError(g.print(gv), "running the membership test");
        undef = true;
        continue;
      }
      if (c.bit() != want) {
        matches = false;
        break;
      }
    }
    if (matches && undef) {
      any_unknown = true;
      continue;
    }
    if (matches != (delta.count(gg) > 0)) {
      rep.status = Status::Refuted;
      rep.counterexample = gg;
      return rep;
    }
  }
  if (any_unknown) {
    rep.status = Status::Inconclusive;
    rep.searched_radius = -1;
    return rep;
  }
  rep.status = Status::Confirmed;
  std::vector<Elem> w;
  for (const auto& [v, b] : VP) w.push_back(v);
  sort_enumeration(g, w);
  rep.witness = std::move(w);
  return rep;
}

// ---------------------------------------------------------------------------

Census brute_force_colorings(const GroupPtr& gp, int k) {
  const Group& g = *gp;
  if (!g.is_finite()) throw SpecError("census needs a finite group");
  int64_t n = g.size();
  if (n > 12) throw SpecError("census capped at |G| <= 12");
  if (k < 2) throw SpecError("census needs k >= 2");
  int64_t total = 1;
  for (int64_t i = 0; i < n; ++i) {
    total *= k;
    if (total > (int64_t{1} << 24)) throw SpecError("census space too large");
  }

  // index-level multiplication and inverse tables
  std::vector<std::vector<int>> tab(n, std::vector<int>(n));
  std::vector<int> inv(n);
  for (int64_t i = 0; i < n; ++i) {
    Elem gi = g.enumerate(i);
    inv[i] = static_cast<int>(g.index_of(g.inv(gi)));
    for (int64_t j = 0; j < n; ++j)
      tab[i][j] = static_cast<int>(g.index_of(g.mul(gi, g.enumerate(j))));
  }

  Census c;
  c.total = total;
  c.is_aperiodic.assign(total, 0);
  std::vector<uint8_t> x(n);
  std::map<std::vector<uint8_t>, int64_t> orbit_rep;  // lex-least -> orbit id

  std::vector<int64_t> aperiodic_orbit_of_code(total, -1);
  for (int64_t code = 0; code < total; ++code) {
    int64_t rest = code;
    for (int64_t i = 0; i < n; ++i) {
      x[i] = static_cast<uint8_t>(rest % k);
      rest /= k;
    }
    bool aper = true;
    for (int64_t s = 1; s < n && aper; ++s) {
      bool period = true;
      for (int64_t h = 0; h < n && period; ++h)
        period = x[tab[inv[s]][h]] == x[h];
      aper = !period;
    }
    if (!aper) continue;
    c.is_aperiodic[code] = 1;
    ++c.aperiodic;
    std::vector<uint8_t> least = x;
    for (int64_t s = 0; s < n; ++s) {
      std::vector<uint8_t> shifted(n);
      for (int64_t h = 0; h < n; ++h) shifted[h] = x[tab[inv[s]][h]];
      least = std::min(least, shifted);
    }
    auto [it, fresh] = orbit_rep.try_emplace(least, orbit_rep.size());
    aperiodic_orbit_of_code[code] = it->second;
  }

  // finite orbit closures are the orbits themselves, so the aperiodic points
  // are exactly the k-colorings
  c.two_colorings = c.aperiodic;
  c.orbit_count = static_cast<int64_t>(orbit_rep.size());
  c.max_orthogonal_family = c.orbit_count;
  std::vector<int64_t> orbit_sizes(orbit_rep.size(), 0);
  for (int64_t code = 0; code < total; ++code)
    if (aperiodic_orbit_of_code[code] >= 0)
      ++orbit_sizes[aperiodic_orbit_of_code[code]];
  int64_t cross = 0;
  for (size_t i = 0; i < orbit_sizes.size(); ++i)
    for (size_t j = i + 1; j < orbit_sizes.size(); ++j)
      cross += orbit_sizes[i] * orbit_sizes[j];
  c.orthogonal_pairs = cross;
  c.representatives.reserve(orbit_rep.size());
  for (const auto& [rep, id] : orbit_rep) c.representatives.push_back(rep);
  return c;
}

bool census_blocks(const GroupPtr& gp, const std::vector<uint8_t>& x,
                   const Elem& s) {
  const Group& g = *gp;
  int64_t n = g.size();
  if (static_cast<int64_t>(x.size()) != n)
    throw SpecError("point size must match |G|");
  int64_t si = g.index_of(s);
  std::vector<std::vector<int>> tab(n, std::vector<int>(n));
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j)
      tab[i][j] =
          static_cast<int>(g.index_of(g.mul(g.enumerate(i), g.enumerate(j))));
  for (int64_t gi = 0; gi < n; ++gi) {
    bool witnessed = false;
    for (int64_t t = 0; t < n && !witnessed; ++t)
      witnessed = x[tab[gi][t]] != x[tab[tab[gi][si]][t]];
    if (!witnessed) return false;
  }
  return true;
}

Coloring instrumented(const Coloring& x, std::shared_ptr<ReadAudit> audit) {
  return Coloring(x.group(), "audited(" + x.describe() + ")",
                  [x, audit](const Elem& g) {
                    ++audit->reads;
                    if (audit->capture) audit->log.push_back(g);
                    return x.at(g);
                  });
}

}  // namespace subshift
