#include "subshift/fundamental.hpp"

#include <algorithm>
#include <memory>
#include <unordered_set>
#include <utility>

namespace subshift {

using ElemSet = std::unordered_set<Elem>;

// ---------------------------------------------------------------------------
// locally recognizable seed functions

std::optional<uint8_t> LocallyRecognizable::value_at(const Elem& e) const {
  for (size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == e) return values[i];
  return std::nullopt;
}

nlohmann::json LocallyRecognizable::to_json() const {
  nlohmann::json dom = nlohmann::json::array();
  nlohmann::json val = nlohmann::json::array();
  for (size_t i = 0; i < domain.size(); ++i) {
    dom.push_back(group->print(domain[i]));
    val.push_back(int(values[i]));
  }
  return {{"group", group->to_json()},
          {"domain", std::move(dom)},
          {"values", std::move(val)}};
}

LocallyRecognizable LocallyRecognizable::from_json(const nlohmann::json& j) {
  try {
    LocallyRecognizable r;
    r.group = Group::from_json(j.at("group"));
    for (const auto& s : j.at("domain"))
      r.domain.push_back(r.group->parse(s.get<std::string>()));
    for (const auto& v : j.at("values")) {
      int b = v.get<int>();
      if (b != 0 && b != 1) throw SpecError("values must be bits");
      r.values.push_back(uint8_t(b));
    }
    if (r.domain.size() != r.values.size())
      throw SpecError("domain and values disagree in length");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad seed function: ") + e.what());
  }
}

LrReport check_locally_recognizable(const LocallyRecognizable& R) {
  if (!R.group) throw SpecError("seed function has no group");
  if (R.domain.size() != R.values.size())
    throw SpecError("seed domain and values disagree in length");
  const Group& g = *R.group;
  const Elem id = g.identity();

  std::unordered_map<Elem, uint8_t, ElemHash> val;
  for (size_t i = 0; i < R.domain.size(); ++i) {
    if (!val.emplace(R.domain[i], R.values[i]).second)
      throw SpecError("seed domain repeats " + g.print(R.domain[i]));
  }
  auto it = val.find(id);
  if (it == val.end())
    throw SpecError("seed domain must contain the identity");
  const uint8_t base = it->second;

  LrReport rep;
  int64_t like_identity = 0;
  for (size_t i = 0; i < R.domain.size(); ++i)
    if (R.values[i] == base) ++like_identity;
  rep.nontrivial = like_identity > 1;

  for (const Elem& a : R.domain) {
    if (a == id) continue;
    bool separated = false;
    for (const Elem& b : R.domain) {
      auto ab = val.find(g.mul(a, b));
      if (ab == val.end()) continue;
      if (ab->second != val.find(b)->second) {
        separated = true;
        break;
      }
    }
    if (!separated) {
      rep.ok = false;
      rep.offender = a;
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

namespace {

// least enumerated elements outside a finite exclusion set
std::vector<Elem> fresh_points(const Group& g, const ElemSet& avoid,
                               int64_t count) {
  std::vector<Elem> out;
  int64_t bound = g.is_finite() ? g.size() : int64_t(avoid.size()) + count + 1;
  for (int64_t i = 0; i < bound && int64_t(out.size()) < count; ++i) {
    Elem e = g.enumerate(i);
    if (!avoid.count(e)) out.push_back(std::move(e));
  }
  if (int64_t(out.size()) < count)
    throw SpecError("group too small to extend the seed function");
  return out;
}

}  // namespace

LocallyRecognizable extend_locally_recognizable(const GroupPtr& gp,
                                                const std::vector<Elem>& B,
                                                const std::vector<uint8_t>& q) {
  if (!gp) throw SpecError("seed extension needs a group");
  if (B.size() != q.size())
    throw SpecError("seed domain and values disagree in length");
  const Group& g = *gp;
  const Elem id = g.identity();

  std::unordered_map<Elem, uint8_t, ElemHash> val;
  for (size_t i = 0; i < B.size(); ++i) {
    if (q[i] > 1) throw SpecError("values must be bits");
    if (!val.emplace(B[i], q[i]).second)
      throw SpecError("seed domain repeats " + g.print(B[i]));
  }
  val.try_emplace(id, 0);
  const uint8_t base = val.at(id);

  std::vector<Elem> b1;
  b1.reserve(val.size());
  for (const auto& [e, v] : val) b1.push_back(e);
  sort_enumeration(g, b1);

  ElemSet taken(b1.begin(), b1.end());
  std::vector<Elem> ab = fresh_points(g, taken, 2);
  std::vector<Elem> b2 = b1;
  b2.insert(b2.end(), ab.begin(), ab.end());

  std::vector<Elem> prods = set_product(g, b2, b2);
  std::vector<Elem> quots = set_product(g, b2, set_inverse(g, b2));
  ElemSet excluded(prods.begin(), prods.end());
  excluded.insert(quots.begin(), quots.end());
  Elem c = fresh_points(g, excluded, 1).front();

  std::vector<Elem> b3 = b2;
  b3.push_back(c);

  LocallyRecognizable r;
  r.group = gp;
  r.domain = set_product(g, b3, b3);
  r.values.reserve(r.domain.size());
  ElemSet three{ab[0], ab[1], c};
  for (const Elem& e : r.domain) {
    if (three.count(e))
      r.values.push_back(base);
    else if (auto it = val.find(e); it != val.end())
      r.values.push_back(it->second);
    else
      r.values.push_back(uint8_t(1 - base));
  }
  return r;
}

// ---------------------------------------------------------------------------
// fundamental prefix plumbing

const std::vector<Elem>& FundamentalPrefix::slots(int n) const {
  return bp.dd.at(stages()).at(n);
}

bool FundamentalPrefix::in_window(const Elem& e) const {
  return slot.count(e) > 0;
}

Cell FundamentalPrefix::cell_at(const Elem& e) const {
  auto it = slot.find(e);
  return it == slot.end() ? Cell::Horizon : cells[it->second];
}

void FundamentalPrefix::reindex() {
  slot.clear();
  slot.reserve(window.size());
  for (size_t i = 0; i < window.size(); ++i) slot.emplace(window[i], i);
  if (slot.size() != window.size())
    throw SpecError("fundamental prefix window repeats a cell");
}

namespace {

struct CellTable {
  std::unordered_map<Elem, Cell, ElemHash> at;
  int horizon_depth = 0;
};

std::shared_ptr<CellTable> snapshot(const FundamentalPrefix& fm) {
  auto t = std::make_shared<CellTable>();
  t->at.reserve(fm.window.size());
  for (size_t i = 0; i < fm.window.size(); ++i)
    t->at.emplace(fm.window[i], fm.cells[i]);
  t->horizon_depth = fm.stages();
  return t;
}

}  // namespace

Coloring FundamentalPrefix::as_coloring() const {
  auto t = snapshot(*this);
  return Coloring(bp.group, "fundamental-prefix", [t](const Elem& e) {
    auto it = t->at.find(e);
    if (it == t->at.end()) return CellValue{Cell::Horizon, t->horizon_depth};
    if (is_defined(it->second)) return CellValue{it->second, 0};
    return CellValue{it->second, t->horizon_depth};
  });
}

Coloring FundamentalPrefix::completion(int fill) const {
  auto t = snapshot(*this);
  CellValue pad = cv(fill);
  return Coloring(bp.group, "fundamental-completion", [t, pad](const Elem& e) {
    auto it = t->at.find(e);
    if (it != t->at.end() && is_defined(it->second))
      return CellValue{it->second, 0};
    return pad;
  });
}

// ---------------------------------------------------------------------------
// the staged construction

FundamentalPrefix build_fundamental(const Blueprint& bp,
                                    const LocallyRecognizable& R,
                                    int n_stages) {
  if (!bp.group) throw SpecError("blueprint has no group");
  if (n_stages < 1 || n_stages > bp.top_level())
    throw SpecError("stage count outside the blueprint prefix");
  const Group& g = *bp.group;
  if (!R.group || !R.group->same_as(g))
    throw SpecError("seed function lives on the wrong group");

  LrReport chk = check_locally_recognizable(R);
  if (!chk.ok)
    throw SpecError("seed function is not locally recognizable at " +
                    g.print(*chk.offender));
  if (!chk.nontrivial) throw SpecError("seed function is trivial");

  const std::vector<Elem>& base_tile = bp.tile(0);
  ElemSet base_set(base_tile.begin(), base_tile.end());
  for (const Elem& e : R.domain)
    if (!base_set.count(e))
      throw SpecError("seed domain does not fit the base tile");

  FundamentalPrefix fm;
  fm.bp = bp;
  fm.window = bp.tile(n_stages);
  fm.cells.assign(fm.window.size(), Cell::Horizon);
  fm.reindex();

  // pad the seed across the whole base tile with the background bit
  const uint8_t seed_one = *R.value_at(g.identity());
  const uint8_t background = uint8_t(1 - seed_one);
  fm.recog.group = bp.group;
  fm.recog.domain = base_tile;
  for (const Elem& f : base_tile)
    fm.recog.values.push_back(R.value_at(f).value_or(background));
  LrReport padded = check_locally_recognizable(fm.recog);
  if (!padded.ok || !padded.nontrivial)
    throw SpecError("padding broke the seed function");

  auto cell_ref = [&](const Elem& e, const char* what) -> Cell& {
    auto it = fm.slot.find(e);
    if (it == fm.slot.end())
      throw SpecError(std::string(what) + " left the window at " + g.print(e));
    return fm.cells[it->second];
  };
  auto stamp = [&](const Elem& e, uint8_t bit, const char* what) {
    Cell& c = cell_ref(e, what);
    if (c != Cell::Free)
      throw SpecError(std::string(what) + " hit a spoken-for cell at " +
                      g.print(e));
    c = bit ? Cell::One : Cell::Zero;
  };

  // theta is not sized yet, so go to the triangle row directly
  auto centers = [&](int n) -> const std::vector<Elem>& {
    return bp.dd[n_stages][n];
  };

  // first stage: carve out the level-1 hole cells, stamp the seed pattern
  // around every level-1 center, default-fill the rest
  const BlueprintLevel& lv1 = bp.levels[0];
  for (const Elem& c : centers(1)) {
    cell_ref(g.mul(c, lv1.a), "hole carving") = Cell::Free;
    cell_ref(g.mul(c, lv1.b), "hole carving") = Cell::Free;
    for (const Elem& spare : lv1.ledger)
      cell_ref(g.mul(c, spare), "hole carving") = Cell::Free;
  }
  for (const Elem& c : centers(1))
    for (size_t i = 0; i < base_tile.size(); ++i) {
      Cell& cell = cell_ref(g.mul(c, base_tile[i]), "seed stamping");
      if (cell != Cell::Horizon)
        throw SpecError("seed region collides with a hole");
      cell = fm.recog.values[i] ? Cell::One : Cell::Zero;
    }
  for (Cell& c : fm.cells)
    if (c == Cell::Horizon) c = background ? Cell::One : Cell::Zero;

  // later stages consume the previous level's hole pairs: the center keeps
  // both alive one level up, the two distinguished translates disambiguate,
  // every other translate zeroes the a-side and abandons the b-side for good
  for (int k = 2; k <= n_stages; ++k) {
    const BlueprintLevel& lv = bp.levels[k - 1];
    const Elem& prev_a = bp.levels[k - 2].a;
    const Elem& prev_b = bp.levels[k - 2].b;
    for (const Elem& c : centers(k))
      for (const Elem& d : bp.dd[k][k - 1]) {
        Elem pa = g.mul(g.mul(c, d), prev_a);
        Elem pb = g.mul(g.mul(c, d), prev_b);
        if (d == lv.gamma) {
          stamp(pa, 1, "stage center");
          stamp(pb, 1, "stage center");
        } else if (d == lv.alpha) {
          stamp(pb, 0, "stage alpha");
        } else if (d == lv.beta) {
          stamp(pa, 0, "stage beta");
        } else {
          stamp(pa, 0, "stage ledger");
        }
      }
  }

  // whatever stayed free must be exactly the ledger holes plus the two
  // horizon cells of the top stage
  ElemSet expected_free;
  for (int n = 1; n <= n_stages; ++n) {
    const Elem prev_b =
        n == 1 ? g.identity() : bp.levels[n - 2].b;
    for (const Elem& c : centers(n))
      for (const Elem& spare : bp.levels[n - 1].ledger)
        expected_free.insert(g.mul(g.mul(c, spare), prev_b));
  }
  const Elem top_a = bp.levels[n_stages - 1].a;
  const Elem top_b = bp.levels[n_stages - 1].b;
  int64_t free_seen = 0;
  for (size_t i = 0; i < fm.window.size(); ++i) {
    if (fm.cells[i] != Cell::Free) continue;
    ++free_seen;
    if (fm.window[i] == top_a || fm.window[i] == top_b) continue;
    if (!expected_free.count(fm.window[i]))
      throw SpecError("stray free cell at " + g.print(fm.window[i]));
  }
  if (free_seen != int64_t(expected_free.size()) + 2)
    throw SpecError("free cells do not match the ledger");
  fm.cells[fm.slot.at(top_a)] = Cell::Horizon;
  fm.cells[fm.slot.at(top_b)] = Cell::Horizon;

  // membership-test data: the seed pattern, then both chain points of every
  // finished level pinned to one
  std::vector<std::pair<Elem, uint8_t>> probes;
  for (size_t i = 0; i < base_tile.size(); ++i)
    probes.emplace_back(base_tile[i], fm.recog.values[i]);
  for (int n = 1; n <= n_stages; ++n) {
    std::vector<std::pair<Elem, uint8_t>> sorted = probes;
    std::sort(sorted.begin(), sorted.end(),
              [&](const auto& x, const auto& y) {
                return g.less(x.first, y.first);
              });
    fm.test_region.emplace_back();
    fm.test_values.emplace_back();
    for (auto& [e, v] : sorted) {
      fm.test_region.back().push_back(e);
      fm.test_values.back().push_back(v);
    }
    if (n < n_stages) {
      probes.emplace_back(bp.levels[n - 1].a, 1);
      probes.emplace_back(bp.levels[n - 1].b, 1);
    }
  }

  fm.theta.reserve(n_stages);
  for (int n = 1; n <= n_stages; ++n)
    fm.theta.push_back(bp.levels[n - 1].ledger);
  return fm;
}

// ---------------------------------------------------------------------------
// membership tests

bool membership_test(const FundamentalPrefix& fm, int n, const Coloring& x,
                     const Elem& at) {
  if (n < 1 || n > fm.stages())
    throw SpecError("membership level outside the prefix");
  const Group& g = *fm.bp.group;
  const auto& region = fm.test_region[n - 1];
  const auto& wanted = fm.test_values[n - 1];
  for (size_t i = 0; i < region.size(); ++i) {
    CellValue v = x.at(g.mul(at, region[i]));
    if (!v.defined())
      throw WindowTooSmallError(g.print(g.mul(at, region[i])),
                                "running a membership test");
    if (v.bit() != wanted[i]) return false;
  }
  return true;
}

WitnessReport check_level_membership(const FundamentalPrefix& fm, int n) {
  if (n < 1 || n > fm.stages())
    throw SpecError("membership level outside the prefix");
  const Group& g = *fm.bp.group;
  const auto& region = fm.test_region[n - 1];

  // the test only makes sense where the whole probe region is visible
  std::vector<Elem> sweep;
  for (const Elem& e : fm.window) {
    bool visible = true;
    for (const Elem& v : region)
      if (!fm.in_window(g.mul(e, v))) {
        visible = false;
        break;
      }
    if (visible) sweep.push_back(e);
  }

  std::vector<std::pair<Elem, uint8_t>> vp;
  for (size_t i = 0; i < region.size(); ++i)
    vp.emplace_back(region[i], fm.test_values[n - 1][i]);
  return check_membership_test(fm.completion(0), fm.slots(n), vp, sweep);
}

// ---------------------------------------------------------------------------
// ledger-spending extensions

int64_t block_slot_count(const Blueprint& bp, int n) {
  if (n < 1 || n > bp.top_level())
    throw SpecError("level outside the blueprint prefix");
  const int64_t size = int64_t(bp.tile(n).size());
  __int128 colors = __int128(2) * size * size * size * size + 1;
  int64_t bits = 0;
  while ((__int128(1) << bits) < colors) ++bits;
  return bits;
}

namespace {

Elem level_prev_b(const Blueprint& bp, int n) {
  return n == 1 ? bp.group->identity() : bp.levels[n - 2].b;
}

// greedy proper coloring of the level-n centers; two centers clash when one
// can slide onto the other by tile-displacement, shift, tile-displacement
std::vector<int64_t> center_coloring(const Blueprint& bp,
                                     const std::vector<Elem>& centers, int n,
                                     const Elem& s) {
  const Group& g = *bp.group;
  std::vector<Elem> spread = set_product(g, bp.tile(n),
                                         set_inverse(g, bp.tile(n)));
  std::vector<Elem> reach =
      set_product(g, set_product(g, spread, std::vector<Elem>{s}), spread);
  ElemSet edge(reach.begin(), reach.end());

  std::vector<int64_t> color(centers.size(), 0);
  std::unordered_set<int64_t> taken;
  for (size_t i = 0; i < centers.size(); ++i) {
    taken.clear();
    for (size_t j = 0; j < i; ++j) {
      if (edge.count(g.mul(g.inv(centers[j]), centers[i])) ||
          edge.count(g.mul(g.inv(centers[i]), centers[j])))
        taken.insert(color[j]);
    }
    int64_t c = 0;
    while (taken.count(c)) ++c;
    color[i] = c;
  }
  return color;
}

}  // namespace

FundamentalPrefix extend_block_all(const FundamentalPrefix& fm,
                                   const std::vector<Elem>& shifts) {
  const Group& g = *fm.bp.group;
  if (int(shifts.size()) > fm.stages())
    throw SpecError("not enough levels in the prefix");
  FundamentalPrefix out = fm;
  for (int n = 1; n <= int(shifts.size()); ++n) {
    const Elem& s = shifts[n - 1];
    if (s == g.identity())
      throw SpecError("blocking shift must not be the identity");
    const int64_t need = block_slot_count(fm.bp, n);
    std::vector<Elem>& ledger = out.theta[n - 1];
    if (int64_t(ledger.size()) < need) throw SpecError("ledger too small");

    const std::vector<Elem>& centers = out.slots(n);
    std::vector<int64_t> color = center_coloring(out.bp, centers, n, s);
    const Elem prev_b = level_prev_b(out.bp, n);
    for (size_t i = 0; i < centers.size(); ++i)
      for (int64_t bit = 0; bit < need; ++bit) {
        Elem cell = g.mul(g.mul(centers[i], ledger[bit]), prev_b);
        auto it = out.slot.find(cell);
        if (it == out.slot.end() || out.cells[it->second] != Cell::Free)
          throw SpecError("ledger slot is not free at " + g.print(cell));
        out.cells[it->second] =
            ((color[i] >> bit) & 1) ? Cell::One : Cell::Zero;
      }
    ledger.erase(ledger.begin(), ledger.begin() + need);
  }
  return out;
}

std::vector<Elem> block_test_set(const FundamentalPrefix& pre, int n) {
  if (n < 1 || n > pre.stages())
    throw SpecError("level outside the prefix");
  const Group& g = *pre.bp.group;
  const int64_t need = block_slot_count(pre.bp, n);
  if (int64_t(pre.theta[n - 1].size()) < need)
    throw SpecError("ledger too small");
  const Elem prev_b = level_prev_b(pre.bp, n);
  std::vector<Elem> tail = pre.test_region[n - 1];
  for (int64_t i = 0; i < need; ++i)
    tail.push_back(g.mul(pre.theta[n - 1][i], prev_b));
  std::vector<Elem> spread = set_product(g, pre.bp.tile(n),
                                         set_inverse(g, pre.bp.tile(n)));
  return set_product(g, spread, tail);
}

FundamentalPrefix orthogonal_extension(const FundamentalPrefix& fm,
                                       const std::vector<uint8_t>& tau) {
  const Group& g = *fm.bp.group;
  if (int(tau.size()) > fm.stages())
    throw SpecError("not enough levels in the prefix");
  FundamentalPrefix out = fm;
  for (int n = 1; n <= int(tau.size()); ++n) {
    if (tau[n - 1] > 1) throw SpecError("values must be bits");
    std::vector<Elem>& ledger = out.theta[n - 1];
    if (ledger.empty()) throw SpecError("empty ledger");
    const Elem slot_point = g.mul(ledger.front(), level_prev_b(out.bp, n));
    for (const Elem& c : out.slots(n)) {
      Elem cell = g.mul(c, slot_point);
      auto it = out.slot.find(cell);
      if (it == out.slot.end() || out.cells[it->second] != Cell::Free)
        throw SpecError("ledger slot is not free at " + g.print(cell));
      out.cells[it->second] = tau[n - 1] ? Cell::One : Cell::Zero;
    }
    ledger.erase(ledger.begin());
  }
  return out;
}

std::vector<Elem> orthogonal_test_set(const FundamentalPrefix& pre, int n) {
  if (n < 1 || n > pre.stages())
    throw SpecError("level outside the prefix");
  const Group& g = *pre.bp.group;
  if (pre.theta[n - 1].empty()) throw SpecError("empty ledger");
  std::vector<Elem> tail = pre.test_region[n - 1];
  tail.push_back(g.mul(pre.theta[n - 1].front(), level_prev_b(pre.bp, n)));
  std::vector<Elem> spread = set_product(g, pre.bp.tile(n),
                                         set_inverse(g, pre.bp.tile(n)));
  return set_product(g, spread, tail);
}

PartialColoring strong_extension(const FundamentalPrefix& fm,
                                 const std::vector<Elem>& shifts, int count) {
  const Group& g = *fm.bp.group;
  if (count < 0 || count > int(shifts.size()))
    throw SpecError("strong extension needs one shift per step");
  PartialColoring patch;
  patch.group = fm.bp.group;
  ElemSet used;
  int level = 0;
  for (int n = 1; n <= count; ++n) {
    const Elem& s = shifts[n - 1];
    if (s == g.identity())
      throw SpecError("blocking shift must not be the identity");
    bool planted = false;
    for (int k = level + 1; k <= fm.stages() && !planted; ++k) {
      if (fm.theta[k - 1].empty()) continue;
      Elem p = g.mul(fm.theta[k - 1].front(), level_prev_b(fm.bp, k));
      Elem q = g.mul(s, p);
      if (!fm.in_window(q) || used.count(p) || used.count(q) || p == q)
        continue;
      Cell at_q = fm.cell_at(q);
      uint8_t q_bit;
      if (is_defined(at_q)) {
        q_bit = uint8_t(at_q == Cell::One);
      } else {
        q_bit = 0;
        patch.values.emplace(q, q_bit);
        patch.window.push_back(q);
      }
      patch.values.emplace(p, uint8_t(1 - q_bit));
      patch.window.push_back(p);
      used.insert(p);
      used.insert(q);
      level = k;
      planted = true;
    }
    if (!planted) throw SpecError("prefix exhausted");
  }
  sort_enumeration(g, patch.window);
  patch.validate();
  return patch;
}

Coloring overlay_on(const FundamentalPrefix& fm, const PartialColoring& patch,
                    int fill) {
  auto t = snapshot(fm);
  auto over = std::make_shared<std::unordered_map<Elem, uint8_t, ElemHash>>(
      patch.values);
  CellValue pad = cv(fill);
  return Coloring(fm.bp.group, "fundamental-overlay",
                  [t, over, pad](const Elem& e) {
                    if (auto it = over->find(e); it != over->end())
                      return cv(it->second);
                    auto it = t->at.find(e);
                    if (it != t->at.end() && is_defined(it->second))
                      return CellValue{it->second, 0};
                    return pad;
                  });
}

// ---------------------------------------------------------------------------
// minimal pattern stamping

Coloring minimal_from_pattern(const Blueprint& bp, const std::vector<Elem>& A,
                              const std::vector<uint8_t>& pattern) {
  if (!bp.group) throw SpecError("blueprint has no group");
  const Group& g = *bp.group;
  if (A.size() != pattern.size())
    throw SpecError("pattern domain and values disagree in length");
  const std::vector<Elem>& base_tile = bp.tile(0);
  ElemSet base_set(base_tile.begin(), base_tile.end());
  for (const Elem& e : A)
    if (!base_set.count(e))
      throw SpecError("pattern domain must sit inside the base tile");
  for (uint8_t v : pattern)
    if (v > 1) throw SpecError("values must be bits");

  auto vals = std::make_shared<std::unordered_map<Elem, uint8_t, ElemHash>>();
  for (const Elem& c : bp.positions[0])
    for (size_t i = 0; i < A.size(); ++i)
      (*vals)[g.mul(c, A[i])] = pattern[i];
  const std::vector<Elem>& top = bp.tile(bp.top_level());
  auto win = std::make_shared<ElemSet>(top.begin(), top.end());
  int depth = bp.top_level();
  return Coloring(bp.group, "minimal-pattern",
                  [vals, win, depth](const Elem& e) {
                    if (auto it = vals->find(e); it != vals->end())
                      return cv(it->second);
                    if (win->count(e)) return cv(0);
                    return CellValue{Cell::Horizon, depth};
                  });
}

// ---------------------------------------------------------------------------
// serialization

nlohmann::json FundamentalPrefix::to_json() const {
  const Group& g = *bp.group;
  nlohmann::json vals = nlohmann::json::array();
  for (size_t i = 0; i < window.size(); ++i)
    if (is_defined(cells[i]))
      vals.push_back({g.print(window[i]), cells[i] == Cell::One ? 1 : 0});
  auto elem_rows = [&](const std::vector<std::vector<Elem>>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json r = nlohmann::json::array();
      for (const Elem& e : row) r.push_back(g.print(e));
      out.push_back(std::move(r));
    }
    return out;
  };
  nlohmann::json pv = nlohmann::json::array();
  for (const auto& row : test_values) {
    nlohmann::json r = nlohmann::json::array();
    for (uint8_t v : row) r.push_back(int(v));
    pv.push_back(std::move(r));
  }
  return {{"blueprint", bp.to_json()},
          {"recog", recog.to_json()},
          {"values", std::move(vals)},
          {"theta", elem_rows(theta)},
          {"test_region", elem_rows(test_region)},
          {"test_values", std::move(pv)}};
}

FundamentalPrefix FundamentalPrefix::from_json(const nlohmann::json& j) {
  try {
    FundamentalPrefix fm;
    fm.bp = Blueprint::from_json(j.at("blueprint"));
    fm.recog = LocallyRecognizable::from_json(j.at("recog"));
    const Group& g = *fm.bp.group;
    if (!fm.recog.group->same_as(g))
      throw SpecError("seed function lives on the wrong group");

    auto elem_rows = [&](const nlohmann::json& rows) {
      std::vector<std::vector<Elem>> out;
      for (const auto& row : rows) {
        out.emplace_back();
        for (const auto& s : row)
          out.back().push_back(g.parse(s.get<std::string>()));
      }
      return out;
    };
    fm.theta = elem_rows(j.at("theta"));
    fm.test_region = elem_rows(j.at("test_region"));
    for (const auto& row : j.at("test_values")) {
      fm.test_values.emplace_back();
      for (const auto& v : row) {
        int b = v.get<int>();
        if (b != 0 && b != 1) throw SpecError("values must be bits");
        fm.test_values.back().push_back(uint8_t(b));
      }
    }
    const int n_stages = fm.stages();
    if (n_stages < 1 || n_stages > fm.bp.top_level())
      throw SpecError("stage count outside the blueprint prefix");
    if (int(fm.test_region.size()) != n_stages ||
        int(fm.test_values.size()) != n_stages)
      throw SpecError("membership data rows disagree with the stage count");
    for (int n = 1; n <= n_stages; ++n) {
      if (fm.test_region[n - 1].size() != fm.test_values[n - 1].size())
        throw SpecError("membership data rows disagree in length");
      ElemSet spares(fm.bp.levels[n - 1].ledger.begin(),
                     fm.bp.levels[n - 1].ledger.end());
      for (const Elem& e : fm.theta[n - 1])
        if (!spares.count(e))
          throw SpecError("ledger entry is not a spare transversal point");
    }

    fm.window = fm.bp.tile(n_stages);
    fm.cells.assign(fm.window.size(), Cell::Horizon);
    fm.reindex();

    ElemSet expected_free;
    for (int n = 1; n <= n_stages; ++n) {
      const Elem prev_b = level_prev_b(fm.bp, n);
      for (const Elem& c : fm.slots(n))
        for (const Elem& spare : fm.theta[n - 1])
          expected_free.insert(g.mul(g.mul(c, spare), prev_b));
    }
    const Elem top_a = fm.bp.levels[n_stages - 1].a;
    const Elem top_b = fm.bp.levels[n_stages - 1].b;

    int64_t determined = 0;
    for (const auto& pair : j.at("values")) {
      Elem e = g.parse(pair.at(0).get<std::string>());
      int b = pair.at(1).get<int>();
      if (b != 0 && b != 1) throw SpecError("values must be bits");
      auto it = fm.slot.find(e);
      if (it == fm.slot.end())
        throw SpecError("determined cell outside the window");
      if (fm.cells[it->second] != Cell::Horizon)
        throw SpecError("determined cell repeated");
      if (expected_free.count(e) || e == top_a || e == top_b)
        throw SpecError("determined cell claims a free or horizon point");
      fm.cells[it->second] = b ? Cell::One : Cell::Zero;
      ++determined;
    }
    for (const Elem& e : expected_free) {
      auto it = fm.slot.find(e);
      if (it == fm.slot.end())
        throw SpecError("ledger hole outside the window");
      fm.cells[it->second] = Cell::Free;
    }
    if (int64_t(fm.window.size()) !=
        determined + int64_t(expected_free.size()) + 2)
      throw SpecError("cells do not partition the window");
    return fm;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad fundamental prefix: ") + e.what());
  }
}

}  // namespace subshift
