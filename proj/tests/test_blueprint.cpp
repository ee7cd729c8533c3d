#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "subshift/blueprint.hpp"

using namespace subshift;

namespace {

Elem ze(int64_t n) {
  Elem e;
  e.vec = {n};
  return e;
}

std::vector<Elem> zset(const std::vector<int64_t>& vs) {
  std::vector<Elem> out;
  for (int64_t v : vs) out.push_back(ze(v));
  return out;
}

std::vector<std::string> prints(const Group& g, const std::vector<Elem>& v) {
  std::vector<std::string> out;
  for (const Elem& e : v) out.push_back(g.print(e));
  return out;
}

std::pair<int64_t, int64_t> span(const std::vector<Elem>& s) {
  int64_t lo = s.front().vec[0], hi = lo;
  for (const Elem& e : s) {
    lo = std::min(lo, e.vec[0]);
    hi = std::max(hi, e.vec[0]);
  }
  return {lo, hi};
}

// direct greedy packing, no shortcuts, for cross-checking the library path
std::vector<Elem> brute_pack(const Group& g, const std::vector<Elem>& A,
                             const std::vector<Elem>& region,
                             const std::vector<Elem>& forbidden = {}) {
  std::vector<Elem> rs = region, out;
  sort_enumeration(g, rs);
  auto inside = [&](const Elem& p, const std::vector<Elem>& s) {
    for (const Elem& e : s)
      if (e == p) return true;
    return false;
  };
  std::vector<Elem> covered;
  Elem a0 = A.front();
  for (const Elem& e : A)
    if (g.less(e, a0)) a0 = e;
  std::vector<Elem> cand;
  for (const Elem& r : rs) {
    Elem c = g.mul(r, g.inv(a0));
    if (!inside(c, cand)) cand.push_back(c);
  }
  sort_enumeration(g, cand);
  for (const Elem& c : cand) {
    bool ok = true;
    for (const Elem& a : A) {
      Elem p = g.mul(c, a);
      if (!inside(p, rs) || inside(p, forbidden) || inside(p, covered)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const Elem& a : A) covered.push_back(g.mul(c, a));
    out.push_back(c);
  }
  return out;
}

// is D a valid covering set for rho(B; A)?
bool is_cover(const Group& g, const std::vector<Elem>& B,
              const std::vector<Elem>& A, const std::vector<Elem>& D) {
  auto inside = [&](const Elem& p, const std::vector<Elem>& s) {
    for (const Elem& e : s)
      if (e == p) return true;
    return false;
  };
  for (const Elem& d : D)
    if (!inside(d, B)) return false;
  for (const Elem& b : B) {
    bool demand = true;
    for (const Elem& a : A)
      if (!inside(g.mul(b, a), B)) {
        demand = false;
        break;
      }
    if (!demand) continue;
    bool met = false;
    for (const Elem& d : D) {
      for (const Elem& a : A)
        for (const Elem& a2 : A)
          if (g.mul(b, a) == g.mul(d, a2)) {
            met = true;
            break;
          }
      if (met) break;
    }
    if (!met) return false;
  }
  return true;
}

int64_t brute_rho(const Group& g, const std::vector<Elem>& B,
                  const std::vector<Elem>& A) {
  size_t n = B.size();
  int64_t best = static_cast<int64_t>(n) + 1;
  for (uint32_t mask = 0; mask < (uint32_t(1) << n); ++mask) {
    int bits = __builtin_popcount(mask);
    if (bits >= best) continue;
    std::vector<Elem> D;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) D.push_back(B[i]);
    if (is_cover(g, B, A, D)) best = bits;
  }
  return best;
}

}  // namespace

TEST_CASE("set helpers take the interval shortcut and the long way") {
  GroupPtr z = Group::zd(1);
  CHECK(prints(*z, set_inverse(*z, zset({0, 1, 2}))) ==
        std::vector<std::string>{"(0)", "(-1)", "(-2)"});

  std::vector<Elem> p = set_product(*z, zset({-2, -1, 0, 1}), zset({0, 1, 2, 3}));
  CHECK(span(p) == std::pair<int64_t, int64_t>{-2, 4});
  CHECK(p.size() == 7);

  std::vector<Elem> q = set_product(*z, zset({0, 2}), zset({0, 1}));
  CHECK(prints(*z, q) == std::vector<std::string>{"(0)", "(1)", "(2)", "(3)"});

  std::vector<Elem> s = shrink_into_ball(*z, 5, zset({-2, -1, 0, 1, 2}));
  CHECK(span(s) == std::pair<int64_t, int64_t>{-3, 3});
  CHECK(s.size() == 7);

  std::vector<Elem> t = shrink_into_ball(*z, 5, zset({0, 3}));
  CHECK(span(t) == std::pair<int64_t, int64_t>{-5, 2});
  CHECK(t.size() == 8);

  CHECK_THROWS_AS(shrink_into_ball(*z, 5, {}), SpecError);
}

TEST_CASE("greedy packing walks the enumeration") {
  GroupPtr z = Group::zd(1);
  std::vector<Elem> two = zset({0, 1});

  CHECK(prints(*z, max_disjoint(*z, two, zset({0, 1, 2, 3, 4, 5}))) ==
        std::vector<std::string>{"(0)", "(2)", "(4)"});
  CHECK(prints(*z, max_disjoint(*z, two, zset({0, 1, 2, 3, 4, 5}),
                                zset({2}))) ==
        std::vector<std::string>{"(0)", "(3)"});
  CHECK(prints(*z, max_disjoint(*z, two, zset({0, 1, 2, 4, 5}))) ==
        std::vector<std::string>{"(0)", "(4)"});
  // tiles with gaps may interleave
  CHECK(prints(*z, max_disjoint(*z, zset({0, 2}), zset({0, 1, 2, 3, 4, 5, 6}))) ==
        std::vector<std::string>{"(0)", "(1)", "(4)"});
  // region not anchored at the identity translate
  CHECK(prints(*z, max_disjoint(*z, two, zset({1, 2, 3, 4}))) ==
        std::vector<std::string>{"(1)", "(3)"});
  CHECK_THROWS_AS(max_disjoint(*z, {}, zset({0})), SpecError);

  GroupPtr z2 = Group::zd(2);
  Elem e00, e10;
  e00.vec = {0, 0};
  e10.vec = {1, 0};
  std::vector<Elem> picked = max_disjoint(*z2, {e00, e10}, z2->ball(1));
  CHECK(prints(*z2, picked) ==
        std::vector<std::string>{"(0,0)", "(0,1)", "(0,-1)"});
}

TEST_CASE("packing shortcut matches the brute walk") {
  GroupPtr z = Group::zd(1);
  for (int64_t r : {4, 6, 9}) {
    std::vector<Elem> region = z->ball(r);
    for (auto& A : {zset({-1, 0, 1}), zset({0, 1, 2}), zset({0, 2})}) {
      CHECK(max_disjoint(*z, A, region) == brute_pack(*z, A, region));
    }
  }
  std::vector<Elem> probe = zset({-2, -1, 0, 1, 2});
  std::vector<Elem> direct;
  for (const Elem& c : z->ball(8)) {
    bool ok = true;
    for (const Elem& v : probe)
      if (z->length(z->mul(c, v)) > 8) ok = false;
    if (ok) direct.push_back(c);
  }
  sort_enumeration(*z, direct);
  CHECK(shrink_into_ball(*z, 8, probe) == direct);
}

TEST_CASE("covering number, three ways") {
  GroupPtr z = Group::zd(1);
  std::vector<Elem> B = zset({0, 1, 2, 3, 4});
  std::vector<Elem> A = zset({0, 1});

  RhoResult ex = rho_exact(*z, B, A);
  CHECK(ex.value == 2);
  CHECK(ex.exact);
  CHECK(ex.witness.size() == 2);
  CHECK(is_cover(*z, B, A, ex.witness));

  RhoResult gr = rho_greedy(*z, B, A);
  CHECK(gr.value == 2);
  CHECK(is_cover(*z, B, A, gr.witness));

  RhoResult cl = rho_cluster_bound(*z, B, A);
  CHECK(cl.value == 2);
  CHECK(prints(*z, cl.witness) == std::vector<std::string>{"(0)", "(3)"});

  // a bare identity tile demands one point per cell
  std::vector<Elem> B2 = zset({0, 1, -1, 2});
  CHECK(rho_exact(*z, B2, zset({0})).value == 4);

  std::vector<Elem> wide;
  for (int64_t v = 0; v <= 20; ++v) wide.push_back(ze(v));
  CHECK_THROWS_AS(rho_exact(*z, wide, A), SpecError);
  RhoResult wx = rho_exact(*z, wide, A, 25);
  CHECK(wx.value == 7);

  CHECK_THROWS_AS(rho_exact(*z, B, zset({1, 2})), SpecError);
  CHECK_THROWS_AS(rho_greedy(*z, B, zset({1, 2})), SpecError);
  CHECK_THROWS_AS(rho_cluster_bound(*z, B, zset({1, 2})), SpecError);
}

TEST_CASE("covering bounds sandwich the exact value") {
  GroupPtr z = Group::zd(1);
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int64_t> cell(-8, 8);
  std::uniform_int_distribution<int64_t> small(-2, 2);
  std::uniform_int_distribution<int> bsize(4, 14);
  std::uniform_int_distribution<int> extra(0, 2);

  for (int it = 0; it < 200; ++it) {
    std::vector<Elem> B;
    {
      std::vector<int64_t> vs;
      int want = bsize(rng);
      while (static_cast<int>(vs.size()) < want) {
        int64_t v = cell(rng);
        if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
      }
      B = zset(vs);
      sort_enumeration(*z, B);
    }
    std::vector<Elem> A = zset({0});
    for (int j = extra(rng); j > 0; --j) {
      Elem e = ze(small(rng));
      if (std::find(A.begin(), A.end(), e) == A.end()) A.push_back(e);
    }
    sort_enumeration(*z, A);

    RhoResult ex = rho_exact(*z, B, A);
    RhoResult gr = rho_greedy(*z, B, A);
    RhoResult cl = rho_cluster_bound(*z, B, A);
    REQUIRE(cl.value <= ex.value);
    REQUIRE(ex.value <= gr.value);
    REQUIRE(is_cover(*z, B, A, ex.witness));
    REQUIRE(is_cover(*z, B, A, gr.witness));
    if (B.size() <= 10) REQUIRE(ex.value == brute_rho(*z, B, A));
  }
}

TEST_CASE("growth sequence on the line, small demands") {
  GroupPtr z = Group::zd(1);
  GrowthSequence gs = build_growth_sequence(z, 1, {{1, 0}, {1, 0}});
  CHECK(gs.radii == std::vector<int64_t>{1, 6, 31});
  CHECK(gs.required == std::vector<int64_t>{3, 3});
  CHECK(gs.certified == std::vector<int64_t>{3, 3});
  CHECK_THROWS_AS(build_growth_sequence(z, 0, {{1, 0}}), SpecError);
  CHECK_THROWS_AS(build_growth_sequence(z, 1, {}), SpecError);
}

TEST_CASE("growth sequence on the plane") {
  GroupPtr z2 = Group::zd(2);
  GrowthSequence gs = build_growth_sequence(z2, 1, {{1, 0}});
  CHECK(gs.radii == std::vector<int64_t>{1, 6});
  CHECK(gs.required == std::vector<int64_t>{3});
  // greedy placements land on the full 3x3 grid of spacing-five points
  CHECK(gs.certified == std::vector<int64_t>{9});
}

TEST_CASE("two level blueprint on the line") {
  GroupPtr z = Group::zd(1);
  Blueprint bp = build_blueprint(build_growth_sequence(z, 1, {{1, 0}, {1, 0}}));

  CHECK(prints(*z, bp.seed) ==
        std::vector<std::string>{"(0)", "(1)", "(-1)"});
  REQUIRE(bp.levels.size() == 2);

  const BlueprintLevel& l1 = bp.levels[0];
  CHECK(prints(*z, l1.delta[0]) ==
        std::vector<std::string>{"(0)", "(3)", "(-3)"});
  CHECK(l1.tile.size() == 9);
  CHECK(span(l1.tile) == std::pair<int64_t, int64_t>{-4, 4});
  CHECK(z->print(l1.gamma) == "(0)");
  CHECK(z->print(l1.alpha) == "(3)");
  CHECK(z->print(l1.beta) == "(-3)");
  CHECK(z->print(l1.a) == "(3)");
  CHECK(z->print(l1.b) == "(-3)");
  CHECK(l1.ledger.empty());
  CHECK(!l1.theta.has_value());

  const BlueprintLevel& l2 = bp.levels[1];
  CHECK(prints(*z, l2.delta[1]) ==
        std::vector<std::string>{"(0)", "(9)", "(-9)", "(18)", "(-18)",
                                 "(27)", "(-27)"});
  CHECK(l2.delta[0].empty());
  CHECK(l2.tile.size() == 63);
  CHECK(span(l2.tile) == std::pair<int64_t, int64_t>{-31, 31});
  CHECK(z->print(l2.alpha) == "(9)");
  CHECK(z->print(l2.beta) == "(-9)");
  CHECK(z->print(l2.a) == "(12)");
  CHECK(z->print(l2.b) == "(-12)");
  CHECK(prints(*z, l2.ledger) ==
        std::vector<std::string>{"(18)", "(-18)", "(27)", "(-27)"});
  REQUIRE(l2.theta.has_value());
  CHECK(z->print(*l2.theta) == "(18)");

  REQUIRE(bp.positions.size() == 3);
  CHECK(bp.positions[2] == std::vector<Elem>{z->identity()});
  CHECK(bp.positions[1] == l2.delta[1]);
  CHECK(bp.positions[0].size() == 21);
  CHECK(bp.dd[1][0] == l1.delta[0]);

  CHECK(verify_blueprint(bp).all_confirmed());
}

TEST_CASE("blueprint flags a thin top transversal") {
  GroupPtr z = Group::zd(1);
  GrowthSequence gs;
  gs.group = z;
  gs.radii = {1, 3};
  CHECK_THROWS_AS(build_blueprint(gs), SpecError);
}

TEST_CASE("standard blueprint freezes the line numbers") {
  const Blueprint& bp = standard_z_blueprint();
  const Group& z = *bp.group;

  CHECK(bp.growth.radii == std::vector<int64_t>{1, 86, 776, 6986});
  CHECK(bp.growth.required == std::vector<int64_t>{35, 4, 4});
  CHECK(bp.growth.certified == std::vector<int64_t>{35, 5, 5});

  REQUIRE(bp.levels.size() == 3);
  const BlueprintLevel& l1 = bp.levels[0];
  const BlueprintLevel& l2 = bp.levels[1];
  const BlueprintLevel& l3 = bp.levels[2];

  CHECK(l1.delta[0].size() == 57);
  CHECK(span(l1.delta[0]) == std::pair<int64_t, int64_t>{-84, 84});
  CHECK(l1.tile.size() == 171);
  CHECK(span(l1.tile) == std::pair<int64_t, int64_t>{-85, 85});

  CHECK(prints(z, l2.delta[1]) ==
        std::vector<std::string>{"(0)", "(171)", "(-171)", "(342)", "(-342)",
                                 "(513)", "(-513)", "(684)", "(-684)"});
  CHECK(l2.delta[0].empty());
  CHECK(l2.tile.size() == 1539);
  CHECK(span(l2.tile) == std::pair<int64_t, int64_t>{-769, 769});

  CHECK(prints(z, l3.delta[2]) ==
        std::vector<std::string>{"(0)", "(1539)", "(-1539)", "(3078)",
                                 "(-3078)", "(4617)", "(-4617)", "(6156)",
                                 "(-6156)"});
  CHECK(l3.delta[1].empty());
  CHECK(l3.delta[0].empty());
  CHECK(l3.tile.size() == 13851);
  CHECK(span(l3.tile) == std::pair<int64_t, int64_t>{-6925, 6925});

  CHECK(z.print(l1.a) == "(3)");
  CHECK(z.print(l1.b) == "(-3)");
  CHECK(z.print(l2.a) == "(174)");
  CHECK(z.print(l2.b) == "(-174)");
  CHECK(z.print(l3.a) == "(1713)");
  CHECK(z.print(l3.b) == "(-1713)");

  CHECK(l1.ledger.size() == 54);
  CHECK(l2.ledger.size() == 6);
  CHECK(l3.ledger.size() == 6);
  CHECK(z.print(*l1.theta) == "(6)");
  CHECK(z.print(*l2.theta) == "(342)");
  CHECK(z.print(*l3.theta) == "(3078)");

  REQUIRE(bp.positions.size() == 4);
  CHECK(bp.positions[3].size() == 1);
  CHECK(bp.positions[2].size() == 9);
  CHECK(bp.positions[1].size() == 81);
  CHECK(bp.positions[0].size() == 4617);

  CHECK(verify_blueprint(bp).all_confirmed());
}

TEST_CASE("blueprint survives the wire") {
  GroupPtr z = Group::zd(1);
  Blueprint bp = build_blueprint(build_growth_sequence(z, 1, {{1, 0}, {1, 0}}));
  nlohmann::json j = bp.to_json();
  Blueprint back = Blueprint::from_json(j);
  CHECK(back.to_json().dump() == j.dump());
  CHECK(verify_blueprint(back).all_confirmed());
  CHECK_THROWS(Blueprint::from_json(nlohmann::json::object()));
}

TEST_CASE("blueprint verifier notices tampering") {
  GroupPtr z = Group::zd(1);
  Blueprint bp = build_blueprint(build_growth_sequence(z, 1, {{1, 0}, {1, 0}}));

  SUBCASE("swapped position") {
    Blueprint bad = bp;
    bad.positions[0][0] = ze(100);
    BlueprintVerifyReport r = verify_blueprint(bad);
    // a relocated seed slot breaks translate uniformity at every level but
    // leaves the tiles themselves intact
    CHECK(r.levels[0].uniform.status == Status::Refuted);
    CHECK(r.levels[1].uniform.status == Status::Refuted);
    CHECK(r.levels[0].disjoint.status == Status::Confirmed);
    CHECK(r.levels[0].coherent.status == Status::Confirmed);
    CHECK(r.levels[0].dense.status == Status::Confirmed);
    CHECK(r.levels[1].growth.status == Status::Confirmed);
  }

  SUBCASE("stray tile cell") {
    Blueprint bad = bp;
    bad.levels[0].tile.push_back(ze(5));
    BlueprintVerifyReport r = verify_blueprint(bad);
    // the fattened tile now clips its window neighbour and no longer splits
    // into its sub-tiles
    CHECK(r.levels[0].disjoint.status == Status::Refuted);
    CHECK(r.levels[0].coherent.status == Status::Refuted);
    CHECK(r.levels[1].coherent.status == Status::Refuted);
    CHECK(r.levels[1].disjoint.status == Status::Confirmed);
    CHECK(r.levels[0].dense.status == Status::Confirmed);
    CHECK(r.levels[1].growth.status == Status::Confirmed);
  }

  SUBCASE("renamed alpha") {
    Blueprint bad = bp;
    bad.levels[1].alpha = ze(18);
    BlueprintVerifyReport r = verify_blueprint(bad);
    CHECK(r.levels[1].growth.status == Status::Refuted);
    CHECK(r.levels[0].growth.status == Status::Confirmed);
    CHECK(r.levels[0].uniform.status == Status::Confirmed);
    CHECK(r.levels[1].disjoint.status == Status::Confirmed);
    CHECK(r.levels[1].dense.status == Status::Confirmed);
    CHECK(r.levels[1].coherent.status == Status::Confirmed);
  }

  SUBCASE("colliding extra slot") {
    Blueprint bad = bp;
    bad.levels[1].delta[0] = {ze(0)};
    BlueprintVerifyReport r = verify_blueprint(bad);
    // the injected seed slot lands on cells the head row already claims, so
    // the split fails and nothing aggregates
    CHECK(r.levels[1].coherent.status == Status::Refuted);
    CHECK(r.levels[0].uniform.status == Status::Refuted);
    CHECK(r.levels[1].uniform.status == Status::Refuted);
    CHECK(r.levels[0].coherent.status == Status::Confirmed);
    CHECK(r.levels[0].disjoint.status == Status::Confirmed);
    CHECK(r.levels[1].disjoint.status == Status::Confirmed);
    CHECK(r.levels[0].growth.status == Status::Confirmed);
    CHECK(r.levels[1].growth.status == Status::Confirmed);
  }

  SUBCASE("gutted window slots") {
    Blueprint bad = bp;
    bad.positions[1] = {ze(0), ze(18), ze(-18), ze(27), ze(-27)};
    BlueprintVerifyReport r = verify_blueprint(bad);
    // dropping the +-9 slots opens a hole the thickened tiles cannot cover,
    // right where the prefix can see the whole candidate zone
    CHECK(r.levels[0].dense.status == Status::Refuted);
    REQUIRE(r.levels[0].dense.counterexample.has_value());
    CHECK(*r.levels[0].dense.counterexample == ze(9));
    CHECK(r.levels[0].disjoint.status == Status::Confirmed);
    CHECK(r.levels[1].dense.status == Status::Confirmed);
  }
}
