#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "subshift/constructors.hpp"
#include "subshift/fundamental.hpp"
#include "subshift/render.hpp"

using namespace subshift;

namespace {

Elem plane(int64_t x, int64_t y) {
  Elem e;
  e.vec = {x, y};
  return e;
}

std::vector<Elem> rect(int64_t x0, int64_t x1, int64_t y0, int64_t y1) {
  std::vector<Elem> out;
  for (int64_t y = y0; y <= y1; ++y)
    for (int64_t x = x0; x <= x1; ++x) out.push_back(plane(x, y));
  return out;
}

// samples after the three header lines, flattened row-major
std::vector<int> pgm_samples(const std::string& s) {
  std::istringstream in(s);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  REQUIRE(magic == "P2");
  REQUIRE(maxval == 2);
  std::vector<int> out;
  int v = 0;
  while (in >> v) out.push_back(v);
  REQUIRE(static_cast<int>(out.size()) == w * h);
  return out;
}

}  // namespace

TEST_CASE("pgm renders a constant window as flat samples") {
  auto g = Group::zd(2);
  Coloring zero = constant_coloring(g, 0);
  auto pc = PartialColoring::restrict_to(zero, g->ball(1));
  CHECK(render_pgm(pc) == "P2\n3 3\n2\n0 0 0\n0 0 0\n0 0 0\n");

  Coloring one = constant_coloring(g, 1);
  auto pc1 = PartialColoring::restrict_to(one, g->ball(1));
  CHECK(render_pgm(pc1) == "P2\n3 3\n2\n2 2 2\n2 2 2\n2 2 2\n");
}

TEST_CASE("pgm stripes follow the first coordinate") {
  auto g = Group::zd(2);
  Coloring stripes(g, "first coordinate parity", [](const Elem& e) {
    return cv(((e.vec[0] % 2) + 2) % 2);
  });
  auto pc = PartialColoring::restrict_to(stripes, rect(0, 2, 0, 2));
  CHECK(render_pgm(pc) == "P2\n3 3\n2\n0 2 0\n0 2 0\n0 2 0\n");
}

TEST_CASE("pgm rows run with y increasing downward") {
  auto g = Group::zd(2);
  Coloring dot(g, "single mark", [](const Elem& e) {
    return cv(e.vec[0] == 0 && e.vec[1] == 0);
  });
  auto pc = PartialColoring::restrict_to(dot, rect(0, 1, 0, 1));
  // the mark sits at the top-left corner, so it must lead the first row
  CHECK(render_pgm(pc) == "P2\n2 2\n2\n2 0\n0 0\n");

  auto shifted = PartialColoring::restrict_to(dot, rect(0, 1, -1, 0));
  CHECK(render_pgm(shifted) == "P2\n2 2\n2\n0 0\n2 0\n");

  auto wide = PartialColoring::restrict_to(dot, rect(-2, 0, 0, 0));
  CHECK(render_pgm(wide) == "P2\n3 1\n2\n0 0 2\n");
}

TEST_CASE("pgm marks undefined cells with the middle gray") {
  auto g = Group::zd(2);
  PartialColoring pc;
  pc.group = g;
  pc.window = rect(0, 2, 0, 0);
  pc.values[plane(0, 0)] = 0;
  pc.values[plane(2, 0)] = 1;
  CHECK(render_pgm(pc) == "P2\n3 1\n2\n0 1 2\n");
}

TEST_CASE("pgm rejects gaps, repeats, and the wrong group") {
  auto g = Group::zd(2);
  PartialColoring bent;
  bent.group = g;
  bent.window = {plane(0, 0), plane(1, 0), plane(0, 1)};
  CHECK_THROWS_WITH_AS(render_pgm(bent),
                       doctest::Contains("not a rectangle"), SpecError);

  PartialColoring doubled;
  doubled.group = g;
  doubled.window = {plane(0, 0), plane(1, 0), plane(0, 0), plane(1, 0)};
  CHECK_THROWS_WITH_AS(render_pgm(doubled),
                       doctest::Contains("not a rectangle"), SpecError);

  PartialColoring empty;
  empty.group = g;
  CHECK_THROWS_AS(render_pgm(empty), SpecError);

  auto line = Group::zd(1);
  auto flat = PartialColoring::restrict_to(constant_coloring(line, 0),
                                           line->ball(2));
  CHECK_THROWS_WITH_AS(render_pgm(flat), doctest::Contains("plane"),
                       SpecError);
}

TEST_CASE("pgm shows the open ledger of a planar prefix") {
  auto g = Group::zd(2);
  Blueprint bp = build_blueprint(build_growth_sequence(g, 1, {{1, 0}}));
  LocallyRecognizable seed;
  seed.group = g;
  seed.domain = {plane(0, 0), plane(1, 0), plane(-1, 0)};
  seed.values = {1, 1, 0};
  FundamentalPrefix fm = build_fundamental(bp, seed, 1);

  auto pc = PartialColoring::restrict_to(fm.as_coloring(), fm.window);
  std::string img = render_pgm(pc);
  std::vector<int> px = pgm_samples(img);
  REQUIRE(px.size() == 81);  // the level-1 tile is the 9x9 square

  std::unordered_set<Elem> open(fm.theta[0].begin(), fm.theta[0].end());
  open.insert(bp.levels[0].a);
  open.insert(bp.levels[0].b);
  int grays = 0;
  for (int64_t y = -4; y <= 4; ++y)
    for (int64_t x = -4; x <= 4; ++x) {
      int v = px[static_cast<size_t>((y + 4) * 9 + (x + 4))];
      if (open.count(plane(x, y))) {
        CHECK(v == 1);
        ++grays;
        // isolated: the four orthogonal neighbours are all determined
        CHECK(px[static_cast<size_t>((y + 4) * 9 + (x + 3))] != 1);
        CHECK(px[static_cast<size_t>((y + 4) * 9 + (x + 5))] != 1);
        CHECK(px[static_cast<size_t>((y + 3) * 9 + (x + 4))] != 1);
        CHECK(px[static_cast<size_t>((y + 5) * 9 + (x + 4))] != 1);
      } else {
        CHECK(v != 1);
      }
    }
  CHECK(grays == 8);
}

TEST_CASE("dot lays out the rank two ball of radius one") {
  auto g = Group::free_group(2);
  Coloring zero = constant_coloring(g, 0);
  auto pc = PartialColoring::restrict_to(zero, g->ball(1));
  CHECK(render_dot(pc, 1) ==
        "digraph ball {\n"
        "  \"e\" [label=\"e=0\"];\n"
        "  \"a\" [label=\"a=0\"];\n"
        "  \"A\" [label=\"A=0\"];\n"
        "  \"b\" [label=\"b=0\"];\n"
        "  \"B\" [label=\"B=0\"];\n"
        "  \"e\" -> \"a\";\n"
        "  \"e\" -> \"A\";\n"
        "  \"e\" -> \"b\";\n"
        "  \"e\" -> \"B\";\n"
        "}\n");
}

TEST_CASE("dot gives every shell one value under a wordlength coloring") {
  auto free = Group::free_group(2);
  auto line = Group::zd(1);
  Coloring parity(line, "parity", [](const Elem& e) {
    return cv(((e.vec[0] % 2) + 2) % 2);
  });
  Coloring wl = free_wordlength(free, parity);
  auto pc = PartialColoring::restrict_to(wl, free->ball(2));
  std::string dot = render_dot(pc, 2);

  std::istringstream in(dot);
  std::string ln;
  int checked = 0;
  while (std::getline(in, ln)) {
    auto pos = ln.find("[label=\"");
    if (pos == std::string::npos) continue;
    std::string label = ln.substr(pos + 8, ln.find('"', pos + 8) - pos - 8);
    auto eq = label.find('=');
    std::string word = label.substr(0, eq);
    std::string val = label.substr(eq + 1);
    size_t len = word == "e" ? 0 : word.size();
    CHECK(val == (len % 2 ? "1" : "0"));
    ++checked;
  }
  CHECK(checked == 1 + 4 + 12);
}

TEST_CASE("dot node set equals the ball and missing cells are dashed") {
  auto g = Group::free_group(2);
  Coloring zero = constant_coloring(g, 0);
  auto pc = PartialColoring::restrict_to(zero, g->ball(1));
  std::string dot = render_dot(pc, 2);

  std::unordered_set<std::string> ids;
  std::istringstream in(dot);
  std::string ln;
  while (std::getline(in, ln)) {
    auto pos = ln.find("[label=");
    if (pos == std::string::npos) continue;
    std::string id = ln.substr(3, ln.find('"', 3) - 3);
    ids.insert(id);
    bool dashed = ln.find("style=dashed") != std::string::npos;
    bool inside = id == "e" || id.size() <= 1;
    CHECK(dashed == !inside);
    if (dashed) CHECK(ln.find("=?\"") != std::string::npos);
  }
  std::unordered_set<std::string> want;
  for (const Elem& e : g->ball(2)) want.insert(g->print(e));
  CHECK(ids == want);

  int edges = 0;
  std::istringstream in2(dot);
  while (std::getline(in2, ln))
    if (ln.find("->") != std::string::npos) ++edges;
  CHECK(edges == 16);  // every non-identity word hangs off its prefix

  auto line = Group::zd(1);
  auto flat = PartialColoring::restrict_to(constant_coloring(line, 0),
                                           line->ball(1));
  CHECK_THROWS_WITH_AS(render_dot(flat, 1), doctest::Contains("free"),
                       SpecError);
  CHECK_THROWS_AS(render_dot(pc, -1), SpecError);
}
