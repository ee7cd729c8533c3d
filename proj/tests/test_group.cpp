#include <doctest.h>

#include <algorithm>
#include <set>

#include "subshift/group.hpp"

using namespace subshift;

namespace {

std::vector<std::string> printed(const Group& g, const std::vector<Elem>& v) {
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(g.print(e));
  return out;
}

std::vector<std::string> prefix(const Group& g, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(g.print(g.enumerate(i)));
  return out;
}

// Klein four-group
const std::vector<std::vector<int>> kKlein = {
    {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};

}  // namespace

TEST_CASE("Z enumeration alternates sign, positive first") {
  auto z = Group::zd(1);
  CHECK(prefix(*z, 7) == std::vector<std::string>{"(0)", "(1)", "(-1)", "(2)",
                                                  "(-2)", "(3)", "(-3)"});
  for (int i = 0; i < 500; ++i)
    CHECK(z->index_of(z->enumerate(i)) == i);
}

TEST_CASE("Z^2 shells are sup-norm, descending lex inside a shell") {
  auto g = Group::zd(2);
  auto p = prefix(*g, 9);
  CHECK(p[0] == "(0,0)");
  // shell 1 in descending lex: (1,1) > (1,0) > (1,-1) > (0,1) > (0,-1) > ...
  CHECK(p[1] == "(1,1)");
  CHECK(p[2] == "(1,0)");
  CHECK(p[3] == "(1,-1)");
  CHECK(p[4] == "(0,1)");
  CHECK(p[5] == "(0,-1)");
  CHECK(p[6] == "(-1,1)");
  CHECK(p[7] == "(-1,0)");
  CHECK(p[8] == "(-1,-1)");
  CHECK(g->ball(1).size() == 9);
  CHECK(g->ball(3).size() == 49);
  CHECK(g->shell(2).size() == 25 - 9);
  for (int i = 0; i < 800; ++i)
    CHECK(g->index_of(g->enumerate(i)) == i);
}

TEST_CASE("free group enumeration: length, then a < A < b < B") {
  auto f = Group::free_group(2);
  CHECK(prefix(*f, 6) ==
        std::vector<std::string>{"e", "a", "A", "b", "B", "aa"});
  auto p = prefix(*f, 21);
  CHECK(p[6] == "ab");
  CHECK(p[7] == "aB");
  CHECK(p[8] == "AA");
  CHECK(p[9] == "Ab");
  CHECK(p[10] == "AB");
  CHECK(p[11] == "ba");
  CHECK(p[16] == "BB");
  CHECK(p[17] == "aaa");
  CHECK(p[20] == "aba");
  // |ball(r)| = 2*3^r - 1 for rank 2
  CHECK(f->ball(0).size() == 1);
  CHECK(f->ball(1).size() == 5);
  CHECK(f->ball(2).size() == 17);
  CHECK(f->ball(3).size() == 53);
  for (int i = 0; i < 2000; ++i)
    CHECK(f->index_of(f->enumerate(i)) == i);
}

TEST_CASE("free group multiplication reduces words") {
  auto f = Group::free_group(2);
  auto w = f->mul(f->parse("aba"), f->parse("Ab"));
  CHECK(f->print(w) == "abb");
  CHECK(f->print(f->inv(f->parse("abA"))) == "aBA");
  CHECK(f->mul(f->parse("ab"), f->inv(f->parse("ab"))) == f->identity());
  CHECK(f->parse("aA") == f->identity());
  CHECK(f->print(f->parse("abBA")) == "e");
  CHECK_THROWS_AS(f->parse("c"), SpecError);
}

TEST_CASE("Zd parse and print round-trip") {
  auto z = Group::zd(1);
  CHECK(z->print(z->parse("5")) == "(5)");
  CHECK(z->print(z->parse("(-3)")) == "(-3)");
  auto g = Group::zd(2);
  CHECK(g->print(g->parse("(1,-2)")) == "(1,-2)");
  CHECK(g->print(g->parse(" ( 1 , -2 ) ")) == "(1,-2)");
  CHECK_THROWS_AS(g->parse("7"), SpecError);
  CHECK_THROWS_AS(g->parse("(1)"), SpecError);
  CHECK_THROWS_AS(z->parse("(1,2)"), SpecError);
  CHECK_THROWS_AS(z->parse("abc"), SpecError);
}

TEST_CASE("finite table validation") {
  auto k = Group::finite(kKlein);
  CHECK(k->size() == 4);
  CHECK(k->print(k->mul(k->parse("#1"), k->parse("#2"))) == "#3");
  CHECK(k->inv(k->parse("#2")) == k->parse("#2"));
  CHECK(k->ball(1).size() == 4);
  CHECK(k->ball(0).size() == 1);

  // identity not at index 0
  CHECK_THROWS_AS(Group::finite({{1, 0}, {0, 1}}), SpecError);
  // not associative: a row permutation picked to break (0*1)*1 = 1*... shape
  CHECK_THROWS_AS(Group::finite({{0, 1, 2}, {1, 0, 0}, {2, 0, 1}}), SpecError);
  // not square
  CHECK_THROWS_AS(Group::finite({{0, 1}}), SpecError);
  // row repeats an entry
  CHECK_THROWS_AS(Group::finite({{0, 0}, {1, 1}}), SpecError);
}

TEST_CASE("product enumeration pairs diagonals over component indices") {
  auto zz = Group::product(Group::zd(1), Group::zd(1));
  auto p = prefix(*zz, 6);
  CHECK(p[0] == "<(0)|(0)>");
  CHECK(p[1] == "<(0)|(1)>");
  CHECK(p[2] == "<(1)|(0)>");
  CHECK(p[3] == "<(0)|(-1)>");
  CHECK(p[4] == "<(1)|(1)>");
  CHECK(p[5] == "<(-1)|(0)>");
  for (int i = 0; i < 400; ++i)
    CHECK(zz->index_of(zz->enumerate(i)) == i);

  // length is additive and ball(r) collects exactly |g|+|h| <= r
  auto b2 = zz->ball(2);
  for (const auto& e : b2) CHECK(zz->length(e) <= 2);
  CHECK(b2.size() == 13);  // sum_{a+b<=2} |shell(a)|*|shell(b)|
  CHECK(std::is_sorted(b2.begin(), b2.end(),
                       [&](const Elem& x, const Elem& y) {
                         return zz->index_of(x) < zz->index_of(y);
                       }));

  auto zf = Group::product(Group::zd(1), Group::finite(kKlein));
  for (int i = 0; i < 200; ++i)
    CHECK(zf->index_of(zf->enumerate(i)) == i);
  CHECK(zf->print(zf->parse("<5|#3>")) == "<(5)|#3>");
}

TEST_CASE("nested product wire format splits at the top level") {
  auto g = Group::product(Group::zd(2),
                          Group::product(Group::free_group(1), Group::zd(1)));
  auto e = g->parse("<(1,-2)|<a|(3)>>");
  CHECK(g->print(e) == "<(1,-2)|<a|(3)>>");
  CHECK(g->length(e) == 2 + 1 + 3);
  CHECK_THROWS_AS(g->parse("(1,-2)"), SpecError);
}

TEST_CASE("group laws hold on a small ball, every kind") {
  std::vector<GroupPtr> gs = {
      Group::zd(1), Group::zd(2), Group::free_group(2), Group::finite(kKlein),
      Group::product(Group::zd(1), Group::finite(kKlein))};
  for (const auto& g : gs) {
    auto b = g->ball(g->kind() == Group::Kind::Free ? 2 : 2);
    for (const auto& x : b) {
      CHECK(g->mul(x, g->identity()) == x);
      CHECK(g->mul(g->identity(), x) == x);
      CHECK(g->mul(x, g->inv(x)) == g->identity());
      CHECK(g->length(g->inv(x)) == g->length(x));
      for (const auto& y : b) {
        CHECK(g->length(g->mul(x, y)) <= g->length(x) + g->length(y));
        for (const auto& z : b)
          CHECK(g->mul(g->mul(x, y), z) == g->mul(x, g->mul(y, z)));
      }
    }
  }
}

TEST_CASE("descriptor JSON round-trips") {
  std::vector<GroupPtr> gs = {
      Group::zd(3), Group::free_group(2), Group::finite(kKlein),
      Group::product(Group::free_group(1), Group::zd(2))};
  for (const auto& g : gs) {
    auto back = Group::from_json(g->to_json());
    CHECK(back->to_json() == g->to_json());
    CHECK(back->same_as(*g));
  }
  CHECK_THROWS_AS(Group::from_json(nlohmann::json{{"kind", "Sl2"}}), SpecError);
  CHECK(Group::from_json(nlohmann::json::parse(
            R"({"kind":"Zd","params":{"d":1}})"))
            ->print(Group::zd(1)->enumerate(1)) == "(1)");
}

TEST_CASE("ball contents match length filter on an enumeration prefix") {
  auto f = Group::free_group(2);
  auto b = f->ball(3);
  std::set<std::string> seen;
  for (const auto& e : b) seen.insert(f->print(e));
  for (int i = 0; i < 200; ++i) {
    auto e = f->enumerate(i);
    CHECK(seen.count(f->print(e)) == (f->length(e) <= 3 ? 1u : 0u));
  }
  auto s2 = f->shell(2);
  CHECK(s2.size() == 12);
  for (const auto& e : s2) CHECK(f->length(e) == 2);
}

TEST_CASE("generators line up with shell(1)") {
  CHECK(printed(*Group::zd(2), Group::zd(2)->generators()).size() == 8);
  auto f = Group::free_group(2);
  CHECK(printed(*f, f->generators()) ==
        std::vector<std::string>{"a", "A", "b", "B"});
  auto fin = Group::finite(kKlein);
  CHECK(fin->generators().size() == 3);
}
