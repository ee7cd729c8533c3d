#include "subshift/render.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "subshift/group.hpp"

namespace subshift {

namespace {

char sample_of(const PartialColoring& w, const Elem& e) {
  auto it = w.values.find(e);
  if (it == w.values.end()) return '1';
  return it->second ? '2' : '0';
}

}  // namespace

std::string render_pgm(const PartialColoring& w) {
  if (!w.group || w.group->kind() != Group::Kind::Zd ||
      w.group->identity().vec.size() != 2)
    throw SpecError("pgm rendering needs a window over the plane");
  if (w.window.empty()) throw SpecError("window is not a rectangle");

  int64_t x0 = std::numeric_limits<int64_t>::max(), x1 = -x0;
  int64_t y0 = x0, y1 = -x0;
  std::unordered_set<Elem> seen;
  for (const Elem& e : w.window) {
    x0 = std::min(x0, e.vec[0]);
    x1 = std::max(x1, e.vec[0]);
    y0 = std::min(y0, e.vec[1]);
    y1 = std::max(y1, e.vec[1]);
    seen.insert(e);
  }
  int64_t width = x1 - x0 + 1, height = y1 - y0 + 1;
  if (width * height != static_cast<int64_t>(seen.size()) ||
      seen.size() != w.window.size())
    throw SpecError("window is not a rectangle");

  std::string out = "P2\n" + std::to_string(width) + " " +
                    std::to_string(height) + "\n2\n";
  Elem cell;
  cell.vec = {0, 0};
  for (int64_t y = y0; y <= y1; ++y) {
    for (int64_t x = x0; x <= x1; ++x) {
      cell.vec[0] = x;
      cell.vec[1] = y;
      if (x > x0) out += ' ';
      out += sample_of(w, cell);
    }
    out += '\n';
  }
  return out;
}

std::string render_dot(const PartialColoring& w, int64_t radius) {
  if (!w.group || w.group->kind() != Group::Kind::Free)
    throw SpecError("dot rendering needs a window over a free group");
  if (radius < 0) throw SpecError("dot rendering needs radius >= 0");

  const Group& g = *w.group;
  std::vector<Elem> nodes = g.ball(radius);

  std::string out = "digraph ball {\n";
  for (const Elem& e : nodes) {
    std::string word = g.print(e);
    auto it = w.values.find(e);
    out += "  \"" + word + "\" [label=\"" + word + "=";
    if (it == w.values.end())
      out += "?\", style=dashed];\n";
    else
      out += std::string(1, static_cast<char>('0' + it->second)) + "\"];\n";
  }
  for (const Elem& e : nodes) {
    if (e.word.empty()) continue;
    Elem parent;
    parent.word = e.word.substr(0, e.word.size() - 1);
    out += "  \"" + g.print(parent) + "\" -> \"" + g.print(e) + "\";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace subshift
