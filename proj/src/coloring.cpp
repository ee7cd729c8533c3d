#include "subshift/coloring.hpp"

#include <algorithm>
#include <unordered_set>

namespace subshift {

Coloring constant_coloring(GroupPtr g, int bit) {
  CellValue v = cv(bit);
  return Coloring(std::move(g), "constant(" + std::to_string(bit) + ")",
                  [v](const Elem&) { return v; });
}

Coloring shift(const Coloring& x, const Elem& g) {
  GroupPtr grp = x.group();
  Elem ginv = grp->inv(g);
  return Coloring(grp, "shift(" + grp->print(g) + ";" + x.describe() + ")",
                  [x, grp, ginv](const Elem& h) {
                    return x.at(grp->mul(ginv, h));
                  });
}

Coloring conjugate(const Coloring& x) {
  return Coloring(x.group(), "conjugate(" + x.describe() + ")",
                  [x](const Elem& h) {
                    CellValue v = x.at(h);
                    if (v.cell == Cell::Zero) v.cell = Cell::One;
                    else if (v.cell == Cell::One) v.cell = Cell::Zero;
                    return v;
                  });
}

Coloring spread3(const Coloring& x) {
  GroupPtr g = x.group();
  if (g->kind() != Group::Kind::Zd || g->identity().vec.size() != 1)
    throw SpecError("spread3 is defined on Z");
  return Coloring(g, "spread3(" + x.describe() + ")", [x](const Elem& h) {
    int64_t n = h.vec[0];
    if (n % 3 != 0) return cv(0);
    Elem inner;
    inner.vec = {n / 3};
    return x.at(inner);
  });
}

PartialColoring PartialColoring::restrict_to(const Coloring& x,
                                             std::vector<Elem> window) {
  PartialColoring out;
  out.group = x.group();
  sort_enumeration(*out.group, window);
  window.erase(std::unique(window.begin(), window.end()), window.end());
  out.window = std::move(window);
  for (const auto& g : out.window) {
    CellValue v = x.at(g);
    if (v.defined()) out.values.emplace(g, static_cast<uint8_t>(v.bit()));
  }
  return out;
}

Coloring PartialColoring::as_coloring() const {
  auto vals = std::make_shared<std::unordered_map<Elem, uint8_t, ElemHash>>(
      values);
  auto win = std::make_shared<std::unordered_set<Elem, ElemHash>>(
      window.begin(), window.end());
  return Coloring(group, "partial", [vals, win](const Elem& g) -> CellValue {
    auto it = vals->find(g);
    if (it != vals->end()) return cv(it->second);
    if (win->count(g)) return {Cell::Free, 0};
    return {Cell::Horizon, 0};
  });
}

void PartialColoring::validate() const {
  if (!group) throw SpecError("partial coloring without group");
  std::unordered_set<Elem, ElemHash> seen;
  int64_t prev = -1;
  for (const auto& g : window) {
    if (!seen.insert(g).second)
      throw SpecError("window repeats " + group->print(g));
    int64_t idx = group->index_of(g);
    if (idx <= prev) throw SpecError("window is not in enumeration order");
    prev = idx;
  }
  for (const auto& [g, v] : values) {
    if (!seen.count(g))
      throw SpecError("value outside window at " + group->print(g));
    if (v > 1) throw SpecError("cell value must be 0 or 1");
  }
}

nlohmann::json PartialColoring::to_json() const {
  nlohmann::json j;
  j["group"] = group->to_json();
  auto win = nlohmann::json::array();
  for (const auto& g : window) win.push_back(group->print(g));
  j["window"] = std::move(win);
  auto vals = nlohmann::json::array();
  for (const auto& g : window) {
    auto it = values.find(g);
    if (it != values.end())
      vals.push_back(nlohmann::json::array({group->print(g), it->second}));
  }
  j["values"] = std::move(vals);
  return j;
}

PartialColoring PartialColoring::from_json(const nlohmann::json& j) {
  PartialColoring out;
  try {
    out.group = Group::from_json(j.at("group"));
    for (const auto& s : j.at("window"))
      out.window.push_back(out.group->parse(s.get<std::string>()));
    for (const auto& pair : j.at("values")) {
      if (!pair.is_array() || pair.size() != 2)
        throw SpecError("values entries must be [element, bit] pairs");
      int bit = pair.at(1).get<int>();
      if (bit != 0 && bit != 1) throw SpecError("cell value must be 0 or 1");
      out.values.emplace(out.group->parse(pair.at(0).get<std::string>()),
                         static_cast<uint8_t>(bit));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad partial coloring: ") + e.what());
  }
  out.validate();
  return out;
}

}  // namespace subshift
