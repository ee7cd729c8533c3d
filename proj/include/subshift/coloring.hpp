#pragma once

// Two-colorings of a group and partial ones: a cell is 0, 1, intentionally
// free (the construction never pins it), or beyond the horizon of what a
// finite prefix determines.  Verification treats both undefined kinds the
// same; ledger bookkeeping wants them apart.

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "subshift/group.hpp"

namespace subshift {

enum class Cell : uint8_t { Zero = 0, One = 1, Free = 2, Horizon = 3 };

inline bool is_defined(Cell c) { return c == Cell::Zero || c == Cell::One; }

struct CellValue {
  Cell cell = Cell::Horizon;
  int level = 0;  // horizon depth: which prefix stage gave up

  bool defined() const { return is_defined(cell); }
  int bit() const { return cell == Cell::One ? 1 : 0; }
  bool operator==(const CellValue&) const = default;
};

inline CellValue cv(int bit) {
  return {bit ? Cell::One : Cell::Zero, 0};
}

class Coloring {
 public:
  Coloring() = default;
  Coloring(GroupPtr g, std::string desc,
           std::function<CellValue(const Elem&)> eval)
      : group_(std::move(g)), desc_(std::move(desc)), eval_(std::move(eval)) {}

  const GroupPtr& group() const { return group_; }
  const std::string& describe() const { return desc_; }

  CellValue at(const Elem& g) const { return eval_(g); }

  // defined cells only; throws on free/horizon cells
  int bit(const Elem& g) const {
    CellValue v = at(g);
    if (!v.defined())
      throw SpecError("coloring undefined at " + group_->print(g));
    return v.bit();
  }

 private:
  GroupPtr group_;
  std::string desc_;
  std::function<CellValue(const Elem&)> eval_;
};

Coloring constant_coloring(GroupPtr g, int bit);
Coloring shift(const Coloring& x, const Elem& g);  // (g.x)(h) = x(g^-1 h)
Coloring conjugate(const Coloring& x);             // flip defined cells
Coloring spread3(const Coloring& x);               // Z only: x'(3n) = x(n), else 0

struct PartialColoring {
  GroupPtr group;
  std::vector<Elem> window;  // enumeration order, no repeats
  std::unordered_map<Elem, uint8_t, ElemHash> values;  // keys subset of window

  static PartialColoring restrict_to(const Coloring& x,
                                     std::vector<Elem> window);
  Coloring as_coloring() const;  // Free inside window, Horizon outside
  void validate() const;

  nlohmann::json to_json() const;
  static PartialColoring from_json(const nlohmann::json& j);
};

}  // namespace subshift
