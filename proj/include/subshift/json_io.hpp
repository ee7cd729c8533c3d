#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "subshift/coloring.hpp"
#include "subshift/group.hpp"

namespace subshift {

// Evaluator built from a constructor spec such as
//   {"ctor":"substitution_z","alpha":"010"}
//   {"ctor":"shift","by":"(3)","base":{...}}
// Groups appear as descriptors, elements as print strings, nested
// colorings as sub-specs.  Unknown fields are ignored so a spec may carry
// driver settings (window radius, output paths) alongside the recipe.
Coloring coloring_from_spec(const nlohmann::json& spec);

// element lists on the wire: arrays of print strings
std::vector<Elem> elems_from_json(const Group& g, const nlohmann::json& list);
nlohmann::json elems_to_json(const Group& g, const std::vector<Elem>& v);

}  // namespace subshift
