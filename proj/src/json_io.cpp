#include "subshift/json_io.hpp"

#include <map>

#include "subshift/constructors.hpp"

namespace subshift {

std::vector<Elem> elems_from_json(const Group& g, const nlohmann::json& list) {
  if (!list.is_array()) throw SpecError("element list must be an array");
  std::vector<Elem> out;
  out.reserve(list.size());
  for (const auto& item : list) out.push_back(g.parse(item.get<std::string>()));
  return out;
}

nlohmann::json elems_to_json(const Group& g, const std::vector<Elem>& v) {
  auto arr = nlohmann::json::array();
  for (const Elem& e : v) arr.push_back(g.print(e));
  return arr;
}

namespace {

GroupPtr group_field(const nlohmann::json& spec) {
  if (!spec.contains("group"))
    throw SpecError("ctor spec needs a \"group\" descriptor");
  return Group::from_json(spec.at("group"));
}

Coloring sub_spec(const nlohmann::json& spec, const char* key) {
  if (!spec.contains(key))
    throw SpecError(std::string("ctor spec needs \"") + key + "\"");
  return coloring_from_spec(spec.at(key));
}

Coloring dispatch(const nlohmann::json& spec) {
  std::string ctor = spec.at("ctor").get<std::string>();

  if (ctor == "substitution_z") {
    std::string alpha = spec.at("alpha").get<std::string>();
    if (spec.contains("level")) {
      int64_t level = spec.at("level").get<int64_t>();
      if (level < 0 || level > static_cast<int64_t>(alpha.size()))
        throw SpecError("substitution level must cut a prefix of alpha");
      alpha = alpha.substr(0, static_cast<size_t>(level));
    }
    return substitution_family_z(alpha).second;
  }
  if (ctor == "morse_thue") return morse_thue();
  if (ctor == "constant")
    return constant_coloring(group_field(spec), spec.at("bit").get<int>());
  if (ctor == "spread3") return spread3(sub_spec(spec, "base"));
  if (ctor == "conjugate") return conjugate(sub_spec(spec, "base"));
  if (ctor == "shift") {
    Coloring base = sub_spec(spec, "base");
    Elem by = base.group()->parse(spec.at("by").get<std::string>());
    return shift(base, by);
  }
  if (ctor == "rf_parity")
    return rf_parity(group_field(spec), spec.at("m").get<int64_t>());
  if (ctor == "free_wordlength")
    return free_wordlength(group_field(spec), sub_spec(spec, "base"));
  if (ctor == "kappa") {
    GroupPtr g = group_field(spec);
    std::vector<Coloring> xs;
    for (const auto& item : spec.at("xs")) xs.push_back(coloring_from_spec(item));
    return kappa(g, spec.at("m").get<int64_t>(),
                 elems_from_json(*g, spec.at("reps")), xs);
  }
  if (ctor == "product")
    return product_coloring(group_field(spec), sub_spec(spec, "x"),
                            sub_spec(spec, "y"));
  if (ctor == "product_mixed")
    return product_coloring_mixed(group_field(spec), sub_spec(spec, "x"),
                                  sub_spec(spec, "y"), sub_spec(spec, "z"));
  if (ctor == "quotient_extension") {
    GroupPtr g = group_field(spec);
    std::map<std::vector<int64_t>, int> z;
    for (const auto& pair : spec.at("z"))
      z[pair.at(0).get<std::vector<int64_t>>()] = pair.at(1).get<int>();
    std::vector<Coloring> ys;
    for (const auto& item : spec.at("ys")) ys.push_back(coloring_from_spec(item));
    return quotient_extension(g, spec.at("m").get<int64_t>(), z, ys);
  }
  if (ctor == "finite") return finite_group_coloring(group_field(spec));
  if (ctor == "partial")
    return PartialColoring::from_json(spec.at("data")).as_coloring();

  throw SpecError("unknown coloring ctor: " + ctor);
}

}  // namespace

Coloring coloring_from_spec(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("ctor"))
    throw SpecError("coloring spec needs a \"ctor\" field");
  try {
    return dispatch(spec);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad ctor spec: ") + e.what());
  }
}

}  // namespace subshift
