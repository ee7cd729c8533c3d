// Python surface: JSON strings at the boundary, print strings for elements.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "subshift/blueprint.hpp"
#include "subshift/constructors.hpp"
#include "subshift/fundamental.hpp"
#include "subshift/json_io.hpp"
#include "subshift/render.hpp"
#include "subshift/tilings.hpp"
#include "subshift/verify.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace subshift;

namespace {

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("bad ") + what + ": " + e.what());
  }
}

GroupPtr group_of(const std::string& descriptor) {
  return Group::from_json(parse_json(descriptor, "group descriptor"));
}

std::vector<Elem> parse_all(const Group& g, const std::vector<std::string>& v) {
  std::vector<Elem> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(g.parse(s));
  return out;
}

SearchOpts make_opts(const Group& g,
                     const std::optional<std::vector<std::string>>& T,
                     int64_t r_max, bool one_sided, bool partial, bool minimize,
                     const std::vector<std::string>& exceptional,
                     int64_t window_radius) {
  SearchOpts o;
  if (T) o.T = parse_all(g, *T);
  o.r_max = r_max;
  o.one_sided = one_sided;
  o.partial = partial;
  o.minimize = minimize;
  o.exceptional = parse_all(g, exceptional);
  o.window_radius = window_radius;
  return o;
}

std::string report_str(const WitnessReport& rep, const Group& g) {
  return rep.to_json(g).dump();
}

LocallyRecognizable make_recog(const GroupPtr& g,
                               const std::vector<std::string>& domain,
                               const std::vector<int>& values) {
  LocallyRecognizable r;
  r.group = g;
  r.domain = parse_all(*g, domain);
  for (int b : values) r.values.push_back(b ? 1 : 0);
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "subshift-forge core: colorings, tilings, blueprints, verifiers";

  py::register_exception<SpecError>(m, "SpecError");
  py::register_exception<WindowTooSmallError>(m, "WindowTooSmallError");

  // -------------------------------------------------------------- coloring
  py::class_<Coloring>(m, "Coloring")
      .def("group_json", [](const Coloring& x) { return x.group()->to_json().dump(); })
      .def("describe", &Coloring::describe)
      .def("at",
           [](const Coloring& x, const std::string& g) -> py::object {
             CellValue v = x.at(x.group()->parse(g));
             if (!v.defined()) return py::none();
             return py::int_(v.bit());
           },
           py::arg("g"))
      .def("window", [](const Coloring& x, int64_t radius) {
        return PartialColoring::restrict_to(x, x.group()->ball(radius));
      }, py::arg("radius"));

  py::class_<PartialColoring>(m, "Window")
      .def_static("from_json",
                  [](const std::string& text) {
                    return PartialColoring::from_json(parse_json(text, "window"));
                  })
      .def("to_json", [](const PartialColoring& w) { return w.to_json().dump(); })
      .def("as_coloring", &PartialColoring::as_coloring)
      .def("size", [](const PartialColoring& w) { return w.window.size(); })
      .def("defined_count", [](const PartialColoring& w) { return w.values.size(); })
      .def("pgm", [](const PartialColoring& w) { return render_pgm(w); })
      .def("dot", [](const PartialColoring& w, int64_t radius) {
        return render_dot(w, radius);
      }, py::arg("radius"));

  m.def("coloring", [](const std::string& spec) {
    return coloring_from_spec(parse_json(spec, "ctor spec"));
  }, py::arg("spec"), "build an evaluator from a ctor spec (JSON string)");

  // ----------------------------------------------------------------- groups
  m.def("group_info", [](const std::string& descriptor) {
    GroupPtr g = group_of(descriptor);
    json out = {{"group", g->to_json()},
                {"finite", g->is_finite()},
                {"identity", g->print(g->identity())},
                {"generators", elems_to_json(*g, g->generators())}};
    if (g->is_finite()) out["size"] = g->size();
    return out.dump();
  }, py::arg("descriptor"));

  m.def("group_ball", [](const std::string& descriptor, int64_t radius) {
    GroupPtr g = group_of(descriptor);
    std::vector<std::string> out;
    for (const Elem& e : g->ball(radius)) out.push_back(g->print(e));
    return out;
  }, py::arg("descriptor"), py::arg("radius"));

  // -------------------------------------------------------------- verifiers
  m.def("check_blocking",
        [](const Coloring& x, const std::string& s, int64_t window_radius,
           const std::optional<std::vector<std::string>>& T, int64_t r_max,
           bool one_sided, bool partial, bool minimize,
           const std::vector<std::string>& exceptional) {
          const Group& g = *x.group();
          SearchOpts o = make_opts(g, T, r_max, one_sided, partial, minimize,
                                   exceptional, window_radius);
          WitnessReport rep =
              check_blocking(x, g.parse(s), x.group()->ball(window_radius), o);
          return report_str(rep, g);
        },
        py::arg("x"), py::arg("s"), py::arg("window_radius"),
        py::arg("T") = py::none(), py::arg("r_max") = 8,
        py::arg("one_sided") = false, py::arg("partial") = false,
        py::arg("minimize") = false,
        py::arg("exceptional") = std::vector<std::string>{});

  m.def("check_orthogonality",
        [](const Coloring& x, const Coloring& y, int64_t window_radius,
           const std::optional<std::vector<std::string>>& T, int64_t r_max,
           bool partial) {
          const Group& g = *x.group();
          SearchOpts o = make_opts(g, T, r_max, false, partial, false, {},
                                   window_radius);
          WitnessReport rep =
              check_orthogonality(x, y, x.group()->ball(window_radius), o);
          return report_str(rep, g);
        },
        py::arg("x"), py::arg("y"), py::arg("window_radius"),
        py::arg("T") = py::none(), py::arg("r_max") = 8,
        py::arg("partial") = false);

  m.def("check_minimality",
        [](const Coloring& x, const std::vector<std::string>& A,
           int64_t window_radius, const std::optional<std::vector<std::string>>& T,
           int64_t r_max) {
          const Group& g = *x.group();
          SearchOpts o = make_opts(g, T, r_max, false, false, false, {},
                                   window_radius);
          WitnessReport rep = check_minimality(x, parse_all(g, A),
                                               x.group()->ball(window_radius), o);
          return report_str(rep, g);
        },
        py::arg("x"), py::arg("A"), py::arg("window_radius"),
        py::arg("T") = py::none(), py::arg("r_max") = 8);

  m.def("check_aperiodic",
        [](const Coloring& x, const std::string& s, int64_t window_radius) {
          const Group& g = *x.group();
          WitnessReport rep =
              check_aperiodic(x, g.parse(s), x.group()->ball(window_radius));
          return report_str(rep, g);
        },
        py::arg("x"), py::arg("s"), py::arg("window_radius"));

  m.def("check_strong_blocking",
        [](const Coloring& x, const std::string& s, int64_t window_radius) {
          const Group& g = *x.group();
          return check_strong_blocking(x, g.parse(s),
                                       x.group()->ball(window_radius));
        },
        py::arg("x"), py::arg("s"), py::arg("window_radius"));

  m.def("check_slender",
        [](const std::string& descriptor, const std::vector<std::string>& A,
           int64_t window_radius, const std::optional<std::vector<std::string>>& T,
           int64_t r_max) {
          GroupPtr g = group_of(descriptor);
          std::vector<Elem> members = parse_all(*g, A);
          std::unordered_set<Elem> lookup(members.begin(), members.end());
          SearchOpts o = make_opts(*g, T, r_max, false, false, false, {},
                                   window_radius);
          WitnessReport rep = check_slender(
              g, [lookup](const Elem& e) { return lookup.count(e) > 0; },
              g->ball(window_radius), o);
          return report_str(rep, *g);
        },
        py::arg("group"), py::arg("A"), py::arg("window_radius"),
        py::arg("T") = py::none(), py::arg("r_max") = 8);

  // ---------------------------------------------------------------- tilings
  py::class_<CccPrefix>(m, "CccPrefix")
      .def_static("from_json",
                  [](const std::string& text) {
                    return CccPrefix::from_json(parse_json(text, "ccc prefix"));
                  })
      .def("to_json", [](const CccPrefix& p) { return p.to_json().dump(); })
      .def("levels", [](const CccPrefix& p) { return p.levels.size(); })
      .def("verify", [](const CccPrefix& p, int64_t window_radius) {
        return verify_ccc(p, window_radius).to_json(*p.group).dump();
      }, py::arg("window_radius"));

  m.def("zd_ccc", &zd_ccc, py::arg("d"), py::arg("m"), py::arg("levels"),
        py::arg("one_sided") = false);
  m.def("free_ccc", [](int rank, int levels) { return free_ccc(rank, levels); },
        py::arg("rank"), py::arg("levels"));
  m.def("rf_ccc", &rf_ccc, py::arg("m"), py::arg("levels"), py::arg("d") = 1);

  // -------------------------------------------------------------- blueprint
  py::class_<Blueprint>(m, "Blueprint")
      .def_static("from_json",
                  [](const std::string& text) {
                    return Blueprint::from_json(parse_json(text, "blueprint"));
                  })
      .def("to_json", [](const Blueprint& bp) { return bp.to_json().dump(); })
      .def("top_level", &Blueprint::top_level)
      .def("radii", [](const Blueprint& bp) { return bp.growth.radii; })
      .def("verify", [](const Blueprint& bp) {
        BlueprintVerifyReport rep = verify_blueprint(bp);
        json out = {{"all_confirmed", rep.all_confirmed()},
                    {"levels", rep.to_json(*bp.group)}};
        return out.dump();
      });

  m.def("build_blueprint",
        [](const std::string& descriptor, int64_t seed_radius,
           const std::vector<std::pair<int64_t, int>>& targets) {
          std::vector<GrowthTarget> ts;
          for (const auto& [coeff, degree] : targets) ts.push_back({coeff, degree});
          return build_blueprint(
              build_growth_sequence(group_of(descriptor), seed_radius, ts));
        },
        py::arg("group"), py::arg("seed_radius"), py::arg("targets"));
  m.def("standard_blueprint", [] { return standard_z_blueprint(); });

  // ------------------------------------------------------------- fundamental
  py::class_<FundamentalPrefix>(m, "Fundamental")
      .def_static("from_json",
                  [](const std::string& text) {
                    return FundamentalPrefix::from_json(
                        parse_json(text, "fundamental prefix"));
                  })
      .def("to_json", [](const FundamentalPrefix& fm) { return fm.to_json().dump(); })
      .def("stages", &FundamentalPrefix::stages)
      .def("theta_sizes",
           [](const FundamentalPrefix& fm) {
             std::vector<size_t> out;
             for (const auto& row : fm.theta) out.push_back(row.size());
             return out;
           })
      .def("as_coloring", &FundamentalPrefix::as_coloring)
      .def("completion", &FundamentalPrefix::completion, py::arg("fill"))
      .def("verify_level",
           [](const FundamentalPrefix& fm, int n) {
             return report_str(check_level_membership(fm, n), *fm.bp.group);
           },
           py::arg("n"))
      .def("extend_block",
           [](const FundamentalPrefix& fm, const std::vector<std::string>& shifts) {
             return extend_block_all(fm, parse_all(*fm.bp.group, shifts));
           },
           py::arg("shifts"))
      .def("extend_orthogonal",
           [](const FundamentalPrefix& fm, const std::vector<int>& tau) {
             std::vector<uint8_t> bits;
             for (int b : tau) bits.push_back(b ? 1 : 0);
             return orthogonal_extension(fm, bits);
           },
           py::arg("tau"))
      .def("strong_patch",
           [](const FundamentalPrefix& fm, const std::vector<std::string>& shifts,
              int count) {
             return strong_extension(fm, parse_all(*fm.bp.group, shifts), count);
           },
           py::arg("shifts"), py::arg("count"));

  m.def("build_fundamental",
        [](const Blueprint& bp, const std::vector<std::string>& domain,
           const std::vector<int>& values, int stages) {
          return build_fundamental(bp, make_recog(bp.group, domain, values),
                                   stages);
        },
        py::arg("blueprint"), py::arg("domain"), py::arg("values"),
        py::arg("stages"));
}
