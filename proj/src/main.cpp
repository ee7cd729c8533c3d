// subshift-forge: build constructions, verify window claims, render artifacts.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "subshift/blueprint.hpp"
#include "subshift/constructors.hpp"
#include "subshift/fundamental.hpp"
#include "subshift/json_io.hpp"
#include "subshift/render.hpp"
#include "subshift/tilings.hpp"
#include "subshift/verify.hpp"

namespace {

using nlohmann::json;
using namespace subshift;

constexpr const char* kTool = "subshift-forge";

struct Options {
  std::string spec_path, group_json, out_path, format, input;
  int64_t window_radius = std::numeric_limits<int64_t>::min();
  int64_t exact_rho_bound = -1;
  int threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw SpecError("bad JSON in " + path + ": " + e.what());
  }
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SpecError("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

// payload to --out (with provenance sidecar) or stdout
void emit(const Options& opt, const std::string& cmd, const json& spec,
          const std::string& payload) {
  if (opt.out_path.empty()) {
    std::cout << payload;
    return;
  }
  atomic_write(opt.out_path, payload);
  json meta = {{"tool", kTool}, {"command", cmd}, {"spec", spec}};
  atomic_write(opt.out_path + ".meta.json", pretty(meta));
}

// safety rail: SUBSHIFT_FORGE_MAX_CELLS caps any window the driver builds
int64_t cell_cap() {
  const char* raw = std::getenv("SUBSHIFT_FORGE_MAX_CELLS");
  if (!raw || !*raw) return -1;
  return std::strtoll(raw, nullptr, 10);
}

std::vector<Elem> guarded_ball(const GroupPtr& g, int64_t r) {
  if (r < 0) throw SpecError("window radius must be >= 0");
  int64_t cap = cell_cap();
  if (cap >= 0 && g->kind() == Group::Kind::Zd) {
    int d = static_cast<int>(g->identity().vec.size());
    long double cells = 1;
    for (int i = 0; i < d; ++i) cells *= 2.0L * r + 1;
    if (cells > static_cast<long double>(cap))
      throw SpecError("window exceeds SUBSHIFT_FORGE_MAX_CELLS");
  }
  std::vector<Elem> w = g->ball(r);
  if (cap >= 0 && static_cast<int64_t>(w.size()) > cap)
    throw SpecError("window exceeds SUBSHIFT_FORGE_MAX_CELLS");
  return w;
}

int exit_of(Status s) {
  switch (s) {
    case Status::Confirmed: return 0;
    case Status::Refuted: return 1;
    default: return 2;
  }
}

int worst_exit(const std::vector<Status>& all) {
  int code = 0;
  for (Status s : all) {
    if (s == Status::Refuted) return 1;
    if (s == Status::Inconclusive) code = 2;
  }
  return code;
}

SearchOpts opts_from_spec(const json& spec, const Group& g) {
  SearchOpts o;
  if (spec.contains("T")) o.T = elems_from_json(g, spec.at("T"));
  if (spec.contains("r_max")) o.r_max = spec.at("r_max").get<int64_t>();
  if (spec.contains("one_sided")) o.one_sided = spec.at("one_sided").get<bool>();
  if (spec.contains("partial")) o.partial = spec.at("partial").get<bool>();
  if (spec.contains("minimize")) o.minimize = spec.at("minimize").get<bool>();
  if (spec.contains("exceptional"))
    o.exceptional = elems_from_json(g, spec.at("exceptional"));
  if (spec.contains("window_radius"))
    o.window_radius = spec.at("window_radius").get<int64_t>();
  return o;
}

// ------------------------------------------------------------------ subjects

struct Subject {
  Coloring x;
  std::optional<PartialColoring> pc;  // set when loaded from an artifact
};

Subject resolve_subject(const json& field) {
  if (field.is_string()) {
    PartialColoring pc = PartialColoring::from_json(load_json(field.get<std::string>()));
    Coloring x = pc.as_coloring();
    return {std::move(x), std::move(pc)};
  }
  if (field.is_object() && field.contains("ctor"))
    return {coloring_from_spec(field), std::nullopt};
  if (field.is_object()) {
    PartialColoring pc = PartialColoring::from_json(field);
    Coloring x = pc.as_coloring();
    return {std::move(x), std::move(pc)};
  }
  throw SpecError("subject must be a ctor spec, an artifact object, or a path");
}

Subject primary_subject(const json& spec) {
  if (spec.contains("in")) return resolve_subject(spec.at("in"));
  if (spec.contains("x")) return resolve_subject(spec.at("x"));
  throw SpecError("no subject: give an input artifact or an \"x\" spec");
}

// keep only the centers whose probe translates stay inside the window
std::vector<Elem> visible_within(const Group& g, const std::vector<Elem>& window,
                                 const std::vector<Elem>& probes) {
  std::unordered_set<Elem> inside(window.begin(), window.end());
  std::vector<Elem> out;
  for (const Elem& c : window) {
    bool ok = true;
    for (const Elem& p : probes)
      if (!inside.count(g.mul(c, p))) {
        ok = false;
        break;
      }
    if (ok) out.push_back(c);
  }
  return out;
}

// verification window: explicit radius wins; otherwise shrink the artifact
// window so every probe stays determinate
std::vector<Elem> verify_window(const json& spec, const Subject& sub,
                                const std::vector<Elem>& probes) {
  const GroupPtr& g = sub.x.group();
  if (spec.contains("window_radius"))
    return guarded_ball(g, spec.at("window_radius").get<int64_t>());
  if (sub.pc) return visible_within(*g, sub.pc->window, probes);
  throw SpecError("no window: give --window-radius or an artifact subject");
}

std::vector<Elem> probe_set(const Group& g, const SearchOpts& o) {
  return o.T ? *o.T : g.ball(o.r_max);
}

std::vector<Elem> with_translate(const Group& g, std::vector<Elem> probes,
                                 const Elem& s) {
  size_t base = probes.size();
  for (size_t i = 0; i < base; ++i) probes.push_back(g.mul(s, probes[i]));
  return probes;
}

// ------------------------------------------------------------------ commands

int cmd_group(const Options& opt, const json& spec) {
  if (!spec.contains("group")) throw SpecError("group command needs --group");
  GroupPtr g = Group::from_json(spec.at("group"));
  json out = {{"group", g->to_json()},
              {"finite", g->is_finite()},
              {"identity", g->print(g->identity())},
              {"generators", elems_to_json(*g, g->generators())}};
  if (g->is_finite()) out["size"] = g->size();
  emit(opt, "group", spec, pretty(out));
  return 0;
}

int cmd_color_build(const Options& opt, const json& spec) {
  Coloring x = coloring_from_spec(spec);
  if (!spec.contains("window_radius"))
    throw SpecError("color-build needs a window radius");
  int64_t r = spec.at("window_radius").get<int64_t>();
  PartialColoring pc = PartialColoring::restrict_to(x, guarded_ball(x.group(), r));

  std::string format = spec.value("format", "json");
  if (format == "json") {
    emit(opt, "color-build", spec, pretty(pc.to_json()));
  } else if (format == "pgm") {
    emit(opt, "color-build", spec, render_pgm(pc));
  } else if (format == "dot") {
    emit(opt, "color-build", spec, render_dot(pc, r));
  } else {
    throw SpecError("unknown format: " + format);
  }
  return 0;
}

int cmd_color_verify(const Options& opt, const json& spec) {
  std::string prop = spec.value("prop", "");
  if (prop.empty()) throw SpecError("color-verify needs a \"prop\"");

  // slenderness talks about a set, not a coloring
  if (prop == "slender") {
    if (!spec.contains("group")) throw SpecError("slender needs --group");
    GroupPtr g = Group::from_json(spec.at("group"));
    std::vector<Elem> members = elems_from_json(*g, spec.at("A"));
    std::unordered_set<Elem> lookup(members.begin(), members.end());
    SearchOpts o = opts_from_spec(spec, *g);
    if (!spec.contains("window_radius"))
      throw SpecError("slender needs a window radius");
    std::vector<Elem> w =
        guarded_ball(g, spec.at("window_radius").get<int64_t>());
    WitnessReport rep = check_slender(
        g, [&lookup](const Elem& e) { return lookup.count(e) > 0; }, w, o);
    emit(opt, "color-verify", spec, pretty(rep.to_json(*g)));
    return exit_of(rep.status);
  }

  Subject sub = primary_subject(spec);
  const GroupPtr& g = sub.x.group();
  SearchOpts o = opts_from_spec(spec, *g);

  if (prop == "blocking" || prop == "aperiodic" || prop == "strong_blocking") {
    Elem s = g->parse(spec.at("s").get<std::string>());
    if (prop == "strong_blocking") {
      // undefined cells are skipped, so the raw window is fine
      std::vector<Elem> w = verify_window(spec, sub, {});
      int64_t count = check_strong_blocking(sub.x, s, w);
      int64_t want = spec.value("min_count", int64_t(1));
      json out = {{"count", count}, {"min_count", want}};
      emit(opt, "color-verify", spec, pretty(out));
      return count >= want ? 0 : 1;
    }
    if (prop == "aperiodic") {
      // probes are t and st, so an artifact window shrinks on the left
      std::vector<Elem> w;
      if (spec.contains("window_radius")) {
        w = guarded_ball(g, spec.at("window_radius").get<int64_t>());
      } else if (sub.pc) {
        std::unordered_set<Elem> inside(sub.pc->window.begin(),
                                        sub.pc->window.end());
        for (const Elem& t : sub.pc->window)
          if (inside.count(g->mul(s, t))) w.push_back(t);
      } else {
        throw SpecError("no window: give --window-radius or an artifact subject");
      }
      WitnessReport rep = check_aperiodic(sub.x, s, w);
      emit(opt, "color-verify", spec, pretty(rep.to_json(*g)));
      return exit_of(rep.status);
    }
    std::vector<Elem> probes = with_translate(*g, probe_set(*g, o), s);
    std::vector<Elem> w = verify_window(spec, sub, probes);
    WitnessReport rep = check_blocking(sub.x, s, w, o);
    emit(opt, "color-verify", spec, pretty(rep.to_json(*g)));
    return exit_of(rep.status);
  }

  if (prop == "orthogonality") {
    if (!spec.contains("y")) throw SpecError("orthogonality needs a \"y\"");
    Subject other = resolve_subject(spec.at("y"));
    std::vector<Elem> probes = probe_set(*g, o);
    std::vector<Elem> w = verify_window(spec, sub, probes);
    WitnessReport rep = check_orthogonality(sub.x, other.x, w, o);
    emit(opt, "color-verify", spec, pretty(rep.to_json(*g)));
    return exit_of(rep.status);
  }

  if (prop == "minimality") {
    std::vector<Elem> pattern = elems_from_json(*g, spec.at("A"));
    std::vector<Elem> probes;
    for (const Elem& t : probe_set(*g, o))
      for (const Elem& a : pattern) probes.push_back(g->mul(t, a));
    std::vector<Elem> w = verify_window(spec, sub, probes);
    WitnessReport rep = check_minimality(sub.x, pattern, w, o);
    emit(opt, "color-verify", spec, pretty(rep.to_json(*g)));
    return exit_of(rep.status);
  }

  throw SpecError("unknown prop: " + prop);
}

int cmd_tile_build(const Options& opt, const json& spec) {
  std::string kind = spec.value("kind", "");
  CccPrefix p;
  if (kind == "zd_ccc") {
    p = zd_ccc(spec.at("d").get<int>(), spec.at("m").get<int64_t>(),
               spec.at("levels").get<int>(), spec.value("one_sided", false));
  } else if (kind == "free_ccc") {
    int rank = spec.at("rank").get<int>();
    std::vector<Elem> seed;
    if (spec.contains("seed"))
      seed = elems_from_json(*Group::free_group(rank), spec.at("seed"));
    p = free_ccc(rank, spec.at("levels").get<int>(), seed);
  } else if (kind == "rf_ccc") {
    p = rf_ccc(spec.at("m").get<int64_t>(), spec.at("levels").get<int>(),
               spec.value("d", 1));
  } else {
    throw SpecError("unknown tiling kind: " + kind);
  }
  emit(opt, "tile-build", spec, pretty(p.to_json()));
  return 0;
}

int cmd_tile_verify(const Options& opt, const json& spec) {
  if (!spec.contains("in")) throw SpecError("tile-verify needs an input artifact");
  CccPrefix p = CccPrefix::from_json(load_json(spec.at("in").get<std::string>()));
  if (!spec.contains("window_radius"))
    throw SpecError("tile-verify needs a window radius");
  int64_t r = spec.at("window_radius").get<int64_t>();
  guarded_ball(p.group, r);  // cap check only
  CccVerifyReport rep = verify_ccc(p, r);
  std::vector<Status> all;
  for (const auto& lv : rep.levels)
    for (const WitnessReport* w :
         {&lv.disjoint, &lv.cover, &lv.coherent, &lv.centered, &lv.cofinal})
      all.push_back(w->status);
  emit(opt, "tile-verify", spec, pretty(rep.to_json(*p.group)));
  return worst_exit(all);
}

int cmd_blueprint_build(const Options& opt, const json& spec) {
  if (!spec.contains("group")) throw SpecError("blueprint-build needs --group");
  GroupPtr g = Group::from_json(spec.at("group"));
  std::vector<GrowthTarget> targets;
  for (const auto& t : spec.at("targets"))
    targets.push_back({t.at(0).get<int64_t>(), t.at(1).get<int>()});
  GrowthSequence gs =
      build_growth_sequence(g, spec.value("seed_radius", int64_t(1)), targets);
  Blueprint bp = build_blueprint(gs);
  emit(opt, "blueprint-build", spec, pretty(bp.to_json()));
  return 0;
}

int cmd_blueprint_verify(const Options& opt, const json& spec) {
  if (!spec.contains("in"))
    throw SpecError("blueprint-verify needs an input artifact");
  Blueprint bp = Blueprint::from_json(load_json(spec.at("in").get<std::string>()));
  BlueprintVerifyReport rep = verify_blueprint(bp);
  std::vector<Status> all;
  for (const auto& lv : rep.levels)
    for (const WitnessReport* w :
         {&lv.disjoint, &lv.dense, &lv.coherent, &lv.uniform, &lv.growth})
      all.push_back(w->status);
  emit(opt, "blueprint-verify", spec, pretty(rep.to_json(*bp.group)));
  return worst_exit(all);
}

int cmd_fm_build(const Options& opt, const json& spec) {
  if (!spec.contains("blueprint"))
    throw SpecError("fm-build needs a \"blueprint\" artifact path");
  Blueprint bp =
      Blueprint::from_json(load_json(spec.at("blueprint").get<std::string>()));
  if (!spec.contains("recog")) throw SpecError("fm-build needs a \"recog\"");
  json r = spec.at("recog");
  if (!r.contains("group")) r["group"] = bp.group->to_json();
  LocallyRecognizable recog = LocallyRecognizable::from_json(r);
  int stages = spec.value("stages", bp.top_level());
  FundamentalPrefix fm = build_fundamental(bp, recog, stages);
  emit(opt, "fm-build", spec, pretty(fm.to_json()));
  return 0;
}

FundamentalPrefix load_fm(const json& spec) {
  if (!spec.contains("in")) throw SpecError("need an input prefix artifact");
  return FundamentalPrefix::from_json(load_json(spec.at("in").get<std::string>()));
}

int cmd_fm_extend(const Options& opt, const json& spec) {
  FundamentalPrefix fm = load_fm(spec);
  const GroupPtr& g = fm.bp.group;
  std::string mode = spec.value("mode", "");
  if (mode == "block") {
    FundamentalPrefix out = extend_block_all(fm, elems_from_json(*g, spec.at("shifts")));
    emit(opt, "fm-extend", spec, pretty(out.to_json()));
    return 0;
  }
  if (mode == "orthogonal") {
    std::vector<uint8_t> tau;
    for (const auto& b : spec.at("tau")) tau.push_back(b.get<int>() ? 1 : 0);
    FundamentalPrefix out = orthogonal_extension(fm, tau);
    emit(opt, "fm-extend", spec, pretty(out.to_json()));
    return 0;
  }
  if (mode == "strong") {
    std::vector<Elem> shifts = elems_from_json(*g, spec.at("shifts"));
    int count = spec.value("count", int(shifts.size()));
    PartialColoring patch = strong_extension(fm, shifts, count);
    emit(opt, "fm-extend", spec, pretty(patch.to_json()));
    return 0;
  }
  throw SpecError("fm-extend mode must be block, orthogonal, or strong");
}

int cmd_fm_verify(const Options& opt, const json& spec) {
  FundamentalPrefix fm = load_fm(spec);
  std::vector<int> levels;
  if (spec.contains("levels"))
    for (const auto& n : spec.at("levels")) levels.push_back(n.get<int>());
  else
    for (int n = 1; n <= fm.stages(); ++n) levels.push_back(n);

  json out = json::array();
  std::vector<Status> all;
  for (int n : levels) {
    WitnessReport rep = check_level_membership(fm, n);
    all.push_back(rep.status);
    out.push_back({{"level", n}, {"report", rep.to_json(*fm.bp.group)}});
  }
  emit(opt, "fm-verify", spec, pretty(json{{"levels", out}}));
  return worst_exit(all);
}

int cmd_render(const Options& opt, const json& spec) {
  if (!spec.contains("in")) throw SpecError("render needs an input artifact");
  PartialColoring pc =
      PartialColoring::from_json(load_json(spec.at("in").get<std::string>()));
  std::string format = spec.value("format", "");
  if (format == "pgm") {
    emit(opt, "render", spec, render_pgm(pc));
  } else if (format == "dot") {
    int64_t r = spec.contains("radius") ? spec.at("radius").get<int64_t>()
                                        : spec.value("window_radius", int64_t(-1));
    if (r < 0) throw SpecError("dot rendering needs a radius");
    emit(opt, "render", spec, render_dot(pc, r));
  } else if (format == "json") {
    emit(opt, "render", spec, pretty(pc.to_json()));
  } else {
    throw SpecError("render needs --format pgm, dot, or json");
  }
  return 0;
}

int dispatch(const std::string& cmd, const Options& opt) {
  json spec = json::object();
  if (!opt.spec_path.empty()) spec = load_json(opt.spec_path);
  if (!spec.is_object()) throw SpecError("spec file must hold a JSON object");

  // flags outrank the spec file
  if (!opt.group_json.empty()) {
    try {
      spec["group"] = json::parse(opt.group_json);
    } catch (const json::exception& e) {
      throw SpecError(std::string("bad --group JSON: ") + e.what());
    }
  }
  if (opt.window_radius != std::numeric_limits<int64_t>::min())
    spec["window_radius"] = opt.window_radius;
  if (!opt.format.empty()) spec["format"] = opt.format;
  if (!opt.input.empty()) spec["in"] = opt.input;
  if (opt.exact_rho_bound >= 0) spec["exact_rho_bound"] = opt.exact_rho_bound;
  if (opt.threads > 0) spec["threads"] = opt.threads;

  if (cmd == "group") return cmd_group(opt, spec);
  if (cmd == "color-build") return cmd_color_build(opt, spec);
  if (cmd == "color-verify") return cmd_color_verify(opt, spec);
  if (cmd == "tile-build") return cmd_tile_build(opt, spec);
  if (cmd == "tile-verify") return cmd_tile_verify(opt, spec);
  if (cmd == "blueprint-build") return cmd_blueprint_build(opt, spec);
  if (cmd == "blueprint-verify") return cmd_blueprint_verify(opt, spec);
  if (cmd == "fm-build") return cmd_fm_build(opt, spec);
  if (cmd == "fm-extend") return cmd_fm_extend(opt, spec);
  if (cmd == "fm-verify") return cmd_fm_verify(opt, spec);
  if (cmd == "render") return cmd_render(opt, spec);
  throw SpecError("unknown subcommand: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subshift-forge: colorings, tilings, and their certificates"};
  app.require_subcommand(1);

  Options opt;
  const char* names[] = {"group",        "color-build",     "color-verify",
                         "tile-build",   "tile-verify",     "blueprint-build",
                         "blueprint-verify", "fm-build",    "fm-extend",
                         "fm-verify",    "render"};
  for (const char* name : names) {
    CLI::App* sub = app.add_subcommand(name, "");
    sub->add_option("input", opt.input, "input artifact path");
    sub->add_option("--spec", opt.spec_path, "JSON spec file");
    sub->add_option("--group", opt.group_json, "group descriptor JSON");
    sub->add_option("--window-radius", opt.window_radius, "window ball radius");
    sub->add_option("--out", opt.out_path, "output artifact path");
    sub->add_option("--format", opt.format, "json | pgm | dot");
    sub->add_option("--exact-rho-bound", opt.exact_rho_bound,
                    "max |B| for exact rho certificates");
    sub->add_option("--threads", opt.threads, "worker thread budget");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return dispatch(cmd, opt);
  } catch (const WindowTooSmallError& e) {
    std::cerr << "window too small: " << e.what() << "\n";
    return 3;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  }
}
