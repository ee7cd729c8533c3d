#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "subshift_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string file_in(const std::string& name, const std::string& content) {
  fs::path p = work_dir() / name;
  std::ofstream(p) << content;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct RunResult {
  int code;
  std::string out;
};

RunResult run_cli(const std::string& argline, const std::string& env = "") {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string(SUBSHIFT_FORGE_BIN) + " " + argline + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string arg(const std::string& path) { return " " + path; }

}  // namespace

TEST_CASE("color build writes byte stable artifacts with a sidecar") {
  std::string spec = file_in(
      "cb.json",
      R"({"ctor":"substitution_z","alpha":"000","level":3,"window_radius":200})");
  std::string out = (work_dir() / "x.json").string();
  std::string out2 = (work_dir() / "x_again.json").string();

  CHECK(run_cli("color-build --spec " + spec + " --out " + out).code == 0);
  CHECK(run_cli("color-build --spec " + spec + " --out " + out2).code == 0);
  CHECK(slurp(out) == slurp(out2));

  json artifact = json::parse(slurp(out));
  CHECK(artifact.at("group").at("kind") == "Zd");
  CHECK(artifact.at("window").size() == 401);
  CHECK(artifact.at("values").size() == 401);  // total on its window

  json meta = json::parse(slurp(out + ".meta.json"));
  CHECK(meta.at("command") == "color-build");
  CHECK(meta.at("spec").at("alpha") == "000");
  CHECK(!meta.contains("timestamp"));
}

TEST_CASE("the documented pipeline verifies blocking and rejects s equal one") {
  std::string artifact = (work_dir() / "x.json").string();
  std::string good = file_in("cv.json", R"({"prop":"blocking","s":"1","r_max":12})");
  RunResult r = run_cli("color-verify" + arg(artifact) + " --spec " + good);
  CHECK(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep.at("status") == "ConfirmedOnWindow");
  CHECK(rep.at("witness").size() >= 1);

  std::string bad = file_in("cv0.json", R"({"prop":"blocking","s":"0","r_max":12})");
  CHECK(run_cli("color-verify" + arg(artifact) + " --spec " + bad).code == 64);
}

TEST_CASE("verify exit codes track the verdict") {
  std::string flat = file_in("flat.json",
                             R"({"prop":"blocking","s":"1","T":["0"],
                                 "x":{"ctor":"constant",
                                      "group":{"kind":"Zd","params":{"d":1}},
                                      "bit":0},
                                 "window_radius":5})");
  RunResult refuted = run_cli("color-verify --spec " + flat);
  CHECK(refuted.code == 1);
  CHECK(json::parse(refuted.out).at("status") == "Refuted");

  std::string searching = file_in("flat2.json",
                                  R"({"prop":"blocking","s":"1","r_max":2,
                                      "x":{"ctor":"constant",
                                           "group":{"kind":"Zd","params":{"d":1}},
                                           "bit":0},
                                      "window_radius":5})");
  CHECK(run_cli("color-verify --spec " + searching).code == 2);

  // probing past an artifact window with an explicit radius is a size error
  std::string artifact = (work_dir() / "x.json").string();
  std::string wide = file_in("wide.json",
                             R"({"prop":"blocking","s":"1","T":["0","1","-1"]})");
  CHECK(run_cli("color-verify" + arg(artifact) + " --spec " + wide +
                " --window-radius 400")
            .code == 3);
}

TEST_CASE("orthogonality minimality and strong counts run from specs") {
  std::string orth = file_in(
      "orth.json",
      R"({"prop":"orthogonality",
          "x":{"ctor":"substitution_z","alpha":"00"},
          "y":{"ctor":"substitution_z","alpha":"11"},
          "T":["0","49","98","147","196","245","294","343"],
          "window_radius":504})");
  CHECK(run_cli("color-verify --spec " + orth).code == 0);

  std::string minim = file_in("minim.json",
                              R"({"prop":"minimality",
                                  "x":{"ctor":"substitution_z","alpha":"00"},
                                  "A":["0","1","2","3"],
                                  "r_max":196,"window_radius":200})");
  CHECK(run_cli("color-verify --spec " + minim).code == 0);

  std::string strong = file_in("strong.json",
                               R"({"prop":"strong_blocking","s":"1",
                                   "x":{"ctor":"morse_thue"},
                                   "min_count":100,"window_radius":256})");
  RunResult r = run_cli("color-verify --spec " + strong);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("count").get<int64_t>() >= 100);

  std::string slender = file_in("slender.json",
                                R"({"prop":"slender",
                                    "group":{"kind":"Zd","params":{"d":1}},
                                    "A":["0","1"],"T":["0","2"],
                                    "window_radius":6})");
  CHECK(run_cli("color-verify --spec " + slender).code == 0);
}

TEST_CASE("tile commands build and verify a ccc prefix") {
  std::string spec = file_in("tb.json", R"({"kind":"zd_ccc","d":1,"m":3,"levels":3})");
  std::string out = (work_dir() / "tiles.json").string();
  CHECK(run_cli("tile-build --spec " + spec + " --out " + out).code == 0);
  CHECK(run_cli("tile-verify" + arg(out) + " --window-radius 64").code == 0);

  std::string freec = file_in("tf.json", R"({"kind":"free_ccc","rank":2,"levels":4})");
  std::string fout = (work_dir() / "ftiles.json").string();
  CHECK(run_cli("tile-build --spec " + freec + " --out " + fout).code == 0);
  CHECK(run_cli("tile-verify" + arg(fout) + " --window-radius 4").code == 0);
}

TEST_CASE("blueprint and fm commands chain into a working pipeline") {
  std::string bspec = file_in("bb.json", R"({"seed_radius":1,"targets":[[32,4]]})");
  std::string bp = (work_dir() / "bp.json").string();
  CHECK(run_cli("blueprint-build --spec " + bspec +
                " --group '{\"kind\":\"Zd\",\"params\":{\"d\":1}}' --out " + bp)
            .code == 0);
  CHECK(run_cli("blueprint-verify" + arg(bp)).code == 0);

  std::string fspec = file_in(
      "fb.json", "{\"blueprint\":\"" + bp +
                     "\",\"recog\":{\"domain\":[\"0\",\"1\",\"-1\"],"
                     "\"values\":[1,1,0]},\"stages\":1}");
  std::string fm = (work_dir() / "fm.json").string();
  CHECK(run_cli("fm-build --spec " + fspec + " --out " + fm).code == 0);
  CHECK(run_cli("fm-verify" + arg(fm)).code == 0);

  std::string block = file_in("feb.json", R"({"mode":"block","shifts":["1"]})");
  std::string fmb = (work_dir() / "fm_block.json").string();
  CHECK(run_cli("fm-extend" + arg(fm) + " --spec " + block + " --out " + fmb).code == 0);
  json extended = json::parse(slurp(fmb));
  CHECK(extended.at("theta").at(0).size() < json::parse(slurp(fm)).at("theta").at(0).size());

  std::string strong = file_in("fes.json",
                               R"({"mode":"strong","shifts":["40"],"count":1})");
  RunResult r = run_cli("fm-extend" + arg(fm) + " --spec " + strong);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("values").size() >= 1);
}

TEST_CASE("render reproduces the library formats") {
  std::string plane = file_in(
      "plane.json",
      R"({"ctor":"rf_parity","group":{"kind":"Zd","params":{"d":2}},
          "m":2,"window_radius":2})");
  std::string w2 = (work_dir() / "w2.json").string();
  CHECK(run_cli("color-build --spec " + plane + " --out " + w2).code == 0);
  RunResult pgm = run_cli("render" + arg(w2) + " --format pgm");
  CHECK(pgm.code == 0);
  CHECK(pgm.out ==
        "P2\n5 5\n2\n2 0 2 0 2\n0 0 0 0 0\n2 0 0 0 2\n0 0 0 0 0\n2 0 2 0 2\n");

  // pgm straight out of color-build matches the render subcommand
  RunResult direct = run_cli("color-build --spec " + plane + " --format pgm");
  CHECK(direct.out == pgm.out);

  std::string words = file_in(
      "words.json",
      R"({"ctor":"free_wordlength","group":{"kind":"Free","params":{"rank":2}},
          "base":{"ctor":"morse_thue"},"window_radius":2})");
  std::string wf = (work_dir() / "wf.json").string();
  CHECK(run_cli("color-build --spec " + words + " --out " + wf).code == 0);
  RunResult dot = run_cli("render" + arg(wf) + " --format dot --window-radius 1");
  CHECK(dot.code == 0);
  CHECK(dot.out.find("\"e\" [label=\"e=0\"];") != std::string::npos);
  CHECK(dot.out.find("\"a\" [label=\"a=1\"];") != std::string::npos);
  CHECK(dot.out.find("\"e\" -> \"B\";") != std::string::npos);

  CHECK(run_cli("render" + arg(wf) + " --format pgm").code == 64);
}

TEST_CASE("spec violations and the cell cap exit with the schema code") {
  CHECK(run_cli("color-build").code == 64);  // no ctor anywhere
  CHECK(run_cli("nonsense").code == 64);
  std::string spec = (work_dir() / "cb.json").string();
  CHECK(run_cli("color-build --spec " + spec,
                "SUBSHIFT_FORGE_MAX_CELLS=10").code == 64);
  CHECK(run_cli("color-build --spec " + spec,
                "SUBSHIFT_FORGE_MAX_CELLS=100000").code == 0);
  std::string badfmt = file_in("badfmt.json",
                               R"({"ctor":"morse_thue","window_radius":4})");
  CHECK(run_cli("color-build --spec " + badfmt + " --format webp").code == 64);
}
