#pragma once

// Window-bounded checks for blocking, orthogonality, minimality and friends.
// Every check reports one of three verdicts: confirmed on the window (with a
// reusable witness probe set), refuted (with the first counterexample in
// enumeration order, only possible when the caller supplied the probe set),
// or inconclusive (a search ran out of radius).  A read that lands on an
// undefined cell raises WindowTooSmallError unless the check runs in partial
// mode, where such probes are simply not usable as witnesses.

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "subshift/coloring.hpp"

namespace subshift {

enum class Status { Confirmed, Refuted, Inconclusive };

std::string status_string(Status s);
Status status_from_string(const std::string& s);

class WindowTooSmallError : public std::runtime_error {
 public:
  WindowTooSmallError(std::string point, const std::string& context)
      : std::runtime_error("window too small: undetermined cell at " + point +
                           " while " + context),
        point(std::move(point)) {}
  std::string point;
};

struct WitnessReport {
  Status status = Status::Inconclusive;
  std::optional<std::vector<Elem>> witness;  // iff Confirmed
  std::optional<Elem> counterexample;        // iff Refuted, single-point checks
  std::optional<std::pair<Elem, Elem>> counterexample_pair;  // iff Refuted, pairs
  int64_t window_radius = -1;                // -1: window given as explicit set
  std::optional<int64_t> searched_radius;    // iff Inconclusive

  nlohmann::json to_json(const Group& g) const;
  static WitnessReport from_json(const nlohmann::json& j, const Group& g);
};

struct SearchOpts {
  std::optional<std::vector<Elem>> T;  // probe set; absent = search balls
  std::vector<Elem> exceptional;       // near-blocking: tolerated failures
  int64_t r_max = 8;                   // search depth when T is absent
  bool one_sided = false;              // Z only: probe balls become [0..r]
  bool partial = false;                // undefined reads skip a probe
  bool minimize = false;               // report the greedy-minimal witness
  int64_t window_radius = -1;          // echoed into the report
};

// forall g in W exists t in T: x(gt) != x(gst)
WitnessReport check_blocking(const Coloring& x, const Elem& s,
                             const std::vector<Elem>& W,
                             const SearchOpts& opts = {});

// forall g0,g1 in W exists t in T: x(g0 t) != y(g1 t)
WitnessReport check_orthogonality(const Coloring& x, const Coloring& y,
                                  const std::vector<Elem>& W,
                                  const SearchOpts& opts = {});

// forall g in W exists t in T: forall a in A: x(gta) = x(a)
WitnessReport check_minimality(const Coloring& x, const std::vector<Elem>& A,
                               const std::vector<Elem>& W,
                               const SearchOpts& opts = {});

// exists t in W: x(st) != x(t); never refuted, only confirmed/inconclusive
WitnessReport check_aperiodic(const Coloring& x, const Elem& s,
                              const std::vector<Elem>& W);

// |{g in W : x(sg) != x(g), both defined}|
int64_t check_strong_blocking(const Coloring& x, const Elem& s,
                              const std::vector<Elem>& W);

// forall g in W exists t in T: gt not in A, membership given as a predicate
WitnessReport check_slender(const GroupPtr& g,
                            const std::function<bool(const Elem&)>& member,
                            const std::vector<Elem>& W,
                            const SearchOpts& opts = {});

// forall g in W: (forall v in V: x(gv) = P(v)) <=> g in delta_window
WitnessReport check_membership_test(
    const Coloring& x, const std::vector<Elem>& delta_window,
    const std::vector<std::pair<Elem, uint8_t>>& VP, const std::vector<Elem>& W,
    const SearchOpts& opts = {});

// --------------------------------------------------------------------------
// Exhaustive census of k-ary points of a small finite group.

struct Census {
  int64_t total = 0;
  int64_t aperiodic = 0;
  int64_t two_colorings = 0;  // equals aperiodic: finite orbit closures
  int64_t orbit_count = 0;    // orbits among aperiodic points
  int64_t orthogonal_pairs = 0;        // aperiodic cross-orbit pairs
  int64_t max_orthogonal_family = 0;   // = orbit_count
  std::vector<uint8_t> is_aperiodic;   // indexed by point code
  std::vector<std::vector<uint8_t>> representatives;  // lex-least per orbit
};

Census brute_force_colorings(const GroupPtr& g, int k);

// does point x (values by enumeration index) block s on all of G?
bool census_blocks(const GroupPtr& g, const std::vector<uint8_t>& x,
                   const Elem& s);

// --------------------------------------------------------------------------
// Read auditing: wrap a coloring so tests can assert which cells get read.

struct ReadAudit {
  int64_t reads = 0;
  bool capture = false;
  std::vector<Elem> log;
};

Coloring instrumented(const Coloring& x, std::shared_ptr<ReadAudit> audit);

}  // namespace subshift
