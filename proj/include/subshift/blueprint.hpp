#pragma once

// Tile blueprints: greedy packings, the covering number rho with exact,
// greedy and cluster-certified modes, growth sequences sized by demand
// targets, and the nested multi-level blueprint built over them.

#include <optional>

#include "subshift/verify.hpp"

namespace subshift {

// set algebra helpers; Z intervals take endpoint shortcuts
std::vector<Elem> set_inverse(const Group& g, const std::vector<Elem>& s);
std::vector<Elem> set_product(const Group& g, const std::vector<Elem>& a,
                              const std::vector<Elem>& b);
// {g in ball(r) : g v in ball(r) for all v}
std::vector<Elem> shrink_into_ball(const Group& g, int64_t r,
                                   const std::vector<Elem>& v);

// greedy packing of translates of A, enumeration order: g joins when gA fits
// inside region minus forbidden and misses every tile already chosen
std::vector<Elem> max_disjoint(const Group& g, const std::vector<Elem>& A,
                               const std::vector<Elem>& region,
                               const std::vector<Elem>& forbidden = {});

struct RhoResult {
  int64_t value = 0;
  std::vector<Elem> witness;
  bool exact = false;
};

// rho(B; A): the least D inside B meeting every translate gA that fits in B
RhoResult rho_exact(const Group& g, const std::vector<Elem>& B,
                    const std::vector<Elem>& A, int64_t exact_bound = 20);
// |max_disjoint(A, B)|: a valid covering set, so an upper bound
RhoResult rho_greedy(const Group& g, const std::vector<Elem>& B,
                     const std::vector<Elem>& A);
// pairwise separated demand clusters, each forcing its own covering point
RhoResult rho_cluster_bound(const Group& g, const std::vector<Elem>& B,
                            const std::vector<Elem>& A);

// demand target for one growth level: need rho >= max(3, clog2(coeff * k^degree))
// where k is the size of the ball being sized
struct GrowthTarget {
  int64_t coeff = 1;
  int degree = 0;
};

struct GrowthSequence {
  GroupPtr group;
  std::vector<int64_t> radii;        // H_n = ball(radii[n])
  std::vector<GrowthTarget> targets;  // per level >= 1
  std::vector<int64_t> required;      // demand actually imposed per level
  std::vector<int64_t> certified;     // cluster bound achieved per level
};

GrowthSequence build_growth_sequence(const GroupPtr& g, int64_t seed_radius,
                                     const std::vector<GrowthTarget>& targets);

struct BlueprintLevel {
  std::vector<Elem> tile;                // F_n
  std::vector<std::vector<Elem>> delta;  // delta[k]: level-k tile positions
  Elem gamma, alpha, beta;               // first three transversal points
  Elem a, b;                             // alpha_n...alpha_1, beta_n...beta_1
  std::vector<Elem> ledger;              // spare transversal points
  std::optional<Elem> theta;             // first spare, if any
};

struct Blueprint {
  GroupPtr group;
  GrowthSequence growth;
  std::vector<Elem> seed;              // F_0
  std::vector<BlueprintLevel> levels;  // levels[n-1] describes level n
  // positions[k]: where level-k tiles sit inside the top tile (D rows)
  std::vector<std::vector<Elem>> positions;
  // full position triangle dd[n][k], rebuilt rather than serialized
  std::vector<std::vector<std::vector<Elem>>> dd;

  int top_level() const { return static_cast<int>(levels.size()); }
  const std::vector<Elem>& tile(int n) const {
    return n == 0 ? seed : levels.at(n - 1).tile;
  }

  nlohmann::json to_json() const;
  static Blueprint from_json(const nlohmann::json& j);
};

Blueprint build_blueprint(const GrowthSequence& gs);

// the five axioms, reported per level: disjoint translates, density of the
// thickened centers, nesting coherence, translate uniformity, and the
// three-point growth requirement
struct BlueprintAxiomReports {
  WitnessReport disjoint, dense, coherent, uniform, growth;
};

struct BlueprintVerifyReport {
  std::vector<BlueprintAxiomReports> levels;  // level n sits at index n-1
  bool all_confirmed() const;
  nlohmann::json to_json(const Group& g) const;
};

BlueprintVerifyReport verify_blueprint(const Blueprint& bp);

// the three-level workhorse on Z: seed ball(1), demand 32k^4 then 16
GrowthSequence standard_z_growth();
const Blueprint& standard_z_blueprint();

}  // namespace subshift
