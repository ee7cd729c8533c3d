#pragma once

// Seed functions that pin down their own placement, and the staged partial
// coloring a blueprint carries on its window: per-level membership tests, a
// ledger of spendable free points, and extensions that buy blocking,
// orthogonality, or strong blocking one ledger slot at a time.

#include "subshift/blueprint.hpp"
#include "subshift/coloring.hpp"

namespace subshift {

// finite map containing the identity whose pattern cannot sit on top of a
// shifted copy of itself
struct LocallyRecognizable {
  GroupPtr group;
  std::vector<Elem> domain;     // enumeration order, identity present
  std::vector<uint8_t> values;  // parallel to domain

  std::optional<uint8_t> value_at(const Elem& e) const;
  nlohmann::json to_json() const;
  static LocallyRecognizable from_json(const nlohmann::json& j);
};

struct LrReport {
  bool ok = false;
  bool nontrivial = false;
  std::optional<Elem> offender;  // the shift with no separating partner
};

// scans every nonidentity a in the domain for a partner b with ab in the
// domain and R(ab) != R(b)
LrReport check_locally_recognizable(const LocallyRecognizable& R);

// grows an arbitrary finite map into a nontrivial locally recognizable one:
// two fresh points, a third clear of all products, then the product square
LocallyRecognizable extend_locally_recognizable(const GroupPtr& g,
                                                const std::vector<Elem>& B,
                                                const std::vector<uint8_t>& q);

// the staged values on a blueprint window; cells are determined bits, free
// ledger points, or the two horizon cells the next stage would claim
struct FundamentalPrefix {
  Blueprint bp;
  LocallyRecognizable recog;             // padded to the whole base tile
  std::vector<Elem> window;              // stage-top tile, enumeration order
  std::vector<Cell> cells;               // parallel to window
  std::vector<std::vector<Elem>> theta;  // free slots left, level n at [n-1]
  std::vector<std::vector<Elem>> test_region;     // V_n, level n at [n-1]
  std::vector<std::vector<uint8_t>> test_values;  // P_n, parallel to V_n

  int stages() const { return static_cast<int>(theta.size()); }
  const std::vector<Elem>& slots(int n) const;  // level-n centers in window
  bool in_window(const Elem& e) const;
  Cell cell_at(const Elem& e) const;  // Horizon outside the window

  Coloring as_coloring() const;      // free and horizon cells stay undefined
  Coloring completion(int fill) const;  // every undefined cell reads as fill

  nlohmann::json to_json() const;
  static FundamentalPrefix from_json(const nlohmann::json& j);

  void reindex();  // rebuild the cell lookup after mutating window or cells
  std::unordered_map<Elem, int64_t, ElemHash> slot;  // window index lookup
};

// runs the staged construction over the first n_stages levels of bp; R must
// fit inside the base tile and is padded there by 1 - R(identity)
FundamentalPrefix build_fundamental(const Blueprint& bp,
                                    const LocallyRecognizable& R,
                                    int n_stages);

// does x look like a level-n center at g: x(gv) = P_n(v) over the test region
bool membership_test(const FundamentalPrefix& fm, int n, const Coloring& x,
                     const Elem& g);

// sweeps the window: the test must pass exactly on the level-n centers
WitnessReport check_level_membership(const FundamentalPrefix& fm, int n);

// ledger slots needed to block one shift at level n: enough bits for any
// greedy coloring of the center graph
int64_t block_slot_count(const Blueprint& bp, int n);

// per shift s_n: graph-color the level-n centers whose translated tiles can
// collide under s_n, then write each center's color in binary across its
// first block_slot_count ledger slots
FundamentalPrefix extend_block_all(const FundamentalPrefix& fm,
                                   const std::vector<Elem>& shifts);
// the probe set those written bits make work for shift n; pass the
// pre-extension prefix so the spent slots are still on the ledger
std::vector<Elem> block_test_set(const FundamentalPrefix& pre, int n);

// broadcasts tau(n-1) into the front ledger slot of every level-n center
FundamentalPrefix orthogonal_extension(const FundamentalPrefix& fm,
                                       const std::vector<uint8_t>& tau);
std::vector<Elem> orthogonal_test_set(const FundamentalPrefix& pre, int n);

// plants count disequalities x(s_n p) != x(p) at fresh free points, one per
// freshly chosen level; returns only the written cells
PartialColoring strong_extension(const FundamentalPrefix& fm,
                                 const std::vector<Elem>& shifts, int count);

// completion(fill) with the patch written on top
Coloring overlay_on(const FundamentalPrefix& fm, const PartialColoring& patch,
                    int fill);

// stamps the pattern on every base-level center of the window, zero elsewhere
Coloring minimal_from_pattern(const Blueprint& bp, const std::vector<Elem>& A,
                              const std::vector<uint8_t>& pattern);

}  // namespace subshift
