#pragma once

// Coherent centered cofinal tiling prefixes: nested exact tilings with a
// per-level transversal, either a full sublattice of Z^d or an explicit
// finite window of representatives, plus the five-axiom verifier.

#include "subshift/verify.hpp"

namespace subshift {

struct CccLevel {
  std::vector<Elem> tile;  // F_n, enumeration order
  bool lattice = false;    // transversal representation
  int64_t modulus = 0;     // lattice kind: Delta_n = (modulus Z)^d
  std::vector<Elem> delta;  // window kind: explicit transversal
  std::vector<Elem> decomp;  // F_n = disjoint union of decomp * F_{n-1}
};

struct CccPrefix {
  GroupPtr group;
  std::vector<CccLevel> levels;        // index = level, starting at 0
  std::vector<int64_t> cofinal_radii;  // enumeration prefix inside each tile

  nlohmann::json to_json() const;
  static CccPrefix from_json(const nlohmann::json& j);
};

// centered m-adic cube tiling of Z^d; one_sided anchors cubes at the origin
// corner instead, which costs the cofinality certificate
CccPrefix zd_ccc(int d, int64_t m, int levels, bool one_sided = false);

// one absorption step: the last letter of z decides how far the new
// translate w must overshoot so the enlarged set stays disjoint
struct FreeExtension {
  Elem w;
  std::vector<Elem> tiles;
};
FreeExtension free_tile_extend(const GroupPtr& f, const std::vector<Elem>& S,
                               const Elem& z);

// grows a free-group tile from the seed by absorbing, at every level, the
// least enumerated outside word whose parent is already inside
CccPrefix free_ccc(int rank, int levels, const std::vector<Elem>& seed = {});

// residue filtration tiling of Z^d: each level steers the least enumerated
// missed element into the transversal, then completes the cosets
CccPrefix rf_ccc(int64_t m, int levels, int d = 1);

struct CccAxiomReports {
  WitnessReport disjoint, cover, coherent, centered, cofinal;
};

struct CccVerifyReport {
  std::vector<CccAxiomReports> levels;
  bool all_confirmed() const;
  nlohmann::json to_json(const Group& g) const;
};

// checks every axiom on every level; lattice transversals are judged on the
// ball of the given radius, explicit ones against the top-level union
CccVerifyReport verify_ccc(const CccPrefix& p, int64_t window_radius);

// re-presents one level with base tile d0*F_n (same tile family); the parent
// decomposition is rewritten to match, lattice transversals materialize
CccPrefix translate_tiling(const CccPrefix& p, size_t level, const Elem& d0,
                           int64_t window_radius);

// shifts every cube of a Z^d lattice prefix onto its centre
CccPrefix recenter(const CccPrefix& p);

}  // namespace subshift
