#pragma once

// Concrete colorings: the two-digit substitution family on Z, Morse-Thue,
// residue-filtration parity, interleavings, products, quotient extensions,
// and small helpers shared by their tests.

#include <map>
#include <utility>

#include "subshift/coloring.hpp"

namespace subshift {

// centered binary word of odd length over Z
struct Pattern {
  std::vector<uint8_t> bits;

  int64_t half() const { return (static_cast<int64_t>(bits.size()) - 1) / 2; }
  bool contains(int64_t offset) const {
    return offset >= -half() && offset <= half();
  }
  int at(int64_t offset) const {
    if (!contains(offset)) throw SpecError("pattern offset out of range");
    return bits[offset + half()];
  }
  Pattern conjugate() const;
  std::string to_string() const;  // leftmost cell first
  static Pattern from_string(const std::string& s);
  bool operator==(const Pattern&) const = default;
};

// seven-block inflation; the digit picks which blocks get conjugated
Pattern phi(const Pattern& p, int digit);

// iterated inflation along the digit string, starting from the single cell 0
Pattern substitution_pattern(const std::string& alpha);

// the coloring that is p_alpha on its domain and horizon beyond it
std::pair<Pattern, Coloring> substitution_family_z(const std::string& alpha);

// independent refinement checker: the aligned |p|-block grid of q must
// consist of translates of p or its conjugate, with p itself at the center
bool refines(const Pattern& p, const Pattern& q);

Coloring morse_thue();  // on Z: parity of the binary digit sum of |n|

// x(w) = base(|w|) for a coloring base over Z
Coloring free_wordlength(const GroupPtr& free, const Coloring& base);

// interleaving along the transversal reps of (mZ)^d; reps[0] must be the
// identity; 2 <= |xs| <= |reps| and the last coloring repeats
Coloring kappa(const GroupPtr& zd, int64_t m, const std::vector<Elem>& reps,
               const std::vector<Coloring>& xs);

// (x*y)(g,h) = x(g) y(h)
Coloring product_coloring(const GroupPtr& prod, const Coloring& x,
                          const Coloring& y);
// (g,h) -> x(g) y(h) + z(g) (1 - y(h))  mod 2
Coloring product_coloring_mixed(const GroupPtr& prod, const Coloring& x,
                                const Coloring& y, const Coloring& z);

// x(g) = ys[z(coset of g)](decode(g)), free outside the cosets z covers;
// z maps coset representatives in [0,m)^d to indices into ys
Coloring quotient_extension(const GroupPtr& zd, int64_t m,
                            const std::map<std::vector<int64_t>, int>& z,
                            const std::vector<Coloring>& ys);

// parity of the deepest m^n (Z^d) lattice containing g; identity gets 0
Coloring rf_parity(const GroupPtr& zd, int64_t m);

// 0 at the identity, 1 elsewhere
Coloring finite_group_coloring(const GroupPtr& finite);

}  // namespace subshift
