#include "subshift/constructors.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace subshift {
namespace {

Elem z1(const GroupPtr& z, int64_t n) {
  Elem e;
  e.vec = {n};
  (void)z;
  return e;
}

int64_t coord1(const Elem& g) { return g.vec.at(0); }

void require_zd(const GroupPtr& g, const char* who) {
  if (!g || g->kind() != Group::Kind::Zd)
    throw SpecError(std::string(who) + " needs a Z^d group");
}

int dim_of(const GroupPtr& zd) {
  return static_cast<int>(zd->identity().vec.size());
}

// componentwise nonnegative residue mod m
std::vector<int64_t> residue(const Elem& g, int64_t m) {
  std::vector<int64_t> r(g.vec.size());
  for (size_t i = 0; i < g.vec.size(); ++i) r[i] = ((g.vec[i] % m) + m) % m;
  return r;
}

}  // namespace

Pattern Pattern::conjugate() const {
  Pattern out;
  out.bits.reserve(bits.size());
  for (uint8_t b : bits) out.bits.push_back(b ? 0 : 1);
  return out;
}

std::string Pattern::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Pattern Pattern::from_string(const std::string& s) {
  if (s.empty() || s.size() % 2 == 0)
    throw SpecError("pattern literal must have odd positive length");
  Pattern p;
  p.bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw SpecError("pattern literal must be binary");
    p.bits.push_back(c == '1' ? 1 : 0);
  }
  return p;
}

Pattern phi(const Pattern& p, int digit) {
  if (digit != 0 && digit != 1) throw SpecError("substitution digit must be 0 or 1");
  // +1 keeps the block, -1 conjugates it; seven blocks per level
  static constexpr int kSigns[2][7] = {
      {+1, +1, -1, +1, +1, -1, +1},
      {-1, +1, -1, +1, -1, +1, -1},
  };
  Pattern bar = p.conjugate();
  Pattern out;
  out.bits.reserve(p.bits.size() * 7);
  for (int b = 0; b < 7; ++b) {
    const Pattern& src = kSigns[digit][b] > 0 ? p : bar;
    out.bits.insert(out.bits.end(), src.bits.begin(), src.bits.end());
  }
  return out;
}

Pattern substitution_pattern(const std::string& alpha) {
  for (char c : alpha)
    if (c != '0' && c != '1') throw SpecError("alpha must be a 0/1 string");
  Pattern p;
  p.bits = {0};
  for (size_t n = 0; n < alpha.size(); ++n) {
    Pattern blk = phi(p, alpha[n] - '0');
    int64_t k = blk.half();
    // the right-hand neighbour of the centre block is flipped exactly when
    // the inflation alone would leave the two q-extensions agreeing at the
    // junction probes k - n vs k + 1
    bool flip_first_right = blk.at(-k) == blk.at(k - static_cast<int64_t>(n));
    Pattern next;
    next.bits.reserve(blk.bits.size() * 7);
    for (int b = -3; b <= 3; ++b) {
      const Pattern& src =
          (b == 1 && flip_first_right) ? blk.conjugate() : blk;
      next.bits.insert(next.bits.end(), src.bits.begin(), src.bits.end());
    }
    p = std::move(next);
  }
  return p;
}

std::pair<Pattern, Coloring> substitution_family_z(const std::string& alpha) {
  auto pat = std::make_shared<Pattern>(substitution_pattern(alpha));
  int level = static_cast<int>(alpha.size());
  GroupPtr z = Group::zd(1);
  Coloring x(z, "substitution_z(" + (alpha.empty() ? "-" : alpha) + ")",
             [pat, level](const Elem& g) -> CellValue {
               int64_t n = coord1(g);
               if (!pat->contains(n)) return {Cell::Horizon, level};
               return cv(pat->at(n));
             });
  return {*pat, std::move(x)};
}

bool refines(const Pattern& p, const Pattern& q) {
  int64_t k = p.half(), w = 2 * k + 1, kq = q.half();
  if (kq < k || (kq - k) % w != 0) return false;
  Pattern bar = p.conjugate();
  for (int64_t c = -(kq - k) / w; c <= (kq - k) / w; ++c) {
    bool eq = true, eqbar = true;
    for (int64_t j = -k; j <= k; ++j) {
      int bit = q.at(c * w + j);
      eq = eq && bit == p.at(j);
      eqbar = eqbar && bit == bar.at(j);
    }
    if (c == 0 ? !eq : !(eq || eqbar)) return false;
  }
  return true;
}

Coloring morse_thue() {
  GroupPtr z = Group::zd(1);
  return Coloring(z, "morse_thue", [](const Elem& g) -> CellValue {
    uint64_t n = static_cast<uint64_t>(std::llabs(coord1(g)));
    return cv(std::popcount(n) & 1);
  });
}

Coloring free_wordlength(const GroupPtr& free, const Coloring& base) {
  if (!free || free->kind() != Group::Kind::Free)
    throw SpecError("free_wordlength needs a free group");
  require_zd(base.group(), "free_wordlength base");
  if (dim_of(base.group()) != 1)
    throw SpecError("free_wordlength base must live on Z");
  GroupPtr f = free;
  return Coloring(f, "wordlength(" + base.describe() + ")",
                  [f, base](const Elem& g) -> CellValue {
                    return base.at(z1(base.group(), f->length(g)));
                  });
}

Coloring kappa(const GroupPtr& zd, int64_t m, const std::vector<Elem>& reps,
               const std::vector<Coloring>& xs) {
  require_zd(zd, "kappa");
  if (m < 2) throw SpecError("kappa needs m >= 2");
  int d = dim_of(zd);
  int64_t index = 1;
  for (int i = 0; i < d; ++i) {
    index *= m;
    if (index > (int64_t(1) << 30)) throw SpecError("kappa index too large");
  }
  if (static_cast<int64_t>(reps.size()) != index)
    throw SpecError("kappa needs one representative per coset");
  if (reps[0] != zd->identity())
    throw SpecError("kappa representatives must start with the identity");
  if (xs.size() < 2 || static_cast<int64_t>(xs.size()) > index)
    throw SpecError("kappa needs between 2 and [G:H] colorings");
  for (const Coloring& x : xs) {
    require_zd(x.group(), "kappa component");
    if (dim_of(x.group()) != d)
      throw SpecError("kappa components must share the dimension");
  }
  std::map<std::vector<int64_t>, size_t> coset;
  for (size_t i = 0; i < reps.size(); ++i)
    if (!coset.emplace(residue(reps[i], m), i).second)
      throw SpecError("kappa representatives collide modulo m");
  auto reps_copy = std::make_shared<std::vector<Elem>>(reps);
  auto coset_map = std::make_shared<std::map<std::vector<int64_t>, size_t>>(
      std::move(coset));
  auto comps = std::make_shared<std::vector<Coloring>>(xs);
  return Coloring(
      zd, "kappa(m=" + std::to_string(m) + ")",
      [m, reps_copy, coset_map, comps](const Elem& g) -> CellValue {
        size_t i = coset_map->at(residue(g, m));
        Elem h;
        h.vec.resize(g.vec.size());
        for (size_t c = 0; c < g.vec.size(); ++c)
          h.vec[c] = (g.vec[c] - (*reps_copy)[i].vec[c]) / m;
        size_t which = std::min(i, comps->size() - 1);
        return (*comps)[which].at(h);
      });
}

Coloring product_coloring(const GroupPtr& prod, const Coloring& x,
                          const Coloring& y) {
  if (!prod || prod->kind() != Group::Kind::Product)
    throw SpecError("product_coloring needs a product group");
  if (!prod->left()->same_as(*x.group()) || !prod->right()->same_as(*y.group()))
    throw SpecError("product_coloring factors do not match the group");
  return Coloring(prod, "product(" + x.describe() + "," + y.describe() + ")",
                  [x, y](const Elem& g) -> CellValue {
                    CellValue a = x.at(g.pair->first);
                    if (!a.defined()) return a;
                    CellValue b = y.at(g.pair->second);
                    if (!b.defined()) return b;
                    return cv(a.bit() & b.bit());
                  });
}

Coloring product_coloring_mixed(const GroupPtr& prod, const Coloring& x,
                                const Coloring& y, const Coloring& z) {
  if (!prod || prod->kind() != Group::Kind::Product)
    throw SpecError("product_coloring_mixed needs a product group");
  if (!prod->left()->same_as(*x.group()) ||
      !prod->right()->same_as(*y.group()) ||
      !prod->left()->same_as(*z.group()))
    throw SpecError("product_coloring_mixed factors do not match the group");
  // x(g)y(h) + z(g)(1-y(h)) mod 2 picks x when y(h)=1 and z when y(h)=0
  return Coloring(prod, "product_mixed",
                  [x, y, z](const Elem& g) -> CellValue {
                    CellValue b = y.at(g.pair->second);
                    if (!b.defined()) return b;
                    return b.bit() ? x.at(g.pair->first) : z.at(g.pair->first);
                  });
}

Coloring quotient_extension(const GroupPtr& zd, int64_t m,
                            const std::map<std::vector<int64_t>, int>& z,
                            const std::vector<Coloring>& ys) {
  require_zd(zd, "quotient_extension");
  if (m < 2) throw SpecError("quotient_extension needs m >= 2");
  if (ys.empty()) throw SpecError("quotient_extension needs colorings");
  int d = dim_of(zd);
  for (const auto& [rep, which] : z) {
    if (static_cast<int>(rep.size()) != d)
      throw SpecError("quotient map key has the wrong dimension");
    for (int64_t c : rep)
      if (c < 0 || c >= m)
        throw SpecError("quotient map keys must be reduced mod m");
    if (which < 0 || which >= static_cast<int>(ys.size()))
      throw SpecError("quotient map points past the coloring list");
  }
  for (const Coloring& y : ys) {
    require_zd(y.group(), "quotient_extension component");
    if (dim_of(y.group()) != d)
      throw SpecError("quotient_extension components must share the dimension");
  }
  auto map_copy = std::make_shared<std::map<std::vector<int64_t>, int>>(z);
  auto comps = std::make_shared<std::vector<Coloring>>(ys);
  return Coloring(zd, "quotient_extension(m=" + std::to_string(m) + ")",
                  [m, map_copy, comps](const Elem& g) -> CellValue {
                    std::vector<int64_t> r = residue(g, m);
                    auto it = map_copy->find(r);
                    if (it == map_copy->end()) return {Cell::Free, 0};
                    Elem h;
                    h.vec.resize(g.vec.size());
                    for (size_t c = 0; c < g.vec.size(); ++c)
                      h.vec[c] = (g.vec[c] - r[c]) / m;
                    return (*comps)[it->second].at(h);
                  });
}

Coloring rf_parity(const GroupPtr& zd, int64_t m) {
  require_zd(zd, "rf_parity");
  if (m < 2) throw SpecError("rf_parity needs m >= 2");
  return Coloring(zd, "rf_parity(m=" + std::to_string(m) + ")",
                  [m](const Elem& g) -> CellValue {
                    int64_t depth = -1;  // -1: all coordinates zero so far
                    for (int64_t c : g.vec) {
                      if (c == 0) continue;
                      int64_t v = 0;
                      for (int64_t a = std::llabs(c); a % m == 0; a /= m) ++v;
                      depth = depth < 0 ? v : std::min(depth, v);
                    }
                    if (depth < 0) return cv(0);
                    return cv(static_cast<int>(depth & 1));
                  });
}

Coloring finite_group_coloring(const GroupPtr& finite) {
  if (!finite || finite->kind() != Group::Kind::Finite)
    throw SpecError("finite_group_coloring needs a finite table group");
  Elem id = finite->identity();
  return Coloring(finite, "finite_point", [id](const Elem& g) -> CellValue {
    return cv(g == id ? 0 : 1);
  });
}

}  // namespace subshift
