#include "subshift/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace subshift {

namespace {

int64_t checked_pow(int64_t base, int exp) {
  int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > (int64_t{1} << 62) / base)
      throw SpecError("enumeration index overflow");
    out *= base;
  }
  return out;
}

std::string strip_ws(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

bool Elem::operator==(const Elem& o) const {
  if (vec != o.vec || word != o.word || idx != o.idx) return false;
  if (!pair && !o.pair) return true;
  if (!pair || !o.pair) return false;
  return pair->first == o.pair->first && pair->second == o.pair->second;
}

bool ElemLess::operator()(const Elem& a, const Elem& b) const {
  if (a.vec != b.vec) return a.vec < b.vec;
  if (a.word != b.word) {
    if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
    return a.word < b.word;
  }
  if (a.idx != b.idx) return a.idx < b.idx;
  bool ap = static_cast<bool>(a.pair), bp = static_cast<bool>(b.pair);
  if (ap != bp) return bp;
  if (!ap) return false;
  ElemLess less;
  if (less(a.pair->first, b.pair->first)) return true;
  if (less(b.pair->first, a.pair->first)) return false;
  return less(a.pair->second, b.pair->second);
}

size_t ElemHash::operator()(const Elem& e) const {
  size_t h = 0x9e3779b97f4a7c15ull;
  auto mix = [&h](size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (int64_t x : e.vec) mix(std::hash<int64_t>{}(x));
  mix(std::hash<std::string>{}(e.word));
  mix(std::hash<int32_t>{}(e.idx));
  if (e.pair) {
    mix((*this)(e.pair->first));
    mix((*this)(e.pair->second));
  }
  return h;
}

int64_t Group::size() const {
  throw SpecError("size() requires a finite group");
}

std::vector<Elem> Group::ball(int64_t r) const {
  if (r < 0) return {};
  std::vector<Elem> out;
  for (int64_t i = 0;; ++i) {
    Elem e = enumerate(i);
    if (length(e) > r) break;
    out.push_back(std::move(e));
    if (is_finite() && i + 1 >= size()) break;
  }
  return out;
}

std::vector<Elem> Group::shell(int64_t r) const {
  std::vector<Elem> b = ball(r);
  std::erase_if(b, [&](const Elem& e) { return length(e) < r; });
  return b;
}

bool Group::same_as(const Group& other) const {
  return to_json() == other.to_json();
}

void sort_enumeration(const Group& g, std::vector<Elem>& elems) {
  std::vector<std::pair<int64_t, Elem>> keyed;
  keyed.reserve(elems.size());
  for (auto& e : elems) keyed.emplace_back(g.index_of(e), std::move(e));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  elems.clear();
  for (auto& [k, e] : keyed) elems.push_back(std::move(e));
}

std::pair<std::string, std::string> split_product_wire(const std::string& s) {
  if (s.size() < 3 || s.front() != '<' || s.back() != '>')
    throw SpecError("product element must look like <left|right>: " + s);
  int depth = 0;
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '<') ++depth;
    else if (s[i] == '>') --depth;
    else if (s[i] == '|' && depth == 0)
      return {s.substr(1, i - 1), s.substr(i + 1, s.size() - i - 2)};
  }
  throw SpecError("product element missing top-level '|': " + s);
}

// ---------------------------------------------------------------------------
// Z^d: shells by sup norm, descending lexicographic inside each shell.

namespace {

class ZdGroup final : public Group {
 public:
  explicit ZdGroup(int d) : Group(Kind::Zd), d_(d) {
    if (d < 1) throw SpecError("Zd needs d >= 1");
  }

  bool is_finite() const override { return false; }

  Elem identity() const override {
    Elem e;
    e.vec.assign(d_, 0);
    return e;
  }

  Elem mul(const Elem& a, const Elem& b) const override {
    check(a);
    check(b);
    Elem out = a;
    for (int i = 0; i < d_; ++i) out.vec[i] += b.vec[i];
    return out;
  }

  Elem inv(const Elem& a) const override {
    check(a);
    Elem out = a;
    for (auto& x : out.vec) x = -x;
    return out;
  }

  int64_t length(const Elem& a) const override {
    check(a);
    int64_t m = 0;
    for (int64_t x : a.vec) m = std::max(m, std::abs(x));
    return m;
  }

  Elem enumerate(int64_t index) const override {
    if (index < 0) throw SpecError("negative enumeration index");
    if (d_ == 1) {
      Elem e;
      e.vec = {index == 0 ? 0 : (index % 2 ? (index + 1) / 2 : -index / 2)};
      return e;
    }
    if (index == 0) return identity();
    int64_t r = 1;
    int64_t inner = 1;  // |ball(r-1)|
    while (true) {
      int64_t total = checked_pow(2 * r + 1, d_);
      if (index < total) break;
      inner = total;
      ++r;
    }
    int64_t rank = index - inner;  // descending-lex rank inside shell r
    Elem e;
    e.vec.assign(d_, 0);
    bool touched = false;  // prefix already attains sup norm r
    for (int i = 0; i < d_; ++i) {
      for (int64_t c = r;; --c) {
        if (c < -r) throw SpecError("internal: shell walk ran out of digits");
        int rem = d_ - 1 - i;
        bool hits = touched || std::abs(c) == r;
        int64_t cnt = hits ? checked_pow(2 * r + 1, rem)
                           : checked_pow(2 * r + 1, rem) -
                                 checked_pow(2 * r - 1, rem);
        if (rank < cnt) {
          e.vec[i] = c;
          touched = hits;
          break;
        }
        rank -= cnt;
      }
    }
    return e;
  }

  int64_t index_of(const Elem& a) const override {
    check(a);
    int64_t r = length(a);
    if (r == 0) return 0;
    if (d_ == 1) return a.vec[0] > 0 ? 2 * a.vec[0] - 1 : -2 * a.vec[0];
    int64_t base = checked_pow(2 * r - 1, d_);
    int64_t rank = 0;
    bool touched = false;
    for (int i = 0; i < d_; ++i) {
      int rem = d_ - 1 - i;
      for (int64_t c = r; c > a.vec[i]; --c) {
        bool hits = touched || std::abs(c) == r;
        rank += hits ? checked_pow(2 * r + 1, rem)
                     : checked_pow(2 * r + 1, rem) -
                           checked_pow(2 * r - 1, rem);
      }
      touched = touched || std::abs(a.vec[i]) == r;
    }
    return base + rank;
  }

  std::vector<Elem> generators() const override {
    std::vector<Elem> out = shell(1);
    return out;
  }

  std::string print(const Elem& a) const override {
    check(a);
    std::string s = "(";
    for (int i = 0; i < d_; ++i) {
      if (i) s += ",";
      s += std::to_string(a.vec[i]);
    }
    return s + ")";
  }

  Elem parse(const std::string& raw) const override {
    std::string s = strip_ws(raw);
    if (s.empty()) throw SpecError("empty Zd element");
    if (s.front() != '(') {
      if (d_ != 1) throw SpecError("bare integer only allowed for Z: " + raw);
      Elem e;
      e.vec = {parse_int(s)};
      return e;
    }
    if (s.back() != ')') throw SpecError("unbalanced parentheses: " + raw);
    Elem e;
    std::string body = s.substr(1, s.size() - 2);
    size_t pos = 0;
    while (pos <= body.size()) {
      size_t comma = body.find(',', pos);
      std::string tok = body.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      e.vec.push_back(parse_int(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (static_cast<int>(e.vec.size()) != d_)
      throw SpecError("expected " + std::to_string(d_) + " coordinates: " + raw);
    return e;
  }

  nlohmann::json to_json() const override;
  int dim() const { return d_; }

 private:
  static int64_t parse_int(const std::string& tok) {
    if (tok.empty()) throw SpecError("empty integer token");
    size_t used = 0;
    int64_t v;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw SpecError("bad integer: " + tok);
    }
    if (used != tok.size()) throw SpecError("bad integer: " + tok);
    return v;
  }

  void check(const Elem& a) const {
    if (static_cast<int>(a.vec.size()) != d_)
      throw SpecError("element does not belong to this Zd");
  }

  int d_;
};

// ---------------------------------------------------------------------------
// Free group: words by length, then lexicographic with a < A < b < B < ...

class FreeGroup final : public Group {
 public:
  explicit FreeGroup(int rank) : Group(Kind::Free), rank_(rank) {
    if (rank < 1 || rank > 26) throw SpecError("free rank must be in [1,26]");
  }

  bool is_finite() const override { return false; }

  Elem identity() const override { return Elem{}; }

  Elem mul(const Elem& a, const Elem& b) const override {
    check(a);
    check(b);
    Elem out;
    out.word = a.word;
    for (char c : b.word) {
      if (!out.word.empty() && is_inverse_pair(out.word.back(), c))
        out.word.pop_back();
      else
        out.word.push_back(c);
    }
    return out;
  }

  Elem inv(const Elem& a) const override {
    check(a);
    Elem out;
    out.word.reserve(a.word.size());
    for (auto it = a.word.rbegin(); it != a.word.rend(); ++it)
      out.word.push_back(flip(*it));
    return out;
  }

  int64_t length(const Elem& a) const override {
    check(a);
    return static_cast<int64_t>(a.word.size());
  }

  Elem enumerate(int64_t index) const override {
    if (index < 0) throw SpecError("negative enumeration index");
    if (index == 0) return Elem{};
    int64_t L = 1;
    int64_t rank = index - 1;
    while (true) {
      int64_t cnt = words_of_length(L);
      if (rank < cnt) break;
      rank -= cnt;
      ++L;
    }
    Elem e;
    e.word.reserve(L);
    int64_t opts = 2 * rank_ - 1;
    for (int64_t pos = 0; pos < L; ++pos) {
      int64_t below = checked_pow(opts, static_cast<int>(L - 1 - pos));
      int64_t choice = rank / below;
      rank %= below;
      char prev = e.word.empty() ? 0 : e.word.back();
      e.word.push_back(nth_allowed(prev, choice));
    }
    return e;
  }

  int64_t index_of(const Elem& a) const override {
    check(a);
    int64_t L = static_cast<int64_t>(a.word.size());
    if (L == 0) return 0;
    int64_t base = 1;
    for (int64_t l = 1; l < L; ++l) base += words_of_length(l);
    int64_t rank = 0;
    int64_t opts = 2 * rank_ - 1;
    for (int64_t pos = 0; pos < L; ++pos) {
      char prev = pos == 0 ? 0 : a.word[pos - 1];
      int64_t below = checked_pow(opts, static_cast<int>(L - 1 - pos));
      rank += allowed_rank(prev, a.word[pos]) * below;
    }
    return base + rank;
  }

  std::vector<Elem> generators() const override {
    std::vector<Elem> out;
    for (int i = 0; i < rank_; ++i) {
      Elem g, gi;
      g.word = std::string(1, static_cast<char>('a' + i));
      gi.word = std::string(1, static_cast<char>('A' + i));
      out.push_back(g);
      out.push_back(gi);
    }
    return out;
  }

  std::string print(const Elem& a) const override {
    check(a);
    return a.word.empty() ? "e" : a.word;
  }

  Elem parse(const std::string& raw) const override {
    std::string s = strip_ws(raw);
    if (s.empty() || s == "e") return Elem{};
    Elem out;
    for (char c : s) {
      int low = std::tolower(static_cast<unsigned char>(c)) - 'a';
      if (low < 0 || low >= rank_)
        throw SpecError("letter out of rank: " + std::string(1, c));
      if (!out.word.empty() && is_inverse_pair(out.word.back(), c))
        out.word.pop_back();
      else
        out.word.push_back(c);
    }
    return out;
  }

  nlohmann::json to_json() const override;
  int rank() const { return rank_; }

 private:
  static bool is_inverse_pair(char x, char y) {
    return x != y &&
           std::tolower(static_cast<unsigned char>(x)) ==
               std::tolower(static_cast<unsigned char>(y));
  }

  static char flip(char c) {
    return std::isupper(static_cast<unsigned char>(c))
               ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
               : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }

  static int letter_rank(char c) {
    int low = std::tolower(static_cast<unsigned char>(c)) - 'a';
    return 2 * low + (std::isupper(static_cast<unsigned char>(c)) ? 1 : 0);
  }

  static char letter_at(int rank) {
    char base = static_cast<char>('a' + rank / 2);
    return rank % 2 ? flip(base) : base;
  }

  int64_t words_of_length(int64_t l) const {
    if (l == 0) return 1;
    return 2 * rank_ *
           checked_pow(2 * rank_ - 1, static_cast<int>(l - 1));
  }

  // letters usable after prev (0 = start of word), in rank order
  char nth_allowed(char prev, int64_t n) const {
    int banned = prev ? letter_rank(flip(prev)) : -1;
    for (int r = 0; r < 2 * rank_; ++r) {
      if (r == banned) continue;
      if (n-- == 0) return letter_at(r);
    }
    throw SpecError("internal: letter choice out of range");
  }

  int64_t allowed_rank(char prev, char c) const {
    int banned = prev ? letter_rank(flip(prev)) : -1;
    int r = letter_rank(c);
    if (r == banned) throw SpecError("word is not reduced");
    return r - (banned >= 0 && banned < r ? 1 : 0);
  }

  void check(const Elem& a) const {
    for (char c : a.word) {
      int low = std::tolower(static_cast<unsigned char>(c)) - 'a';
      if (low < 0 || low >= rank_)
        throw SpecError("element does not belong to this free group");
    }
  }

  int rank_;
};

// ---------------------------------------------------------------------------
// Finite group given by its multiplication table.  Identity must sit at
// index 0 so the enumeration starts with it.

class FiniteGroup final : public Group {
 public:
  explicit FiniteGroup(std::vector<std::vector<int>> table)
      : Group(Kind::Finite), table_(std::move(table)) {
    int n = static_cast<int>(table_.size());
    if (n == 0) throw SpecError("empty multiplication table");
    for (const auto& row : table_) {
      if (static_cast<int>(row.size()) != n)
        throw SpecError("multiplication table must be square");
      std::vector<bool> seen(n, false);
      for (int v : row) {
        if (v < 0 || v >= n) throw SpecError("table entry out of range");
        if (seen[v]) throw SpecError("table row is not a permutation");
        seen[v] = true;
      }
    }
    for (int j = 0; j < n; ++j) {
      std::vector<bool> seen(n, false);
      for (int i = 0; i < n; ++i) {
        if (seen[table_[i][j]])
          throw SpecError("table column is not a permutation");
        seen[table_[i][j]] = true;
      }
    }
    for (int j = 0; j < n; ++j)
      if (table_[0][j] != j || table_[j][0] != j)
        throw SpecError("index 0 must be the identity");
    for (int i = 0; i < n; ++i) {
      bool has_inv = false;
      for (int j = 0; j < n; ++j) has_inv = has_inv || table_[i][j] == 0;
      if (!has_inv) throw SpecError("element without inverse");
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (table_[table_[i][j]][k] != table_[i][table_[j][k]])
            throw SpecError("multiplication table is not associative");
  }

  bool is_finite() const override { return true; }
  int64_t size() const override { return static_cast<int64_t>(table_.size()); }

  Elem identity() const override { return Elem{}; }

  Elem mul(const Elem& a, const Elem& b) const override {
    check(a);
    check(b);
    Elem out;
    out.idx = table_[a.idx][b.idx];
    return out;
  }

  Elem inv(const Elem& a) const override {
    check(a);
    for (int j = 0; j < static_cast<int>(table_.size()); ++j)
      if (table_[a.idx][j] == 0) {
        Elem out;
        out.idx = j;
        return out;
      }
    throw SpecError("internal: inverse vanished");
  }

  int64_t length(const Elem& a) const override {
    check(a);
    return a.idx == 0 ? 0 : 1;
  }

  Elem enumerate(int64_t index) const override {
    if (index < 0 || index >= size())
      throw SpecError("enumeration index out of range for finite group");
    Elem e;
    e.idx = static_cast<int32_t>(index);
    return e;
  }

  int64_t index_of(const Elem& a) const override {
    check(a);
    return a.idx;
  }

  std::vector<Elem> generators() const override {
    std::vector<Elem> out;
    for (int i = 1; i < static_cast<int>(table_.size()); ++i) {
      Elem e;
      e.idx = i;
      out.push_back(e);
    }
    return out;
  }

  std::string print(const Elem& a) const override {
    check(a);
    return "#" + std::to_string(a.idx);
  }

  Elem parse(const std::string& raw) const override {
    std::string s = strip_ws(raw);
    if (s.size() < 2 || s[0] != '#')
      throw SpecError("finite element must look like #k: " + raw);
    Elem e;
    try {
      e.idx = std::stoi(s.substr(1));
    } catch (const std::exception&) {
      throw SpecError("bad finite element: " + raw);
    }
    check(e);
    return e;
  }

  nlohmann::json to_json() const override;
  const std::vector<std::vector<int>>& table() const { return table_; }

 private:
  void check(const Elem& a) const {
    if (a.idx < 0 || a.idx >= static_cast<int32_t>(table_.size()))
      throw SpecError("element does not belong to this finite group");
  }

  std::vector<std::vector<int>> table_;
};

// ---------------------------------------------------------------------------
// Direct product, enumerated by diagonal pairing of component indices:
// ascending i+j, then ascending left index i.

class ProductGroup final : public Group {
 public:
  ProductGroup(GroupPtr l, GroupPtr r)
      : Group(Kind::Product), l_(std::move(l)), r_(std::move(r)) {
    if (!l_ || !r_) throw SpecError("product needs two component groups");
  }

  bool is_finite() const override {
    return l_->is_finite() && r_->is_finite();
  }

  int64_t size() const override {
    if (!is_finite()) return Group::size();
    return l_->size() * r_->size();
  }

  Elem identity() const override {
    return make(l_->identity(), r_->identity());
  }

  Elem mul(const Elem& a, const Elem& b) const override {
    check(a);
    check(b);
    return make(l_->mul(a.pair->first, b.pair->first),
                r_->mul(a.pair->second, b.pair->second));
  }

  Elem inv(const Elem& a) const override {
    check(a);
    return make(l_->inv(a.pair->first), r_->inv(a.pair->second));
  }

  int64_t length(const Elem& a) const override {
    check(a);
    return l_->length(a.pair->first) + r_->length(a.pair->second);
  }

  Elem enumerate(int64_t index) const override {
    if (index < 0) throw SpecError("negative enumeration index");
    if (is_finite() && index >= size())
      throw SpecError("enumeration index out of range for finite product");
    int64_t s = 0;
    while (true) {
      int64_t cnt = diag_count(s);
      if (index < cnt) break;
      index -= cnt;
      ++s;
    }
    int64_t lo = diag_lo(s);
    int64_t i = lo + index;
    return make(l_->enumerate(i), r_->enumerate(s - i));
  }

  int64_t index_of(const Elem& a) const override {
    check(a);
    int64_t i = l_->index_of(a.pair->first);
    int64_t j = r_->index_of(a.pair->second);
    int64_t s = i + j;
    int64_t before = 0;
    if (!l_->is_finite() && !r_->is_finite()) {
      before = s * (s + 1) / 2;
    } else {
      for (int64_t u = 0; u < s; ++u) before += diag_count(u);
    }
    return before + (i - diag_lo(s));
  }

  std::vector<Elem> ball(int64_t r) const override {
    std::vector<Elem> out;
    for (int64_t a = 0; a <= r; ++a) {
      auto ls = l_->shell(a);
      auto rb = r_->ball(r - a);
      for (const auto& g : ls)
        for (const auto& h : rb) out.push_back(make(g, h));
    }
    sort_enumeration(*this, out);
    return out;
  }

  std::vector<Elem> generators() const override {
    std::vector<Elem> out;
    for (const auto& g : l_->generators()) out.push_back(make(g, r_->identity()));
    for (const auto& h : r_->generators()) out.push_back(make(l_->identity(), h));
    sort_enumeration(*this, out);
    return out;
  }

  std::string print(const Elem& a) const override {
    check(a);
    return "<" + l_->print(a.pair->first) + "|" + r_->print(a.pair->second) +
           ">";
  }

  Elem parse(const std::string& raw) const override {
    auto [ls, rs] = split_product_wire(strip_ws(raw));
    return make(l_->parse(ls), r_->parse(rs));
  }

  nlohmann::json to_json() const override;
  GroupPtr left() const override { return l_; }
  GroupPtr right() const override { return r_; }

 private:
  Elem make(Elem g, Elem h) const {
    Elem e;
    e.pair = std::make_shared<std::pair<Elem, Elem>>(std::move(g),
                                                     std::move(h));
    return e;
  }

  int64_t diag_lo(int64_t s) const {
    int64_t lo = 0;
    if (r_->is_finite()) lo = std::max<int64_t>(0, s - (r_->size() - 1));
    return lo;
  }

  int64_t diag_count(int64_t s) const {
    int64_t hi = s;
    if (l_->is_finite()) hi = std::min(hi, l_->size() - 1);
    int64_t lo = diag_lo(s);
    return std::max<int64_t>(0, hi - lo + 1);
  }

  void check(const Elem& a) const {
    if (!a.pair) throw SpecError("element does not belong to this product");
  }

  GroupPtr l_, r_;
};

nlohmann::json ZdGroup::to_json() const {
  return {{"kind", "Zd"}, {"params", {{"d", d_}}}};
}

nlohmann::json FreeGroup::to_json() const {
  return {{"kind", "Free"}, {"params", {{"rank", rank_}}}};
}

nlohmann::json FiniteGroup::to_json() const {
  return {{"kind", "FiniteTable"}, {"params", {{"table", table_}}}};
}

nlohmann::json ProductGroup::to_json() const {
  return {{"kind", "Product"},
          {"params", {{"left", l_->to_json()}, {"right", r_->to_json()}}}};
}

}  // namespace

GroupPtr Group::zd(int d) { return std::make_shared<ZdGroup>(d); }

GroupPtr Group::free_group(int rank) {
  return std::make_shared<FreeGroup>(rank);
}

GroupPtr Group::finite(std::vector<std::vector<int>> table) {
  return std::make_shared<FiniteGroup>(std::move(table));
}

GroupPtr Group::product(GroupPtr left, GroupPtr right) {
  return std::make_shared<ProductGroup>(std::move(left), std::move(right));
}

GroupPtr Group::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw SpecError("group descriptor needs a \"kind\"");
  std::string kind = j.at("kind").get<std::string>();
  nlohmann::json params =
      j.contains("params") ? j.at("params") : nlohmann::json::object();
  try {
    if (kind == "Zd") return zd(params.at("d").get<int>());
    if (kind == "Free") return free_group(params.at("rank").get<int>());
    if (kind == "FiniteTable")
      return finite(params.at("table").get<std::vector<std::vector<int>>>());
    if (kind == "Product")
      return product(from_json(params.at("left")),
                     from_json(params.at("right")));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad group descriptor: ") + e.what());
  }
  throw SpecError("unknown group kind: " + kind);
}

}  // namespace subshift
