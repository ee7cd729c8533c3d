#pragma once

// Countable groups with a fixed enumeration, the coordinate system every
// other module works in.  Four kinds: Z^d, finitely generated free groups,
// explicit finite multiplication tables, and binary direct products.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace subshift {

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// One group element.  Which member is meaningful depends on the owning
// group's kind; the others stay default-constructed, so memberwise
// comparison and hashing work uniformly.
struct Elem {
  std::vector<int64_t> vec;  // Zd: coordinates
  std::string word;          // Free: reduced word, uppercase letter = inverse
  int32_t idx = 0;           // Finite: row index into the table
  std::shared_ptr<const std::pair<Elem, Elem>> pair;  // Product: (left, right)

  bool operator==(const Elem& o) const;
  bool operator!=(const Elem& o) const { return !(*this == o); }
};

// Structural strict weak order, cheap and group-independent.  Used for set
// representations; the enumeration order of a specific group is separate
// (Group::less / Group::index_of).
struct ElemLess {
  bool operator()(const Elem& a, const Elem& b) const;
};

struct ElemHash {
  size_t operator()(const Elem& e) const;
};

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Group : public std::enable_shared_from_this<Group> {
 public:
  enum class Kind { Zd, Free, Finite, Product };

  virtual ~Group() = default;

  static GroupPtr zd(int d);
  static GroupPtr free_group(int rank);
  // table[i][j] = index of element i * element j; validated as a group law.
  static GroupPtr finite(std::vector<std::vector<int>> table);
  static GroupPtr product(GroupPtr left, GroupPtr right);

  static GroupPtr from_json(const nlohmann::json& descriptor);
  virtual nlohmann::json to_json() const = 0;

  Kind kind() const { return kind_; }
  virtual bool is_finite() const = 0;
  virtual int64_t size() const;  // throws unless finite

  virtual Elem identity() const = 0;
  virtual Elem mul(const Elem& a, const Elem& b) const = 0;
  virtual Elem inv(const Elem& a) const = 0;
  virtual int64_t length(const Elem& a) const = 0;  // word/sup norm

  // The fixed total order: enumerate(0) = identity, increasing length,
  // deterministic tie-break inside each shell.
  virtual Elem enumerate(int64_t index) const = 0;
  virtual int64_t index_of(const Elem& a) const = 0;
  bool less(const Elem& a, const Elem& b) const {
    return index_of(a) < index_of(b);
  }

  virtual std::vector<Elem> ball(int64_t r) const;   // enumeration order
  virtual std::vector<Elem> shell(int64_t r) const;  // enumeration order
  virtual std::vector<Elem> generators() const = 0;  // identity excluded

  virtual std::string print(const Elem& a) const = 0;
  virtual Elem parse(const std::string& s) const = 0;

  // Product accessors (null for other kinds).
  virtual GroupPtr left() const { return nullptr; }
  virtual GroupPtr right() const { return nullptr; }

  bool same_as(const Group& other) const;

 protected:
  explicit Group(Kind k) : kind_(k) {}
  Kind kind_;
};

// Sorts by the group's enumeration order (decorate with index_of, sort once).
void sort_enumeration(const Group& g, std::vector<Elem>& elems);

// Splits "<left|right>" at the top-level bar; helper shared with parsers.
std::pair<std::string, std::string> split_product_wire(const std::string& s);

}  // namespace subshift

template <>
struct std::hash<subshift::Elem> {
  size_t operator()(const subshift::Elem& e) const {
    return subshift::ElemHash{}(e);
  }
};
