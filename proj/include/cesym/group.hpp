#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cesym/base.hpp"

namespace cesym {

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// An element of a group context. The payload layout is backend-specific:
//   trivial       -> {}
//   cyclic        -> {k} with 0 <= k < order
//   free_abelian  -> exponent vector, one entry per generator
//   finite_table  -> {element index}
//   fp            -> freely reduced word; letter +i is generator i-1,
//                    letter -i its inverse (1-based to keep 0 free)
struct Elem {
  const Group* ctx = nullptr;
  std::vector<std::int64_t> v;

  friend bool operator==(const Elem& a, const Elem& b) {
    return a.ctx == b.ctx && a.v == b.v;
  }
};

// Parsed group description. `parse_group_spec` validates the load-time
// invariants; `make_group` turns a spec into a live context.
struct GroupSpec {
  enum class Kind { Trivial, Cyclic, FreeAbelian, FiniteTable, Fp };
  Kind kind = Kind::Trivial;

  std::int64_t order = 0;  // cyclic
  std::int64_t rank = 0;   // free_abelian

  std::vector<std::string> elements;                   // finite_table
  std::vector<std::vector<std::int64_t>> table;        // finite_table

  std::vector<std::string> generators;                 // fp
  std::vector<std::string> relators;                   // fp, word texts
  struct Quotient {
    std::shared_ptr<GroupSpec> group;
    std::vector<std::string> images;  // one word per fp generator
  };
  std::vector<Quotient> quotients;                     // fp
  std::int64_t max_word_length = 0;                    // fp
};

GroupSpec parse_group_spec(std::string_view json_text);
GroupPtr make_group(const GroupSpec& spec);

// Result of a ball enumeration. `exact_dedup` is false when the fp backend
// could not decide equality of some pair; such pairs are kept distinct and
// reported in `ambiguous`.
struct Ball {
  std::vector<Elem> elems;
  bool exact_dedup = true;
  std::vector<std::pair<std::size_t, std::size_t>> ambiguous;
};

class Group : public std::enable_shared_from_this<Group> {
 public:
  enum class Kind { Trivial, Cyclic, FreeAbelian, FiniteTable, Fp };

  virtual ~Group() = default;

  Kind kind() const { return kind_; }
  // True when element equality is decidable (everything except fp).
  bool exact() const { return kind_ != Kind::Fp; }
  virtual bool finite() const = 0;

  virtual std::size_t generator_count() const = 0;
  virtual const std::string& generator_name(std::size_t i) const = 0;

  Elem identity() const;
  // i-th generator (for finite_table: the i-th element).
  virtual Elem generator(std::size_t i) const = 0;

  virtual Elem multiply(const Elem& a, const Elem& b) const = 0;
  virtual Elem inverse(const Elem& a) const = 0;

  struct EqResult {
    Eq3 value = Eq3::Unknown;
    // Index of the declared quotient that separated the two elements when
    // value == False over an fp backend; -1 otherwise.
    int separating_quotient = -1;
  };
  Eq3 equals(const Elem& a, const Elem& b) const { return equals_ex(a, b).value; }
  virtual EqResult equals_ex(const Elem& a, const Elem& b) const = 0;

  // Canonical total order: shortlex on the minimal-length word form, with
  // generator i preceding its inverse (letter codes 2i < 2i+1). A key is
  // [word length, letter codes...]; finite_table keys are [element index].
  // Keys are only comparable within one context.
  virtual std::vector<std::int64_t> order_key(const Elem& a) const = 0;

  // All elements with word length <= radius, in canonical order, deduplicated
  // by equals. radius < 0 means the whole group (finite backends only).
  virtual Ball ball(int radius) const;

  virtual std::string format(const Elem& a) const = 0;
  Elem parse_word(std::string_view text) const;

  // fp only: number of declared quotients / image of g under quotient q.
  virtual std::size_t quotient_count() const { return 0; }
  virtual GroupPtr quotient_group(std::size_t) const {
    throw ContextError("not an fp context");
  }
  virtual Elem apply_quotient(std::size_t, const Elem&) const {
    throw ContextError("not an fp context");
  }

  void check_owns(const Elem& a) const {
    if (a.ctx != this) throw ContextError("element belongs to a different group context");
  }

 protected:
  explicit Group(Kind k) : kind_(k) {}

 private:
  // Maps a declared generator name to its index, or nullopt.
  virtual std::optional<std::size_t> generator_index(std::string_view name) const;
  // Builds an element from parsed (generator index, exponent) factors.
  virtual Elem from_factors(
      const std::vector<std::pair<std::size_t, std::int64_t>>& factors) const = 0;

  Kind kind_;
};

// Convenience: shortlex comparison of order keys.
int compare_keys(const std::vector<std::int64_t>& a,
                 const std::vector<std::int64_t>& b);

}  // namespace cesym
