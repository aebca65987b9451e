#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cesym/group.hpp"

namespace cesym {

// An element of the integer group ring of a group context: a finite formal
// sum of group elements with nonzero integer coefficients. Only the additive
// structure and the two side actions of the group are provided; full ring
// multiplication is deliberately absent.
//
// Support keys are kept sorted by the context's canonical order and merged
// under proven equality. Over an fp backend a merge whose key equality is
// undecided raises UnknownMergeError instead of guessing.
class RingElem {
 public:
  explicit RingElem(const Group& ctx) : ctx_(&ctx) {}
  static RingElem zero(const Group& ctx) { return RingElem(ctx); }
  static RingElem basis(const Elem& g, Int coeff = 1);

  const Group& ctx() const { return *ctx_; }
  const std::vector<std::pair<Elem, Int>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  RingElem add(const RingElem& other) const;
  RingElem negate() const;
  // this - 1*g
  RingElem sub_basis(const Elem& g) const;

  RingElem left_act(const Elem& h) const;
  RingElem right_act(const Elem& k) const;

  // Sorted list of the nonzero coefficients (a multiset).
  std::vector<Int> coefficient_multiset() const;

  // Exact equality of supports and coefficients; Unknown possible over fp.
  Eq3 equal(const RingElem& other) const;

  std::string format() const;
  static RingElem parse(const Group& ctx, std::string_view text);

 private:
  void insert_term(const Elem& g, const Int& coeff);
  void sort_terms();

  const Group* ctx_;
  std::vector<std::pair<Elem, Int>> terms_;
};

}  // namespace cesym
