#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cesym/base.hpp"

namespace cesym {

// Sparse integer matrix in coordinate form: in-range coordinates, no
// duplicates, no stored zeros. Text form is a `rows cols nnz` header line
// followed by `row col value` triplets.
struct IntMat {
  std::size_t rows = 0, cols = 0;
  std::vector<std::tuple<std::size_t, std::size_t, Int>> entries;

  void set(std::size_t r, std::size_t c, Int v);
  std::vector<std::vector<Int>> dense() const;
  static IntMat from_dense(const std::vector<std::vector<Int>>& d);

  std::string format() const;
  static IntMat parse(std::string_view text);
};

// D = U * M * V with U, V unimodular and D diagonal with a divisibility
// chain d1 | d2 | ... (nonnegative entries).
struct SnfResult {
  std::vector<Int> diagonal;            // length min(rows, cols)
  std::vector<std::vector<Int>> U, V;   // rows x rows, cols x cols
};

SnfResult smith_normal_form(const IntMat& m);

// An element of a finitely generated abelian group, as coordinates:
// one per torsion factor (reduced mod the factor) then one per free factor.
struct AbElem {
  std::vector<Int> torsion;
  std::vector<Int> free;

  friend bool operator==(const AbElem& a, const AbElem& b) = default;
};

// Z^free_rank + Z/t1 + Z/t2 + ... with the invariant factors forming a
// divisibility chain; `projection` maps each presentation generator to its
// coordinates in the quotient.
struct FgAbelian {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // factors > 1, t1 | t2 | ...
  std::vector<AbElem> projection;

  AbElem zero() const;
  AbElem reduce(AbElem a) const;
  AbElem add(const AbElem& a, const AbElem& b) const;
  AbElem negate(const AbElem& a) const;
  AbElem scale(const Int& c, const AbElem& a) const;
  bool equal(const AbElem& a, const AbElem& b) const;
  bool is_zero(const AbElem& a) const;
  std::string format(const AbElem& a) const;
};

// Cokernel of the relation matrix: the abelian group presented by
// `num_generators` generators subject to the rows of `relations`.
FgAbelian present(std::size_t num_generators, const IntMat& relations);

}  // namespace cesym
