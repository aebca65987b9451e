#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cesym/group.hpp"
#include "cesym/group_ring.hpp"

namespace cesym {

enum class Sign : std::uint8_t { Plus = 0, Minus = 1 };

inline Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

// The four codimension-one configuration types and their sheet counts.
enum class SymbolKind : std::uint8_t { E = 0, H = 1, T = 2, Q = 3 };

inline std::size_t arity(SymbolKind k) {
  switch (k) {
    case SymbolKind::E:
    case SymbolKind::H: return 2;
    case SymbolKind::T: return 3;
    default: return 4;
  }
}
inline char kind_char(SymbolKind k) { return "EHTQ"[static_cast<int>(k)]; }

struct Entry {
  Elem g;
  Sign sign;
};

// A co-oriented CE symbol: configuration kind, one (group element, sign)
// pair per sheet, and a degree in the integer group ring.
struct Symbol {
  SymbolKind kind;
  std::vector<Entry> entries;
  RingElem degree;

  Symbol(SymbolKind k, std::vector<Entry> es, RingElem d);
  const Group& ctx() const { return degree.ctx(); }
};

using SymbolTuple = std::vector<Symbol>;

// The symbol attached to the same CE with the opposite co-orientation.
// H: both signs flip. Q: all four signs flip and entries 1,2 transpose.
// The degree is unchanged. E and T have a permanently chosen side and
// cannot be reversed.
Symbol reverse(const Symbol& s);

// A transformation from the equivalence group acting on n-tuples:
// output slot j takes input symbol tuple_perm[j], permutes its entries by
// entry_perms[j], and maps every group label g to left*g*rights[j] (the
// degree maps the same way). `left` is common to all symbols; `rights`
// vary per symbol. Entry permutations on Q symbols must be even.
struct Transform {
  std::vector<std::size_t> tuple_perm;
  std::vector<std::vector<std::size_t>> entry_perms;
  Elem left;
  std::vector<Elem> rights;

  static Transform identity_for(const SymbolTuple& t);
  SymbolTuple apply(const SymbolTuple& t) const;
  // Composition: (a.then(b)).apply(t) == b.apply(a.apply(t)).
  Transform then(const Transform& b) const;
  Transform inverted() const;
};

struct CanonicalForm {
  enum class Status { Exact, Heuristic };
  SymbolTuple tuple;                   // the minimizing position
  std::vector<std::int64_t> encoding;  // flat, lexicographically minimal
  Status status = Status::Exact;
  Transform to_canonical;              // witnesses tuple == apply(input)

  std::string bytes() const;  // encoding serialized for hashing/indexing
};

// Flat encoding of a tuple as-is, with no minimization. Layout per symbol
// block: [block length, kind rank, ((key length, key...), sign)...,
// support size, ((key length, key...), coefficient)...]; tuple = [n] ++
// length-prefixed blocks. Lexicographic order on these vectors is the
// canonical order on tuples in fixed position.
std::vector<std::int64_t> encode_tuple(const SymbolTuple& t);

// Lexicographically minimal encoding over the whole transformation group.
// Exact for trivial/cyclic/finite-table (full enumeration of multipliers)
// and free abelian backends (candidate translations); heuristic for fp,
// where multipliers range over the ball of `search_radius`.
CanonicalForm canonicalize(const SymbolTuple& t, int search_radius = 0);

struct EquivResult {
  Eq3 value = Eq3::Unknown;
  std::optional<Transform> witness;  // maps a onto b when value == True
  int separating_quotient = -1;      // fp False evidence
};

EquivResult equivalent(const SymbolTuple& a, const SymbolTuple& b,
                       int search_radius = 0);

// Whether the stratum of an H or Q symbol is one sided, i.e. the symbol is
// equivalent to its reversed symbol. Equal counts of + and - signs are
// necessary, so unbalanced symbols are rejected without search.
EquivResult is_one_sided(const Symbol& s, int search_radius = 0);

// Grammar: KIND '{' entry (',' entry)* '}' '@' ringelem, entry = word sign.
// Tuples: '[' symbol (';' symbol)* ']'.
Symbol parse_symbol(const Group& ctx, std::string_view text);
SymbolTuple parse_tuple(const Group& ctx, std::string_view text);
std::string format_symbol(const Symbol& s);
std::string format_tuple(const SymbolTuple& t);

}  // namespace cesym
