#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cesym/symbols.hpp"

namespace cesym {

// +1 for Plus, 0 for Minus: the weight with which a sheet's label enters a
// degree shift.
inline int indicator(Sign s) { return s == Sign::Plus ? 1 : 0; }

// The eight relation families: the two co-orientation reversal equations
// plus one family per codimension-two configuration.
enum class RelationKind : std::uint8_t { HRev, QRev, EH, TT, ET, HT, TQ, QQ };

inline const char* kind_name(RelationKind k) {
  static const char* names[] = {"HRev", "QRev", "EH", "TT", "ET", "HT", "TQ", "QQ"};
  return names[static_cast<int>(k)];
}
std::optional<RelationKind> relation_kind_from(std::string_view name);

struct RelationTerm {
  Int coeff;
  Symbol symbol;
};

// One instance of a relation family; the terms sum to zero. `provenance`
// records the instantiating parameters.
struct Relation {
  RelationKind kind;
  std::string provenance;
  std::vector<RelationTerm> terms;
};

Relation rel_hrev(const Entry& e1, const Entry& e2, const RingElem& d);
Relation rel_qrev(const std::array<Entry, 4>& es, const RingElem& d);
Relation rel_eh(const std::array<Entry, 2>& s, const RingElem& d);
Relation rel_tt(const std::array<Entry, 3>& s, const RingElem& d);
Relation rel_et(const std::array<Entry, 2>& s, const Elem& g, const RingElem& d);
Relation rel_ht(const std::array<Entry, 2>& s, const Elem& g, const RingElem& d);
Relation rel_tq(const std::array<Entry, 3>& s, const Elem& g, const RingElem& d);
Relation rel_qq(const std::array<Elem, 5>& g, const std::array<Sign, 5>& eps,
                const RingElem& d);

struct UniverseLimits {
  std::size_t max_universe = 200000;
  std::size_t max_relations = 1000000;
};

// A finite truncation of the symbol classes: all canonical representatives
// of symbols whose entries lie in the group ball of `ball_radius` and whose
// degree has support in the ball with coefficients in [-coeff_bound,
// coeff_bound], for the requested kinds.
class Universe {
 public:
  GroupPtr group;
  int ball_radius = 0;
  Int coeff_bound = 0;
  std::vector<SymbolKind> kinds;
  int search_radius = 0;
  bool exact = true;

  std::vector<Symbol> reps;  // canonical position, sorted by encoding
  std::vector<std::vector<std::int64_t>> encodings;

  const Group& ctx() const { return *group; }
  std::size_t size() const { return reps.size(); }

  // Canonical index of a symbol, if its class lies in this universe.
  std::optional<std::size_t> find(const Symbol& s) const;
  std::optional<std::size_t> find_encoding(const std::string& bytes) const;

 private:
  friend Universe build_universe(GroupPtr, int, const Int&,
                                 const std::vector<SymbolKind>&, int,
                                 const UniverseLimits&);
  std::unordered_map<std::string, std::size_t> index_;
};

Universe build_universe(GroupPtr group, int ball_radius, const Int& coeff_bound,
                        const std::vector<SymbolKind>& kinds, int search_radius = 0,
                        const UniverseLimits& limits = {});

// All degree-window ring elements of a universe, in enumeration order.
std::vector<RingElem> enumerate_window_degrees(const Group& ctx,
                                               const std::vector<Elem>& ball,
                                               const Int& coeff_bound);

// A relation with every term replaced by its universe representative and
// coefficients merged; terms sorted by universe index.
struct UniverseRelation {
  RelationKind kind;
  std::string provenance;
  std::vector<std::pair<std::size_t, Int>> terms;
};

// Every instance of the requested families, parameterized over the universe
// ball window, whose terms all canonicalize into the universe. Instances
// that merge to zero are dropped; duplicate term vectors are emitted once.
std::vector<UniverseRelation> generate_relations(const Universe& u,
                                                 const std::vector<RelationKind>& kinds,
                                                 const UniverseLimits& limits = {});

inline std::vector<RelationKind> all_relation_kinds() {
  return {RelationKind::HRev, RelationKind::QRev, RelationKind::EH,
          RelationKind::TT,   RelationKind::ET,   RelationKind::HT,
          RelationKind::TQ,   RelationKind::QQ};
}

}  // namespace cesym
