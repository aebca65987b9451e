#pragma once

#include <cstdint>
#include <vector>

#include "cesym/abelian.hpp"
#include "cesym/relations.hpp"

namespace cesym {

// A function from the universe's symbol classes into a finitely generated
// abelian group, given by one value per universe index.
struct Assignment {
  FgAbelian target;
  std::vector<AbElem> values;  // values[i] for universe index i
};

// Truncation of the universal group: generators are the universe classes,
// relations the generated family instances, the group their cokernel, and
// gU the projection assignment (each class to its own generator's image).
struct Truncation {
  Universe universe;
  std::vector<UniverseRelation> relations;
  FgAbelian group;
  Assignment gU;
};

Truncation compute_universal_truncation(Universe u, const UniverseLimits& limits = {});

// The relation matrix (rows = relations, columns = universe indices).
IntMat relation_matrix(std::size_t num_generators,
                       const std::vector<UniverseRelation>& relations);

struct Delta1Violation {
  UniverseRelation relation;
  AbElem residue;
};

struct Delta1Report {
  bool pass = true;
  std::vector<Delta1Violation> violations;
};

// Evaluates every generated relation under the assignment; passes iff all
// residues vanish in the target. Relations are regenerated from the
// universe (all families) unless supplied.
Delta1Report check_delta1(const Assignment& a, const Universe& u,
                          const std::vector<UniverseRelation>* relations = nullptr,
                          const UniverseLimits& limits = {});

// A sequence of co-oriented CE events along a path of immersions, each
// crossed with (+1) or against (-1) its co-orientation.
struct EventTrace {
  std::vector<std::pair<int, Symbol>> events;
};

// Signed sum of the assignment's values over the trace. Every event symbol
// must canonicalize into the universe.
AbElem evaluate_trace(const EventTrace& t, const Assignment& a, const Universe& u);

}  // namespace cesym
