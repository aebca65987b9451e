#include "cesym/invariants.hpp"

namespace cesym {

IntMat relation_matrix(std::size_t num_generators,
                       const std::vector<UniverseRelation>& relations) {
  IntMat m;
  m.rows = relations.size();
  m.cols = num_generators;
  for (std::size_t r = 0; r < relations.size(); ++r)
    for (const auto& [idx, coeff] : relations[r].terms)
      m.entries.emplace_back(r, idx, coeff);
  return m;
}

Truncation compute_universal_truncation(Universe u, const UniverseLimits& limits) {
  Truncation t{std::move(u), {}, {}, {}};
  t.relations = generate_relations(t.universe, all_relation_kinds(), limits);
  t.group = present(t.universe.size(), relation_matrix(t.universe.size(), t.relations));
  t.gU.target = t.group;
  t.gU.values = t.group.projection;
  return t;
}

Delta1Report check_delta1(const Assignment& a, const Universe& u,
                          const std::vector<UniverseRelation>* relations,
                          const UniverseLimits& limits) {
  if (a.values.size() != u.size())
    throw ContextError("assignment must be total on the universe");
  std::vector<UniverseRelation> generated;
  if (!relations) {
    generated = generate_relations(u, all_relation_kinds(), limits);
    relations = &generated;
  }
  Delta1Report report;
  for (const auto& rel : *relations) {
    AbElem residue = a.target.zero();
    for (const auto& [idx, coeff] : rel.terms)
      residue = a.target.add(residue, a.target.scale(coeff, a.values[idx]));
    if (!a.target.is_zero(residue)) {
      report.pass = false;
      report.violations.push_back({rel, std::move(residue)});
    }
  }
  return report;
}

AbElem evaluate_trace(const EventTrace& t, const Assignment& a, const Universe& u) {
  if (a.values.size() != u.size())
    throw ContextError("assignment must be total on the universe");
  AbElem sum = a.target.zero();
  for (const auto& [dir, sym] : t.events) {
    if (dir != 1 && dir != -1) throw SpecError("trace direction must be +1 or -1");
    auto idx = u.find(sym);
    if (!idx)
      throw ContextError("trace symbol outside the universe: " + format_symbol(sym));
    sum = a.target.add(sum, a.target.scale(dir, a.values[*idx]));
  }
  return sum;
}

}  // namespace cesym
