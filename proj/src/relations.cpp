#include "cesym/relations.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

namespace cesym {

namespace {

RingElem deg_shift(const RingElem& d, Sign eps, const Elem& g) {
  // d - |eps| g
  return indicator(eps) ? d.sub_basis(g) : d;
}

std::string prov_entry(const Entry& e) {
  return e.g.ctx->format(e.g) + sign_char(e.sign);
}

template <std::size_t N>
std::string prov_entries(const std::array<Entry, N>& es) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ",";
    out += prov_entry(es[i]);
  }
  return out;
}

}  // namespace

std::optional<RelationKind> relation_kind_from(std::string_view name) {
  for (RelationKind k : all_relation_kinds())
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

Relation rel_hrev(const Entry& e1, const Entry& e2, const RingElem& d) {
  Relation r{RelationKind::HRev,
             "HRev(" + prov_entry(e1) + "," + prov_entry(e2) + ";" + d.format() + ")",
             {}};
  Symbol s(SymbolKind::H, {e1, e2}, d);
  r.terms.push_back({1, s});
  r.terms.push_back({1, reverse(s)});
  return r;
}

Relation rel_qrev(const std::array<Entry, 4>& es, const RingElem& d) {
  Relation r{RelationKind::QRev, "QRev(" + prov_entries(es) + ";" + d.format() + ")", {}};
  Symbol s(SymbolKind::Q, {es[0], es[1], es[2], es[3]}, d);
  r.terms.push_back({1, s});
  r.terms.push_back({1, reverse(s)});
  return r;
}

Relation rel_eh(const std::array<Entry, 2>& s, const RingElem& d) {
  Relation r{RelationKind::EH, "EH(" + prov_entries(s) + ";" + d.format() + ")", {}};
  r.terms.push_back({1, Symbol(SymbolKind::E, {s[0], s[1]}, d)});
  r.terms.push_back({-1, Symbol(SymbolKind::H, {s[0], s[1]}, d)});
  return r;
}

Relation rel_tt(const std::array<Entry, 3>& s, const RingElem& d) {
  Relation r{RelationKind::TT, "TT(" + prov_entries(s) + ";" + d.format() + ")", {}};
  r.terms.push_back({1, Symbol(SymbolKind::T, {s[0], s[1], s[2]}, d)});
  r.terms.push_back(
      {-1, Symbol(SymbolKind::T,
                  {{s[0].g, flip(s[0].sign)}, {s[1].g, flip(s[1].sign)}, {s[2].g, flip(s[2].sign)}},
                  d)});
  return r;
}

Relation rel_et(const std::array<Entry, 2>& s, const Elem& g, const RingElem& d) {
  Relation r{RelationKind::ET,
             "ET(" + prov_entries(s) + ";" + g.ctx->format(g) + ";" + d.format() + ")",
             {}};
  r.terms.push_back({1, Symbol(SymbolKind::T, {s[0], s[1], {g, Sign::Minus}}, d)});
  r.terms.push_back({-1, Symbol(SymbolKind::T, {s[0], s[1], {g, Sign::Plus}}, d)});
  r.terms.push_back({-1, Symbol(SymbolKind::E, {s[0], s[1]}, d.sub_basis(g))});
  r.terms.push_back({1, Symbol(SymbolKind::E, {s[0], s[1]}, d)});
  return r;
}

Relation rel_ht(const std::array<Entry, 2>& s, const Elem& g, const RingElem& d) {
  Relation r{RelationKind::HT,
             "HT(" + prov_entries(s) + ";" + g.ctx->format(g) + ";" + d.format() + ")",
             {}};
  r.terms.push_back({-1, Symbol(SymbolKind::T, {s[0], s[1], {g, Sign::Plus}}, d)});
  r.terms.push_back({1, Symbol(SymbolKind::T, {s[0], s[1], {g, Sign::Minus}}, d)});
  r.terms.push_back({-1, Symbol(SymbolKind::H, {s[0], s[1]}, d.sub_basis(g))});
  r.terms.push_back({1, Symbol(SymbolKind::H, {s[0], s[1]}, d)});
  return r;
}

Relation rel_tq(const std::array<Entry, 3>& s, const Elem& g, const RingElem& d) {
  Relation r{RelationKind::TQ,
             "TQ(" + prov_entries(s) + ";" + g.ctx->format(g) + ";" + d.format() + ")",
             {}};
  r.terms.push_back({1, Symbol(SymbolKind::Q, {s[0], s[1], s[2], {g, Sign::Minus}}, d)});
  r.terms.push_back({-1, Symbol(SymbolKind::Q, {s[0], s[1], s[2], {g, Sign::Plus}}, d)});
  r.terms.push_back({-1, Symbol(SymbolKind::T, {s[0], s[1], s[2]}, d.sub_basis(g))});
  r.terms.push_back({1, Symbol(SymbolKind::T, {s[0], s[1], s[2]}, d)});
  return r;
}

// The quintuple-point cycle: ten quadruple points, each with coefficient +1,
// each 4-subset of the five sheets appearing twice with opposite
// co-orientation five places apart. Entry signs and degree shifts follow the
// passage pattern: a sheet missing from one quadruple point reappears in the
// next with the opposite sign, and the degree changes by +|eps_j|g_j -
// |^eps_i|g_i across the passage.
Relation rel_qq(const std::array<Elem, 5>& g, const std::array<Sign, 5>& eps,
                const RingElem& d) {
  std::string prov = "QQ(";
  for (std::size_t i = 0; i < 5; ++i) {
    if (i) prov += ",";
    prov += g[i].ctx->format(g[i]) + sign_char(eps[i]);
  }
  prov += ";" + d.format() + ")";
  Relation r{RelationKind::QQ, std::move(prov), {}};

  auto E = [&](std::size_t i) { return Entry{g[i - 1], eps[i - 1]}; };
  auto Eh = [&](std::size_t i) { return Entry{g[i - 1], flip(eps[i - 1])}; };
  auto D = [&](Sign s, std::size_t i) { return deg_shift(d, s, g[i - 1]); };
  auto hat = [](Sign s) { return flip(s); };
  auto term = [&](std::array<Entry, 4> es, RingElem dd) {
    r.terms.push_back({1, Symbol(SymbolKind::Q, {es[0], es[1], es[2], es[3]}, std::move(dd))});
  };

  term({E(1), E(2), E(3), E(4)}, D(eps[4], 5));
  term({E(5), E(2), E(3), E(4)}, D(hat(eps[0]), 1));
  term({E(5), Eh(1), E(3), E(4)}, D(hat(eps[1]), 2));
  term({E(5), Eh(1), Eh(2), E(4)}, D(hat(eps[2]), 3));
  term({E(5), Eh(1), Eh(2), Eh(3)}, D(hat(eps[3]), 4));
  term({Eh(4), Eh(1), Eh(2), Eh(3)}, D(hat(eps[4]), 5));
  term({Eh(4), Eh(5), Eh(2), Eh(3)}, D(eps[0], 1));
  term({Eh(4), Eh(5), E(1), Eh(3)}, D(eps[1], 2));
  term({Eh(4), Eh(5), E(1), E(2)}, D(eps[2], 3));
  term({E(3), Eh(5), E(1), E(2)}, D(eps[3], 4));
  return r;
}

// ---------------------------------------------------------------------------
// Universe
// ---------------------------------------------------------------------------

std::vector<RingElem> enumerate_window_degrees(const Group& ctx,
                                               const std::vector<Elem>& ball,
                                               const Int& coeff_bound) {
  if (coeff_bound < 0) throw SpecError("coefficient bound must be nonnegative");
  Int combos = 1;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    combos *= 2 * coeff_bound + 1;
    if (combos > 4000000)
      throw ResourceLimitError("degree window too large to enumerate");
  }
  std::int64_t cb = coeff_bound.convert_to<std::int64_t>();
  std::vector<RingElem> out;
  std::vector<std::int64_t> coeffs(ball.size(), -cb);
  for (;;) {
    RingElem d = RingElem::zero(ctx);
    for (std::size_t i = 0; i < ball.size(); ++i)
      if (coeffs[i] != 0) d = d.add(RingElem::basis(ball[i], coeffs[i]));
    out.push_back(std::move(d));
    std::size_t p = 0;
    while (p < coeffs.size() && coeffs[p] == cb) coeffs[p++] = -cb;
    if (p == coeffs.size()) break;
    ++coeffs[p];
  }
  return out;
}

std::optional<std::size_t> Universe::find(const Symbol& s) const {
  CanonicalForm c = canonicalize({s}, search_radius);
  return find_encoding(c.bytes());
}

std::optional<std::size_t> Universe::find_encoding(const std::string& bytes) const {
  auto it = index_.find(bytes);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Universe build_universe(GroupPtr group, int ball_radius, const Int& coeff_bound,
                        const std::vector<SymbolKind>& kinds, int search_radius,
                        const UniverseLimits& limits) {
  if (!group) throw ContextError("null group");
  const Group& ctx = *group;
  Universe u;
  u.group = group;
  u.ball_radius = ball_radius;
  u.coeff_bound = coeff_bound;
  u.kinds = kinds;
  u.search_radius = search_radius;
  u.exact = ctx.exact();

  Ball ball = ctx.ball(ball_radius);
  if (!ball.exact_dedup) u.exact = false;
  const std::vector<RingElem> degrees =
      enumerate_window_degrees(ctx, ball.elems, coeff_bound);

  std::vector<SymbolKind> ks = kinds;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  // Raw symbols, one entry/sign combination at a time; the degree loop is
  // innermost so combos can be sharded across threads.
  struct Combo {
    SymbolKind kind;
    std::vector<Entry> entries;
  };
  std::vector<Combo> combos;
  for (SymbolKind kind : ks) {
    const std::size_t ar = arity(kind);
    std::vector<std::size_t> ei(ar, 0);
    for (;;) {
      for (std::uint32_t signbits = 0; signbits < (1u << ar); ++signbits) {
        Combo c{kind, {}};
        for (std::size_t m = 0; m < ar; ++m)
          c.entries.push_back({ball.elems[ei[m]],
                               (signbits >> m) & 1 ? Sign::Minus : Sign::Plus});
        combos.push_back(std::move(c));
      }
      std::size_t p = 0;
      while (p < ar && ei[p] + 1 == ball.elems.size()) ei[p++] = 0;
      if (p == ar) break;
      ++ei[p];
    }
  }

  using Found = std::map<std::string, std::pair<Symbol, std::vector<std::int64_t>>>;
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t nthreads = std::min<std::size_t>(hw ? hw : 1, 8);
  if (combos.size() * degrees.size() < 4096 || !ctx.exact()) nthreads = 1;

  std::vector<Found> shards(nthreads);
  auto work = [&](std::size_t tid) {
    for (std::size_t i = tid; i < combos.size(); i += nthreads) {
      for (const RingElem& d : degrees) {
        Symbol s(combos[i].kind, combos[i].entries, d);
        CanonicalForm c = canonicalize({s}, search_radius);
        std::string key = c.bytes();
        auto& shard = shards[tid];
        if (!shard.count(key))
          shard.emplace(std::move(key),
                        std::make_pair(std::move(c.tuple[0]), std::move(c.encoding)));
      }
    }
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t tid = 0; tid < nthreads; ++tid) pool.emplace_back(work, tid);
    for (auto& th : pool) th.join();
  }

  Found merged;
  for (auto& shard : shards)
    for (auto& [key, val] : shard)
      if (!merged.count(key)) merged.emplace(std::move(key), std::move(val));
  if (merged.size() > limits.max_universe)
    throw ResourceLimitError("universe size " + std::to_string(merged.size()) +
                             " exceeds limit " + std::to_string(limits.max_universe));

  // std::map keys are byte strings of the encodings; byte order on the
  // little-endian serialization is not the encoding order, so sort properly.
  std::vector<std::pair<std::vector<std::int64_t>, Symbol>> items;
  items.reserve(merged.size());
  for (auto& [key, val] : merged) items.emplace_back(std::move(val.second), std::move(val.first));
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < items.size(); ++i) {
    u.encodings.push_back(items[i].first);
    u.reps.push_back(std::move(items[i].second));
    CanonicalForm cf;
    cf.encoding = u.encodings.back();
    u.index_.emplace(cf.bytes(), i);
  }
  return u;
}

// ---------------------------------------------------------------------------
// Relation generation
// ---------------------------------------------------------------------------

namespace {

// Canonical-index lookup with a cache keyed by the raw (unminimized)
// encoding of the symbol.
class CanonCache {
 public:
  explicit CanonCache(const Universe& u) : u_(u) {}

  std::optional<std::size_t> lookup(const Symbol& s) {
    CanonicalForm raw;
    raw.encoding = encode_tuple({s});
    std::string key = raw.bytes();
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto idx = u_.find(s);
    cache_.emplace(std::move(key), idx);
    return idx;
  }

 private:
  const Universe& u_;
  std::unordered_map<std::string, std::optional<std::size_t>> cache_;
};

}  // namespace

std::vector<UniverseRelation> generate_relations(const Universe& u,
                                                 const std::vector<RelationKind>& kinds,
                                                 const UniverseLimits& limits) {
  const Group& ctx = u.ctx();
  Ball ball = ctx.ball(u.ball_radius);
  const std::vector<RingElem> degrees =
      enumerate_window_degrees(ctx, ball.elems, u.coeff_bound);

  std::vector<RelationKind> ks = kinds;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  CanonCache cache(u);
  std::set<std::vector<std::pair<std::size_t, Int>>> seen;
  std::vector<UniverseRelation> out;

  auto emit = [&](const Relation& r) {
    std::map<std::size_t, Int> acc;
    for (const auto& t : r.terms) {
      auto idx = cache.lookup(t.symbol);
      if (!idx) return;  // a term leaves the universe: skip the instance
      acc[*idx] += t.coeff;
    }
    std::vector<std::pair<std::size_t, Int>> terms;
    for (auto& [i, c] : acc)
      if (c != 0) terms.emplace_back(i, c);
    if (terms.empty()) return;  // vacuous after merging
    if (!seen.insert(terms).second) return;
    out.push_back({r.kind, r.provenance, std::move(terms)});
    if (out.size() > limits.max_relations)
      throw ResourceLimitError("relation count exceeds limit " +
                               std::to_string(limits.max_relations));
  };

  // A family whose term kinds are not all enumerated in the universe can
  // contribute nothing: canonicalization preserves the kind, so every
  // instance would be skipped. Gate those families out up front.
  auto has_kind = [&](SymbolKind k) {
    return std::find(u.kinds.begin(), u.kinds.end(), k) != u.kinds.end();
  };
  auto family_possible = [&](RelationKind k) {
    switch (k) {
      case RelationKind::HRev: return has_kind(SymbolKind::H);
      case RelationKind::QRev: return has_kind(SymbolKind::Q);
      case RelationKind::EH: return has_kind(SymbolKind::E) && has_kind(SymbolKind::H);
      case RelationKind::TT: return has_kind(SymbolKind::T);
      case RelationKind::ET: return has_kind(SymbolKind::T) && has_kind(SymbolKind::E);
      case RelationKind::HT: return has_kind(SymbolKind::T) && has_kind(SymbolKind::H);
      case RelationKind::TQ: return has_kind(SymbolKind::Q) && has_kind(SymbolKind::T);
      case RelationKind::QQ: return has_kind(SymbolKind::Q);
    }
    return false;
  };
  ks.erase(std::remove_if(ks.begin(), ks.end(),
                          [&](RelationKind k) { return !family_possible(k); }),
           ks.end());

  const auto& B = ball.elems;
  const Sign signs[2] = {Sign::Plus, Sign::Minus};

  // Entry strings (ball x sign)^len in odometer order.
  auto for_strings = [&](std::size_t len, auto&& fn) {
    std::vector<std::size_t> gi(len, 0);
    std::vector<std::size_t> si(len, 0);
    for (;;) {
      std::vector<Entry> es;
      for (std::size_t m = 0; m < len; ++m) es.push_back({B[gi[m]], signs[si[m]]});
      fn(es);
      std::size_t p = 0;
      for (; p < len; ++p) {
        if (si[p] == 0) {
          si[p] = 1;
          break;
        }
        si[p] = 0;
        if (gi[p] + 1 < B.size()) {
          ++gi[p];
          break;
        }
        gi[p] = 0;
      }
      if (p == len) break;
    }
  };

  for (RelationKind k : ks) {
    switch (k) {
      case RelationKind::HRev:
        for_strings(2, [&](const std::vector<Entry>& es) {
          for (const RingElem& d : degrees) emit(rel_hrev(es[0], es[1], d));
        });
        break;
      case RelationKind::QRev:
        for_strings(4, [&](const std::vector<Entry>& es) {
          for (const RingElem& d : degrees)
            emit(rel_qrev({es[0], es[1], es[2], es[3]}, d));
        });
        break;
      case RelationKind::EH:
        for_strings(2, [&](const std::vector<Entry>& es) {
          for (const RingElem& d : degrees) emit(rel_eh({es[0], es[1]}, d));
        });
        break;
      case RelationKind::TT:
        for_strings(3, [&](const std::vector<Entry>& es) {
          for (const RingElem& d : degrees) emit(rel_tt({es[0], es[1], es[2]}, d));
        });
        break;
      case RelationKind::ET:
        for_strings(2, [&](const std::vector<Entry>& es) {
          for (const Elem& g : B)
            for (const RingElem& d : degrees) emit(rel_et({es[0], es[1]}, g, d));
        });
        break;
      case RelationKind::HT:
        for_strings(2, [&](const std::vector<Entry>& es) {
          for (const Elem& g : B)
            for (const RingElem& d : degrees) emit(rel_ht({es[0], es[1]}, g, d));
        });
        break;
      case RelationKind::TQ:
        for_strings(3, [&](const std::vector<Entry>& es) {
          for (const Elem& g : B)
            for (const RingElem& d : degrees) emit(rel_tq({es[0], es[1], es[2]}, g, d));
        });
        break;
      case RelationKind::QQ: {
        std::vector<std::size_t> gi(5, 0);
        for (;;) {
          for (std::uint32_t sb = 0; sb < 32; ++sb) {
            std::array<Elem, 5> gs{B[gi[0]], B[gi[1]], B[gi[2]], B[gi[3]], B[gi[4]]};
            std::array<Sign, 5> eps;
            for (std::size_t m = 0; m < 5; ++m)
              eps[m] = (sb >> m) & 1 ? Sign::Minus : Sign::Plus;
            for (const RingElem& d : degrees) emit(rel_qq(gs, eps, d));
          }
          std::size_t p = 0;
          while (p < 5 && gi[p] + 1 == B.size()) gi[p++] = 0;
          if (p == 5) break;
          ++gi[p];
        }
        break;
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const UniverseRelation& a, const UniverseRelation& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.provenance < b.provenance;
  });
  return out;
}

}  // namespace cesym
