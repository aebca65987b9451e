#include <deque>
#include <map>
#include <set>

#include "cesym/symbols.hpp"
#include "doctest.h"

using namespace cesym;

namespace {

GroupPtr trivial() { return make_group(parse_group_spec("{\"kind\":\"trivial\"}")); }
GroupPtr cyclic(std::int64_t n) {
  return make_group(parse_group_spec("{\"kind\":\"cyclic\",\"order\":" +
                                     std::to_string(n) + "}"));
}
GroupPtr integers() {
  return make_group(parse_group_spec("{\"kind\":\"free_abelian\",\"rank\":1}"));
}
GroupPtr fp_example() {
  return make_group(parse_group_spec(R"({
    "kind": "fp",
    "generators": ["a", "b", "c"],
    "relators": ["a^2 b^2 c^2 b^-2"],
    "max_word_length": 12,
    "quotients": [
      {"group": {"kind": "cyclic", "order": 2}, "images": ["x", "e", "e"]}
    ]})"));
}

Symbol sym(const Group& ctx, const std::string& text) { return parse_symbol(ctx, text); }

// Brute-force orbit closure under generators of the transformation group:
// common left multiplications, per-symbol right multiplications, adjacent
// tuple swaps, and entry permutation generators (3-cycles only for Q).
// Independent of the canonicalization search.
std::set<std::vector<std::int64_t>> orbit(const SymbolTuple& start) {
  const Group& ctx = start.front().ctx();
  std::vector<Elem> G = ctx.ball(-1).elems;
  std::set<std::vector<std::int64_t>> seen;
  std::deque<SymbolTuple> queue;
  auto push = [&](SymbolTuple t) {
    if (seen.insert(encode_tuple(t)).second) queue.push_back(std::move(t));
  };
  push(start);
  auto perm_generators = [](SymbolKind k) {
    std::vector<std::vector<std::size_t>> out;
    switch (arity(k)) {
      case 2: out = {{1, 0}}; break;
      case 3: out = {{1, 0, 2}, {0, 2, 1}}; break;
      default: out = {{1, 2, 0, 3}, {0, 2, 3, 1}}; break;  // two 3-cycles generate A4
    }
    return out;
  };
  while (!queue.empty()) {
    SymbolTuple cur = std::move(queue.front());
    queue.pop_front();
    for (const Elem& h : G) {
      SymbolTuple nt;
      for (const Symbol& s : cur) {
        std::vector<Entry> es;
        for (const auto& e : s.entries) es.push_back({ctx.multiply(h, e.g), e.sign});
        nt.push_back(Symbol(s.kind, std::move(es), s.degree.left_act(h)));
      }
      push(std::move(nt));
    }
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (const Elem& k : G) {
        SymbolTuple nt = cur;
        std::vector<Entry> es;
        for (const auto& e : cur[i].entries) es.push_back({ctx.multiply(e.g, k), e.sign});
        nt[i] = Symbol(cur[i].kind, std::move(es), cur[i].degree.right_act(k));
        push(std::move(nt));
      }
      for (const auto& p : perm_generators(cur[i].kind)) {
        SymbolTuple nt = cur;
        std::vector<Entry> es;
        for (std::size_t m = 0; m < p.size(); ++m) es.push_back(cur[i].entries[p[m]]);
        nt[i] = Symbol(cur[i].kind, std::move(es), cur[i].degree);
        push(std::move(nt));
      }
    }
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      SymbolTuple nt = cur;
      std::swap(nt[i], nt[i + 1]);
      push(std::move(nt));
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("reverse") {
  auto z = integers();
  Symbol h = sym(*z, "H{x+,x^2-}@0");
  Symbol hr = reverse(h);
  CHECK(format_symbol(hr) == "H{x-,x^2+}@0");
  CHECK(format_symbol(reverse(hr)) == format_symbol(h));  // involution on H

  Symbol q = sym(*z, "Q{e+,x+,x^2-,x^3-}@x");
  Symbol qr = reverse(q);
  CHECK(format_symbol(qr) == "Q{x-,e-,x^2+,x^3+}@x");  // signs flip, 1<->2 swap
  // reverse twice differs from the identity by an even permutation only
  CHECK(equivalent({q}, {reverse(reverse(q))}).value == Eq3::True);

  CHECK_THROWS_AS(reverse(sym(*z, "E{e+,e+}@0")), NotReversibleError);
  CHECK_THROWS_AS(reverse(sym(*z, "T{e+,e+,e-}@0")), NotReversibleError);
}

TEST_CASE("symbol text round trip") {
  auto fp = fp_example();
  Symbol s = sym(*fp, "H{b^2 +, a b^2 c -}@0");
  CHECK(format_symbol(s) == "H{b^2+,a b^2 c-}@0");
  CHECK(s.kind == SymbolKind::H);
  CHECK(s.degree.is_zero());

  auto triv = trivial();
  Symbol q = sym(*triv, "Q{e+,e+,e-,e-}@1*e");
  CHECK(q.entries.size() == 4);
  CHECK(q.degree.format() == "e");

  CHECK_THROWS_AS(sym(*triv, "T{e+,e-}@0"), ParseError);  // arity
  CHECK_THROWS_AS(sym(*triv, "X{e+,e-}@0"), ParseError);
  CHECK_THROWS_AS(sym(*triv, "H{e+,e-}"), ParseError);    // missing degree

  auto z = integers();
  for (const char* text :
       {"E{x+,x^-1-}@0", "T{e+,x-,x^2+}@x - 2*x^2", "[H{e+,e-}@0; H{x+,x-}@x^2]"}) {
    if (text[0] == '[') {
      SymbolTuple t = parse_tuple(*z, text);
      CHECK(format_tuple(parse_tuple(*z, format_tuple(t))) == format_tuple(t));
    } else {
      Symbol s2 = parse_symbol(*z, text);
      CHECK(format_symbol(parse_symbol(*z, format_symbol(s2))) == format_symbol(s2));
    }
  }
}

TEST_CASE("canonicalize basics") {
  auto triv = trivial();
  CanonicalForm c = canonicalize({sym(*triv, "H{e-,e+}@0")});
  CHECK(c.status == CanonicalForm::Status::Exact);
  CHECK(format_symbol(c.tuple[0]) == "H{e+,e-}@0");  // plus sorts first

  // Translation invariance over the integers.
  auto z = integers();
  CanonicalForm a = canonicalize({sym(*z, "H{x+,x^3-}@0")});
  CanonicalForm b = canonicalize({sym(*z, "H{x^2+,x^4-}@0")});
  CHECK(a.encoding == b.encoding);
  CHECK(format_symbol(a.tuple[0]) == "H{e+,x^2-}@0");

  // Idempotence: canonical position re-canonicalizes to itself.
  CHECK(canonicalize(a.tuple).encoding == a.encoding);
  // The stored tuple really is in the encoded position.
  CHECK(encode_tuple(a.tuple) == a.encoding);
}

TEST_CASE("right multipliers are per symbol, the left one is common") {
  auto z = integers();
  SymbolTuple t1 = parse_tuple(*z, "[H{e+,e-}@0; H{x+,x-}@0]");
  SymbolTuple t2 = parse_tuple(*z, "[H{e+,e-}@0; H{e+,e-}@0]");
  // Equivalent: each symbol is translated independently.
  CHECK(canonicalize(t1).encoding == canonicalize(t2).encoding);
  CHECK(equivalent(t1, t2).value == Eq3::True);

  // The common left action alone cannot equate them: it would need h with
  // h = e for the first symbol and h x = e for the second simultaneously.
  for (int s = -4; s <= 4; ++s) {
    Elem h = z->parse_word(s == 0 ? std::string("e") : "x^" + std::to_string(s));
    SymbolTuple moved;
    for (const Symbol& orig : t1) {
      std::vector<Entry> es;
      for (const auto& e : orig.entries) es.push_back({z->multiply(h, e.g), e.sign});
      moved.push_back(Symbol(orig.kind, std::move(es), orig.degree.left_act(h)));
    }
    bool same_raw = encode_tuple(moved) == encode_tuple(t2);
    SymbolTuple swapped{moved[1], moved[0]};
    bool same_raw_swapped = encode_tuple(swapped) == encode_tuple(t2);
    CHECK_FALSE(same_raw);
    CHECK_FALSE(same_raw_swapped);
  }
}

TEST_CASE("equivalence over the integers") {
  auto z = integers();
  SymbolTuple a = {sym(*z, "H{x+,x^2-}@0")};
  CHECK(equivalent(a, a).value == Eq3::True);

  EquivResult r = equivalent(a, {sym(*z, "H{x-,x^2+}@0")});
  CHECK(r.value == Eq3::False);  // + stays on the smaller power
}

TEST_CASE("fp example: equivalence with witness") {
  auto fp = fp_example();
  SymbolTuple a = {sym(*fp, "H{b^2+, a b^2 c-}@0")};
  SymbolTuple b = {sym(*fp, "H{b^2-, a b^2 c+}@0")};
  EquivResult r = equivalent(a, b, 2);
  REQUIRE(r.value == Eq3::True);
  REQUIRE(r.witness.has_value());

  // Witness soundness: applying it to a yields b termwise.
  SymbolTuple image = r.witness->apply(a);
  REQUIRE(image.size() == b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(image[i].kind == b[i].kind);
    for (std::size_t m = 0; m < b[i].entries.size(); ++m) {
      CHECK(image[i].entries[m].sign == b[i].entries[m].sign);
      CHECK(fp->equals(image[i].entries[m].g, b[i].entries[m].g) == Eq3::True);
    }
    CHECK(image[i].degree.equal(b[i].degree) == Eq3::True);
  }

  CanonicalForm heur = canonicalize(a, 2);
  CHECK(heur.status == CanonicalForm::Status::Heuristic);
}

TEST_CASE("one-sidedness") {
  // If both labels agree the stratum is always one sided.
  for (GroupPtr g : {trivial(), cyclic(4), integers()}) {
    Elem x = g->generator_count() ? g->generator(0) : g->identity();
    Symbol s(SymbolKind::H, {{x, Sign::Plus}, {x, Sign::Minus}}, RingElem::zero(*g));
    CHECK(is_one_sided(s).value == Eq3::True);
  }

  // Over the integers, distinct powers keep the + on the smaller one.
  auto z = integers();
  for (int k = 0; k <= 3; ++k)
    for (int r = k; r <= 4; ++r) {
      Symbol s = sym(*z, "H{x^" + std::to_string(k) + "+,x^" + std::to_string(r) + "-}@0");
      CHECK(is_one_sided(s).value == (k == r ? Eq3::True : Eq3::False));
    }

  // The fp example stratum is one sided despite distinct labels.
  auto fp = fp_example();
  EquivResult r = is_one_sided(sym(*fp, "H{b^2+, a b^2 c-}@0"), 2);
  CHECK(r.value == Eq3::True);
  CHECK(r.witness.has_value());

  // Unbalanced signs fail the counting test outright.
  CHECK(is_one_sided(sym(*z, "H{x+,x^2+}@0")).value == Eq3::False);
  CHECK(is_one_sided(sym(*fp, "H{a+,b+}@0"), 1).value == Eq3::False);

  CHECK_THROWS_AS(is_one_sided(sym(*z, "E{e+,e-}@0")), NotReversibleError);
}

TEST_CASE("witness soundness on exact backends") {
  auto c4 = cyclic(4);
  Symbol s = sym(*c4, "T{x+,x^2-,e+}@x - x^2");
  // Transform by hand: h = x, k = x^2, rotate entries.
  Elem h = c4->parse_word("x"), k = c4->parse_word("x^2");
  std::vector<Entry> es;
  for (std::size_t m : {1u, 2u, 0u}) {
    const Entry& e = s.entries[m];
    es.push_back({c4->multiply(c4->multiply(h, e.g), k), e.sign});
  }
  Symbol moved(SymbolKind::T, std::move(es), s.degree.left_act(h).right_act(k));
  EquivResult r = equivalent({s}, {moved});
  REQUIRE(r.value == Eq3::True);
  SymbolTuple image = r.witness->apply({s});
  CHECK(encode_tuple(image) == encode_tuple({moved}));
}

TEST_CASE("transform compose and invert") {
  auto c4 = cyclic(4);
  SymbolTuple t = parse_tuple(*c4, "[H{x+,e-}@x; T{x^2+,x-,e+}@0]");
  Transform w;
  w.tuple_perm = {1, 0};
  w.entry_perms = {{2, 0, 1}, {1, 0}};
  w.left = c4->parse_word("x");
  w.rights = {c4->parse_word("x^2"), c4->parse_word("x^3")};
  SymbolTuple u = w.apply(t);
  CHECK(encode_tuple(w.inverted().apply(u)) == encode_tuple(t));
  Transform id = Transform::identity_for(t);
  CHECK(encode_tuple(id.apply(t)) == encode_tuple(t));
  Transform both = w.then(w.inverted());
  CHECK(encode_tuple(both.apply(t)) == encode_tuple(t));
}

TEST_CASE("Q entry permutations are even only") {
  auto z = integers();
  Symbol plain = sym(*z, "Q{e+,x+,x^2+,x^3+}@0");
  Symbol odd = sym(*z, "Q{x+,e+,x^2+,x^3+}@0");   // one transposition
  Symbol even = sym(*z, "Q{x+,e+,x^3+,x^2+}@0");  // two transpositions
  CHECK(equivalent({plain}, {odd}).value == Eq3::False);
  CHECK(equivalent({plain}, {even}).value == Eq3::True);
}

TEST_CASE("canonical equality matches brute-force orbits (small groups)") {
  for (std::int64_t n : {2, 3}) {
    auto g = cyclic(n);
    std::vector<Elem> ball = g->ball(-1).elems;
    std::vector<RingElem> degrees;
    // coefficient window [-1, 1]
    std::vector<std::int64_t> coeffs(ball.size(), -1);
    for (;;) {
      RingElem d = RingElem::zero(*g);
      for (std::size_t i = 0; i < ball.size(); ++i)
        if (coeffs[i] != 0) d = d.add(RingElem::basis(ball[i], coeffs[i]));
      degrees.push_back(d);
      std::size_t p = 0;
      while (p < coeffs.size() && coeffs[p] == 1) coeffs[p++] = -1;
      if (p == coeffs.size()) break;
      ++coeffs[p];
    }

    std::map<std::vector<std::int64_t>, std::vector<SymbolTuple>> classes;
    for (SymbolKind kind : {SymbolKind::E, SymbolKind::H}) {
      for (const Elem& g1 : ball)
        for (const Elem& g2 : ball)
          for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2)
              for (const RingElem& d : degrees) {
                SymbolTuple t = {Symbol(kind,
                                        {{g1, s1 ? Sign::Minus : Sign::Plus},
                                         {g2, s2 ? Sign::Minus : Sign::Plus}},
                                        d)};
                classes[canonicalize(t).encoding].push_back(t);
              }
    }
    // Soundness: every raw symbol lies in the orbit of its class mates.
    // Completeness: different canonical forms have disjoint orbits.
    std::vector<std::set<std::vector<std::int64_t>>> orbits;
    std::vector<std::vector<std::int64_t>> encodings;
    for (const auto& [enc, members] : classes) {
      auto orb = orbit(members.front());
      for (const auto& m : members) CHECK(orb.count(encode_tuple(m)) == 1);
      orbits.push_back(std::move(orb));
      encodings.push_back(enc);
    }
    for (std::size_t i = 0; i < orbits.size(); ++i)
      for (std::size_t j = i + 1; j < orbits.size(); ++j)
        CHECK(orbits[i].count(encodings[j]) == 0);
  }
}

TEST_CASE("one-sidedness is a class invariant") {
  auto c4 = cyclic(4);
  std::vector<Elem> ball = c4->ball(-1).elems;
  for (const Elem& g1 : ball)
    for (const Elem& g2 : ball) {
      Symbol s(SymbolKind::H, {{g1, Sign::Plus}, {g2, Sign::Minus}},
               RingElem::zero(*c4));
      Eq3 base = is_one_sided(s).value;
      // Translate by every (h, k) pair; the verdict must not change.
      for (const Elem& h : ball)
        for (const Elem& k : ball) {
          Symbol moved(SymbolKind::H,
                       {{c4->multiply(c4->multiply(h, g1), k), Sign::Plus},
                        {c4->multiply(c4->multiply(h, g2), k), Sign::Minus}},
                       RingElem::zero(*c4));
          CHECK(is_one_sided(moved).value == base);
        }
    }
}
