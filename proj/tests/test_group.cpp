#include <algorithm>
#include <set>

#include "cesym/group.hpp"
#include "doctest.h"

using namespace cesym;

namespace {

GroupPtr cyclic(std::int64_t n) {
  return make_group(parse_group_spec("{\"kind\":\"cyclic\",\"order\":" +
                                     std::to_string(n) + "}"));
}

GroupPtr integers() {
  return make_group(parse_group_spec("{\"kind\":\"free_abelian\",\"rank\":1}"));
}

// The surface-group quotient example: <a,b,c | a^2 b^2 c^2 b^-2>, with the
// quotient killing b and c onto the cyclic group of order 2.
const char* kFpExample = R"({
  "kind": "fp",
  "generators": ["a", "b", "c"],
  "relators": ["a^2 b^2 c^2 b^-2"],
  "max_word_length": 12,
  "quotients": [
    {"group": {"kind": "cyclic", "order": 2}, "images": ["x", "e", "e"]}
  ]
})";

GroupPtr fp_example() { return make_group(parse_group_spec(kFpExample)); }

}  // namespace

TEST_CASE("group spec parsing") {
  CHECK(parse_group_spec("{\"kind\":\"cyclic\",\"order\":5}").order == 5);
  GroupSpec fp = parse_group_spec(kFpExample);
  CHECK(fp.generators.size() == 3);
  CHECK(fp.relators.size() == 1);

  CHECK_THROWS_AS(parse_group_spec("{\"kind\":\"cyclic\""), ParseError);
  CHECK_THROWS_AS(parse_group_spec("{\"kind\":\"wedge\"}"), ParseError);
  CHECK_THROWS_AS(parse_group_spec("{\"kind\":\"cyclic\",\"order\":0}"), SpecError);
  // A table row repeating an element is not a Latin square.
  CHECK_THROWS_AS(parse_group_spec(R"({"kind":"finite_table",
      "elements":["e","a"], "table":[[0,1],[1,1]]})"),
                  SpecError);
  // Quotient images must kill the relators.
  CHECK_THROWS_AS(parse_group_spec(R"({"kind":"fp","generators":["a","b"],
      "relators":["a^2"],"max_word_length":8,
      "quotients":[{"group":{"kind":"cyclic","order":3},"images":["x","e"]}]})"),
                  SpecError);
}

TEST_CASE("word parsing") {
  auto z = integers();
  CHECK(z->parse_word("e") == z->identity());
  CHECK(z->parse_word("") == z->identity());
  CHECK(z->parse_word("x^-3").v == std::vector<std::int64_t>{-3});
  CHECK(z->parse_word("x x x^-1").v == std::vector<std::int64_t>{1});
  CHECK_THROWS_AS(z->parse_word("y"), ParseError);
  CHECK_THROWS_AS(z->parse_word("x^"), ParseError);

  auto fp = fp_example();
  Elem w = fp->parse_word("a b^2 c");
  CHECK(w.v == std::vector<std::int64_t>{1, 2, 2, 3});
  CHECK(fp->format(w) == "a b^2 c");
  CHECK(fp->parse_word("a b b^-1") == fp->parse_word("a"));

  auto c5 = cyclic(5);
  CHECK(c5->parse_word("x^7").v == std::vector<std::int64_t>{2});
  CHECK(c5->format(c5->parse_word("x^3")) == "x^-2");
}

TEST_CASE("multiply, inverse, identity") {
  auto c5 = cyclic(5);
  Elem three = c5->parse_word("x^3"), four = c5->parse_word("x^4");
  CHECK(c5->multiply(three, four).v == std::vector<std::int64_t>{2});

  for (GroupPtr g : {cyclic(6), integers(), fp_example()}) {
    Elem a = g->kind() == Group::Kind::Fp ? g->parse_word("a b") : g->parse_word("x^2");
    CHECK(g->equals(g->multiply(a, g->inverse(a)), g->identity()) == Eq3::True);
  }

  auto fp = fp_example();
  CHECK(fp->multiply(fp->parse_word("a b"), fp->parse_word("b^-1")) ==
        fp->parse_word("a"));

  auto z = integers();
  CHECK_THROWS_AS(z->multiply(z->identity(), c5->identity()), ContextError);
}

TEST_CASE("fp equality: rewriting proofs and quotient separation") {
  auto fp = fp_example();
  Elem lhs = fp->parse_word("a^2 b^2 c^2");
  Elem b2 = fp->parse_word("b^2");
  Elem ab2c = fp->parse_word("a b^2 c");

  CHECK(fp->equals(lhs, b2) == Eq3::True);

  auto sep = fp->equals_ex(b2, ab2c);
  CHECK(sep.value == Eq3::False);
  CHECK(sep.separating_quotient == 0);
  // The evidence is auditable: the quotient really separates the images.
  auto q = fp->quotient_group(0);
  CHECK(q->equals(fp->apply_quotient(0, b2), fp->apply_quotient(0, ab2c)) ==
        Eq3::False);

  auto z = integers();
  CHECK(z->equals(z->parse_word("x^2"), z->parse_word("x^2")) == Eq3::True);
}

TEST_CASE("apply_quotient is functorial") {
  auto fp = fp_example();
  auto q = fp->quotient_group(0);
  CHECK(fp->apply_quotient(0, fp->parse_word("a b^2 c")) == q->parse_word("x"));
  CHECK(fp->apply_quotient(0, fp->identity()) == q->identity());
  CHECK(fp->apply_quotient(0, fp->parse_word("b^2")) == q->identity());

  Ball ball = fp->ball(2);
  for (const Elem& g : ball.elems)
    for (const Elem& h : ball.elems) {
      Elem lhs = fp->apply_quotient(0, fp->multiply(g, h));
      Elem rhs = q->multiply(fp->apply_quotient(0, g), fp->apply_quotient(0, h));
      CHECK(q->equals(lhs, rhs) == Eq3::True);
    }

  CHECK_THROWS_AS(integers()->apply_quotient(0, integers()->identity()),
                  ContextError);
}

TEST_CASE("enumerate_ball") {
  auto triv = make_group(parse_group_spec("{\"kind\":\"trivial\"}"));
  CHECK(triv->ball(-1).elems.size() == 1);
  CHECK(triv->ball(3).elems.size() == 1);

  CHECK(cyclic(5)->ball(-1).elems.size() == 5);

  // Independent enumeration oracle for the integers at radius 2: all words
  // of length <= 2 over {x, x^-1} reduce to exponents {-2,...,2}.
  auto z = integers();
  Ball b = z->ball(2);
  std::vector<std::string> got;
  for (const auto& e : b.elems) got.push_back(z->format(e));
  CHECK(got == std::vector<std::string>{"e", "x", "x^-1", "x^2", "x^-2"});

  // Canonical order is strict and duplicate-free.
  for (GroupPtr g : {cyclic(6), z}) {
    Ball ball = g->kind() == Group::Kind::Cyclic ? g->ball(-1) : g->ball(3);
    for (std::size_t i = 0; i + 1 < ball.elems.size(); ++i)
      CHECK(compare_keys(g->order_key(ball.elems[i]),
                         g->order_key(ball.elems[i + 1])) < 0);
  }

  CHECK_THROWS_AS(z->ball(-1), ContextError);
}

TEST_CASE("group laws on small balls (property)") {
  auto s3 = make_group(parse_group_spec(R"({"kind":"finite_table",
    "elements":["e","r","r2","s","sr","sr2"],
    "table":[[0,1,2,3,4,5],
             [1,2,0,5,3,4],
             [2,0,1,4,5,3],
             [3,4,5,0,1,2],
             [4,5,3,2,0,1],
             [5,3,4,1,2,0]]})"));
  for (GroupPtr g : {cyclic(4), integers(), s3, fp_example()}) {
    Ball ball = g->finite() ? g->ball(-1) : g->ball(2);
    const auto& E = ball.elems;
    std::size_t cap = std::min<std::size_t>(E.size(), 8);
    for (std::size_t i = 0; i < cap; ++i) {
      CHECK(g->equals(g->multiply(g->identity(), E[i]), E[i]) == Eq3::True);
      CHECK(g->equals(g->multiply(E[i], g->identity()), E[i]) == Eq3::True);
      CHECK(g->equals(g->multiply(E[i], g->inverse(E[i])), g->identity()) == Eq3::True);
      for (std::size_t j = 0; j < cap; ++j)
        for (std::size_t k = 0; k < cap; ++k) {
          Elem lhs = g->multiply(g->multiply(E[i], E[j]), E[k]);
          Elem rhs = g->multiply(E[i], g->multiply(E[j], E[k]));
          CHECK(g->equals(lhs, rhs) == Eq3::True);
        }
    }
  }
}

TEST_CASE("equals is reflexive, symmetric, deterministic") {
  auto fp = fp_example();
  Ball ball = fp->ball(2);
  std::size_t cap = std::min<std::size_t>(ball.elems.size(), 10);
  for (std::size_t i = 0; i < cap; ++i)
    for (std::size_t j = 0; j < cap; ++j) {
      Eq3 a = fp->equals(ball.elems[i], ball.elems[j]);
      Eq3 b = fp->equals(ball.elems[j], ball.elems[i]);
      Eq3 again = fp->equals(ball.elems[i], ball.elems[j]);
      CHECK(a == b);
      CHECK(a == again);
      if (i == j) CHECK(a == Eq3::True);
    }
}

TEST_CASE("s3 table ball uses declared element order") {
  auto s3 = make_group(parse_group_spec(R"({"kind":"finite_table",
    "elements":["e","r","r2","s","sr","sr2"],
    "table":[[0,1,2,3,4,5],
             [1,2,0,5,3,4],
             [2,0,1,4,5,3],
             [3,4,5,0,1,2],
             [4,5,3,2,0,1],
             [5,3,4,1,2,0]]})"));
  Ball b = s3->ball(-1);
  REQUIRE(b.elems.size() == 6);
  CHECK(s3->format(b.elems[0]) == "e");
  CHECK(s3->format(b.elems[3]) == "s");
  CHECK(s3->equals(s3->multiply(s3->parse_word("s"), s3->parse_word("s")),
                   s3->identity()) == Eq3::True);
}
