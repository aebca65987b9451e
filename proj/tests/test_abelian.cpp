#include <random>

#include "cesym/abelian.hpp"
#include "doctest.h"

using namespace cesym;

namespace {

// Fraction-free Bareiss determinant, used as an independent oracle.
Int det_bareiss(std::vector<std::vector<Int>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<std::vector<Int>> matmul(const std::vector<std::vector<Int>>& a,
                                     const std::vector<std::vector<Int>>& b) {
  std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  std::vector<std::vector<Int>> c(n, std::vector<Int>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

void check_snf(const IntMat& m) {
  SnfResult snf = smith_normal_form(m);
  // U * M * V == D
  auto umv = matmul(matmul(snf.U, m.dense()), snf.V);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) {
      Int expect = (i == j && i < snf.diagonal.size()) ? snf.diagonal[i] : Int(0);
      CHECK(umv[i][j] == expect);
    }
  // divisibility chain, nonnegative entries
  for (std::size_t i = 0; i + 1 < snf.diagonal.size(); ++i) {
    CHECK(snf.diagonal[i] >= 0);
    if (snf.diagonal[i] != 0) {
      CHECK(snf.diagonal[i + 1] % snf.diagonal[i] == 0);
    } else {
      CHECK(snf.diagonal[i + 1] == 0);
    }
  }
  // unimodular transforms
  if (m.rows > 0) {
    Int du = det_bareiss(snf.U);
    CHECK((du == 1 || du == -1));
  }
  if (m.cols > 0) {
    Int dv = det_bareiss(snf.V);
    CHECK((dv == 1 || dv == -1));
  }
}

}  // namespace

TEST_CASE("matrix coordinate text form") {
  IntMat m;
  m.rows = 2;
  m.cols = 3;
  m.set(0, 0, 2);
  m.set(1, 2, -5);
  std::string text = m.format();
  CHECK(text == "2 3 2\n0 0 2\n1 2 -5\n");
  IntMat back = IntMat::parse(text);
  CHECK(back.dense() == m.dense());
  CHECK_THROWS_AS(IntMat::parse("2 2 1\n5 0 1\n"), ParseError);
  CHECK_THROWS_AS(IntMat::parse("1 1 1\n0 0 0\n"), ParseError);
  CHECK_THROWS_AS(IntMat::parse("1 1 2\n0 0 1\n0 0 2\n"), ParseError);
}

TEST_CASE("smith normal form: frozen examples") {
  // identity
  IntMat id3;
  id3.rows = id3.cols = 3;
  for (std::size_t i = 0; i < 3; ++i) id3.set(i, i, 1);
  CHECK(smith_normal_form(id3).diagonal == std::vector<Int>{1, 1, 1});

  // diag(2,3): d1 = gcd = 1, d1*d2 = |det| = 6
  IntMat d23;
  d23.rows = d23.cols = 2;
  d23.set(0, 0, 2);
  d23.set(1, 1, 3);
  CHECK(smith_normal_form(d23).diagonal == std::vector<Int>{1, 6});

  // [[2,4],[-2,2]]: gcd = 2, |det| = 12, so (2, 6)
  IntMat m;
  m.rows = m.cols = 2;
  m.set(0, 0, 2);
  m.set(0, 1, 4);
  m.set(1, 0, -2);
  m.set(1, 1, 2);
  CHECK(smith_normal_form(m).diagonal == std::vector<Int>{2, 6});

  for (const IntMat& mm : {id3, d23, m}) check_snf(mm);

  // empty matrices are fine
  IntMat empty;
  CHECK(smith_normal_form(empty).diagonal.empty());
  IntMat zero_rows;
  zero_rows.rows = 0;
  zero_rows.cols = 4;
  CHECK(smith_normal_form(zero_rows).diagonal.empty());
}

TEST_CASE("smith normal form: random property check") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    IntMat m;
    m.rows = r;
    m.cols = c;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        std::int64_t v = static_cast<std::int64_t>(rng() % 19) - 9;
        if (v != 0) m.set(i, j, v);
      }
    check_snf(m);
    // Square nonsingular: product of invariant factors equals |det|.
    if (r == c) {
      Int det = det_bareiss(m.dense());
      if (det != 0) {
        Int prod = 1;
        for (const Int& d : smith_normal_form(m).diagonal) prod *= d;
        CHECK(prod == (det < 0 ? Int(-det) : det));
      }
    }
  }
}

TEST_CASE("snf is deterministic") {
  IntMat m;
  m.rows = 3;
  m.cols = 3;
  m.set(0, 0, 4);
  m.set(0, 2, 6);
  m.set(1, 1, -2);
  m.set(2, 0, 3);
  m.set(2, 2, 9);
  SnfResult a = smith_normal_form(m), b = smith_normal_form(m);
  CHECK(a.diagonal == b.diagonal);
  CHECK(a.U == b.U);
  CHECK(a.V == b.V);
}

TEST_CASE("present: worked examples") {
  // 2 generators, relation (2, 0): Z/2 + Z
  IntMat r1;
  r1.rows = 1;
  r1.cols = 2;
  r1.set(0, 0, 2);
  FgAbelian g1 = present(2, r1);
  CHECK(g1.free_rank == 1);
  CHECK(g1.torsion == std::vector<Int>{2});

  // 1 generator, no relations: Z
  IntMat r0;
  r0.rows = 0;
  r0.cols = 1;
  FgAbelian g0 = present(1, r0);
  CHECK(g0.free_rank == 1);
  CHECK(g0.torsion.empty());

  // 6 generators, rows {g1-g4, g2-g5, g3-g6, g4+g6, 2 g5}: Z + Z/2
  IntMat r6;
  r6.rows = 5;
  r6.cols = 6;
  r6.set(0, 0, 1);
  r6.set(0, 3, -1);
  r6.set(1, 1, 1);
  r6.set(1, 4, -1);
  r6.set(2, 2, 1);
  r6.set(2, 5, -1);
  r6.set(3, 3, 1);
  r6.set(3, 5, 1);
  r6.set(4, 4, 2);
  FgAbelian g6 = present(6, r6);
  CHECK(g6.free_rank == 1);
  CHECK(g6.torsion == std::vector<Int>{2});

  // The projection satisfies the relations.
  auto relsum = [&](std::initializer_list<std::pair<int, int>> terms) {
    AbElem acc = g6.zero();
    for (auto [gen, c] : terms) acc = g6.add(acc, g6.scale(c, g6.projection[gen]));
    return acc;
  };
  CHECK(g6.is_zero(relsum({{0, 1}, {3, -1}})));
  CHECK(g6.is_zero(relsum({{3, 1}, {5, 1}})));
  CHECK(g6.is_zero(relsum({{4, 2}})));
  CHECK_FALSE(g6.is_zero(relsum({{4, 1}})));  // g5 is the torsion class

  CHECK_THROWS_AS(present(3, r6), SpecError);
}

TEST_CASE("present: invariant under row permutation and negation") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    std::vector<std::vector<Int>> rows(r, std::vector<Int>(c, 0));
    for (auto& row : rows)
      for (auto& v : row) v = static_cast<std::int64_t>(rng() % 7) - 3;
    IntMat m = IntMat::from_dense(rows);
    FgAbelian base = present(c, m);

    std::shuffle(rows.begin(), rows.end(), rng);
    for (auto& row : rows)
      if (rng() % 2)
        for (auto& v : row) v = -v;
    FgAbelian moved = present(c, IntMat::from_dense(rows));
    CHECK(base.free_rank == moved.free_rank);
    CHECK(base.torsion == moved.torsion);
  }
}

TEST_CASE("abelian element arithmetic") {
  FgAbelian g;
  g.free_rank = 1;
  g.torsion = {2};
  AbElem a{{1}, {2}};
  AbElem b{{1}, {3}};
  CHECK(g.add(a, b) == AbElem{{0}, {5}});
  CHECK(g.add(a, g.negate(a)) == g.zero());
  CHECK(g.scale(3, a) == AbElem{{1}, {6}});
  CHECK(g.format(a) == "[1|2]");
  AbElem bad{{1}, {2, 3}};
  CHECK_THROWS_AS(g.add(a, bad), ContextError);
}
