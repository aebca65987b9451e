#include "cesym/abelian.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cesym {

// ---------------------------------------------------------------------------
// IntMat
// ---------------------------------------------------------------------------

void IntMat::set(std::size_t r, std::size_t c, Int v) {
  if (r >= rows || c >= cols) throw SpecError("matrix coordinate out of range");
  if (v == 0) return;
  entries.emplace_back(r, c, std::move(v));
}

std::vector<std::vector<Int>> IntMat::dense() const {
  std::vector<std::vector<Int>> d(rows, std::vector<Int>(cols, 0));
  for (const auto& [r, c, v] : entries) d[r][c] += v;
  return d;
}

IntMat IntMat::from_dense(const std::vector<std::vector<Int>>& d) {
  IntMat m;
  m.rows = d.size();
  m.cols = d.empty() ? 0 : d[0].size();
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (d[r].size() != m.cols) throw SpecError("ragged dense matrix");
    for (std::size_t c = 0; c < m.cols; ++c)
      if (d[r][c] != 0) m.entries.emplace_back(r, c, d[r][c]);
  }
  return m;
}

std::string IntMat::format() const {
  auto sorted = entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  std::ostringstream os;
  os << rows << ' ' << cols << ' ' << sorted.size() << '\n';
  for (const auto& [r, c, v] : sorted) os << r << ' ' << c << ' ' << v << '\n';
  return os.str();
}

IntMat IntMat::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  IntMat m;
  std::size_t nnz = 0;
  if (!(is >> m.rows >> m.cols >> nnz))
    throw ParseError("matrix header must be 'rows cols nnz'");
  std::map<std::pair<std::size_t, std::size_t>, bool> seen;
  for (std::size_t i = 0; i < nnz; ++i) {
    std::size_t r, c;
    std::string v;
    if (!(is >> r >> c >> v)) throw ParseError("truncated matrix entry list");
    if (r >= m.rows || c >= m.cols) throw ParseError("matrix coordinate out of range");
    if (seen.count({r, c})) throw ParseError("duplicate matrix coordinate");
    seen[{r, c}] = true;
    Int val(v);
    if (val == 0) throw ParseError("stored zero in matrix entry list");
    m.entries.emplace_back(r, c, std::move(val));
  }
  std::string tail;
  if (is >> tail) throw ParseError("trailing input after matrix entries");
  return m;
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

namespace {

Int int_abs(const Int& a) { return a < 0 ? Int(-a) : a; }

struct SnfWork {
  std::vector<std::vector<Int>> A, U, V;
  std::size_t R, C;
  bool track_u = true;

  void row_sub(std::size_t i, std::size_t t, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < C; ++j) A[i][j] -= q * A[t][j];
    if (track_u)
      for (std::size_t j = 0; j < R; ++j) U[i][j] -= q * U[t][j];
  }
  void row_add(std::size_t dst, std::size_t src) {
    for (std::size_t j = 0; j < C; ++j) A[dst][j] += A[src][j];
    if (track_u)
      for (std::size_t j = 0; j < R; ++j) U[dst][j] += U[src][j];
  }
  void row_swap(std::size_t i, std::size_t t) {
    A[i].swap(A[t]);
    if (track_u) U[i].swap(U[t]);
  }
  void row_negate(std::size_t i) {
    for (auto& x : A[i]) x = -x;
    if (track_u)
      for (auto& x : U[i]) x = -x;
  }
  void col_sub(std::size_t j, std::size_t t, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < R; ++i) A[i][j] -= q * A[i][t];
    for (std::size_t i = 0; i < C; ++i) V[i][j] -= q * V[i][t];
  }
  void col_swap(std::size_t j, std::size_t t) {
    for (std::size_t i = 0; i < R; ++i) std::swap(A[i][j], A[i][t]);
    for (std::size_t i = 0; i < C; ++i) std::swap(V[i][j], V[i][t]);
  }
};

SnfResult snf_impl(const IntMat& m, bool track_u) {
  SnfWork w;
  w.R = m.rows;
  w.C = m.cols;
  w.track_u = track_u;
  w.A = m.dense();
  if (track_u) {
    w.U.assign(w.R, std::vector<Int>(w.R, 0));
    for (std::size_t i = 0; i < w.R; ++i) w.U[i][i] = 1;
  }
  w.V.assign(w.C, std::vector<Int>(w.C, 0));
  for (std::size_t i = 0; i < w.C; ++i) w.V[i][i] = 1;

  const std::size_t n = std::min(w.R, w.C);
  for (std::size_t t = 0; t < n; ++t) {
    // Pivot: smallest absolute value in the working submatrix, ties by
    // (row, col). Small pivots curb coefficient growth.
    std::size_t pi = t, pj = t;
    Int best = 0;
    for (std::size_t i = t; i < w.R; ++i)
      for (std::size_t j = t; j < w.C; ++j) {
        if (w.A[i][j] == 0) continue;
        Int a = int_abs(w.A[i][j]);
        if (best == 0 || a < best) {
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (best == 0) break;
    if (pi != t) w.row_swap(pi, t);
    if (pj != t) w.col_swap(pj, t);

    for (;;) {
      // Clear column t, then row t. A swap promotes a remainder (strictly
      // smaller than the pivot) into the pivot slot, so this terminates.
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (std::size_t i = t + 1; i < w.R; ++i) {
          while (w.A[i][t] != 0) {
            Int q = w.A[i][t] / w.A[t][t];
            w.row_sub(i, t, q);
            if (w.A[i][t] != 0) w.row_swap(i, t);
          }
        }
        for (std::size_t j = t + 1; j < w.C; ++j) {
          while (w.A[t][j] != 0) {
            Int q = w.A[t][j] / w.A[t][t];
            w.col_sub(j, t, q);
            if (w.A[t][j] != 0) {
              w.col_swap(j, t);
              dirty = true;  // the swap may repopulate column t
            }
          }
        }
      }
      // Divisibility: the pivot must divide every remaining entry. A unit
      // pivot divides everything, which skips the scan on the common case.
      const Int& p = w.A[t][t];
      bool fixed = false;
      if (p != 1 && p != -1) {
        for (std::size_t i = t + 1; i < w.R && !fixed; ++i)
          for (std::size_t j = t + 1; j < w.C && !fixed; ++j)
            if (w.A[i][j] % p != 0) {
              w.row_add(t, i);
              fixed = true;
            }
      }
      if (!fixed) break;
    }
    if (w.A[t][t] < 0) w.row_negate(t);
  }

  SnfResult out;
  for (std::size_t t = 0; t < n; ++t) out.diagonal.push_back(w.A[t][t]);
  out.U = std::move(w.U);
  out.V = std::move(w.V);
  return out;
}

}  // namespace

SnfResult smith_normal_form(const IntMat& m) { return snf_impl(m, true); }

// ---------------------------------------------------------------------------
// Finitely generated abelian groups
// ---------------------------------------------------------------------------

AbElem FgAbelian::zero() const {
  return {std::vector<Int>(torsion.size(), 0), std::vector<Int>(free_rank, 0)};
}

AbElem FgAbelian::reduce(AbElem a) const {
  if (a.torsion.size() != torsion.size() || a.free.size() != free_rank)
    throw ContextError("element does not belong to this abelian group");
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    a.torsion[i] %= torsion[i];
    if (a.torsion[i] < 0) a.torsion[i] += torsion[i];
  }
  return a;
}

AbElem FgAbelian::add(const AbElem& a, const AbElem& b) const {
  AbElem r = a;
  if (b.torsion.size() != torsion.size() || b.free.size() != free_rank)
    throw ContextError("element does not belong to this abelian group");
  for (std::size_t i = 0; i < r.torsion.size(); ++i) r.torsion[i] += b.torsion[i];
  for (std::size_t i = 0; i < r.free.size(); ++i) r.free[i] += b.free[i];
  return reduce(std::move(r));
}

AbElem FgAbelian::negate(const AbElem& a) const {
  AbElem r = a;
  for (auto& x : r.torsion) x = -x;
  for (auto& x : r.free) x = -x;
  return reduce(std::move(r));
}

AbElem FgAbelian::scale(const Int& c, const AbElem& a) const {
  AbElem r = a;
  for (auto& x : r.torsion) x *= c;
  for (auto& x : r.free) x *= c;
  return reduce(std::move(r));
}

bool FgAbelian::equal(const AbElem& a, const AbElem& b) const {
  return reduce(a) == reduce(b);
}

bool FgAbelian::is_zero(const AbElem& a) const { return equal(a, zero()); }

std::string FgAbelian::format(const AbElem& a) const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < a.torsion.size(); ++i) {
    if (i) os << ',';
    os << a.torsion[i];
  }
  os << '|';
  for (std::size_t i = 0; i < a.free.size(); ++i) {
    if (i) os << ',';
    os << a.free[i];
  }
  os << ']';
  return os.str();
}

namespace {

// x*a + y*b == g == gcd(a, b), g >= 0.
std::tuple<Int, Int, Int> egcd(Int a, Int b) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    a = b;
    b = r;
    Int nx = x0 - q * x1, ny = y0 - q * y1;
    x0 = x1;
    y0 = y1;
    x1 = nx;
    y1 = ny;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  return {a, x0, y0};
}

// Integer row-echelon reduction of the row lattice. Keeps at most one pivot
// row per column, so the matrix handed to SNF is at most cols x cols. Row
// operations only, hence the row space (and the cokernel) is unchanged.
std::vector<std::vector<Int>> reduce_rows(const IntMat& m) {
  std::map<std::size_t, std::vector<Int>> pivots;  // leading col -> row
  auto dense = m.dense();
  for (auto& row : dense) {
    std::size_t c = 0;
    while (c < m.cols) {
      while (c < m.cols && row[c] == 0) ++c;
      if (c == m.cols) break;
      auto it = pivots.find(c);
      if (it == pivots.end()) {
        if (row[c] < 0)
          for (auto& x : row) x = -x;
        pivots.emplace(c, std::move(row));
        break;
      }
      std::vector<Int>& p = it->second;
      if (row[c] % p[c] == 0) {
        Int q = row[c] / p[c];
        for (std::size_t j = c; j < m.cols; ++j) row[j] -= q * p[j];
      } else {
        auto [g, x, y] = egcd(p[c], row[c]);
        Int pc_g = p[c] / g, rc_g = row[c] / g;
        std::vector<Int> newp(m.cols, 0), newr(m.cols, 0);
        for (std::size_t j = c; j < m.cols; ++j) {
          newp[j] = x * p[j] + y * row[j];
          newr[j] = pc_g * row[j] - rc_g * p[j];
        }
        p = std::move(newp);
        row = std::move(newr);
      }
    }
  }
  std::vector<std::vector<Int>> out;
  out.reserve(pivots.size());
  for (auto& [c, row] : pivots) out.push_back(std::move(row));
  return out;
}

}  // namespace

FgAbelian present(std::size_t num_generators, const IntMat& relations) {
  if (relations.cols != num_generators)
    throw SpecError("relation matrix must have one column per generator");

  auto reduced = reduce_rows(relations);
  IntMat rm;
  rm.rows = reduced.size();
  rm.cols = num_generators;
  for (std::size_t r = 0; r < reduced.size(); ++r)
    for (std::size_t c = 0; c < num_generators; ++c)
      if (reduced[r][c] != 0) rm.entries.emplace_back(r, c, reduced[r][c]);

  // The left transform is not part of the cokernel data, so skip it.
  SnfResult snf = snf_impl(rm, false);
  std::size_t rank = 0;
  for (const Int& d : snf.diagonal)
    if (d != 0) ++rank;

  FgAbelian g;
  g.free_rank = num_generators - rank;
  std::vector<std::size_t> torsion_cols;
  for (std::size_t j = 0; j < rank; ++j)
    if (snf.diagonal[j] > 1) {
      g.torsion.push_back(snf.diagonal[j]);
      torsion_cols.push_back(j);
    }

  // Coordinates of generator i: row i of V in the diagonalized basis,
  // torsion columns reduced mod their factor, columns beyond the rank free.
  for (std::size_t i = 0; i < num_generators; ++i) {
    AbElem e;
    for (std::size_t k = 0; k < torsion_cols.size(); ++k) {
      Int v = snf.V[i][torsion_cols[k]] % g.torsion[k];
      if (v < 0) v += g.torsion[k];
      e.torsion.push_back(v);
    }
    for (std::size_t j = rank; j < num_generators; ++j) e.free.push_back(snf.V[i][j]);
    g.projection.push_back(std::move(e));
  }
  return g;
}

}  // namespace cesym
