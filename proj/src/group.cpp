#include "cesym/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <deque>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace cesym {

namespace {

using Word = std::vector<std::int64_t>;

constexpr std::size_t kMaxParsedWordLetters = 10000;
// Hard cap on states visited by one rewriting search. Keeps pathological
// presentations from hanging; a capped search that found nothing falls
// through to the quotient test and then Unknown.
constexpr std::size_t kRewriteNodeCap = 200000;
constexpr std::size_t kBallDedupNodeCap = 20000;

std::string word_bytes(const Word& w) {
  std::string s(w.size() * sizeof(std::int64_t), '\0');
  if (!w.empty()) std::memcpy(s.data(), w.data(), s.size());
  return s;
}

void free_reduce_append(Word& w, std::int64_t letter) {
  if (!w.empty() && w.back() == -letter)
    w.pop_back();
  else
    w.push_back(letter);
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto l : w) free_reduce_append(out, l);
  return out;
}

Word word_inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

}  // namespace

int compare_keys(const std::vector<std::int64_t>& a,
                 const std::vector<std::int64_t>& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Word grammar
//   word := "e" | term { WS term } ; term := ident [ "^" signed-int ]
// ---------------------------------------------------------------------------

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct WordFactor {
  std::string name;
  std::int64_t exponent;
  std::size_t pos;
};

std::vector<WordFactor> scan_word(std::string_view text) {
  std::vector<WordFactor> factors;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    std::size_t start = i;
    if (!ident_start(text[i]))
      throw ParseError("expected generator name", i);
    std::string name;
    while (i < text.size() && ident_char(text[i])) name += text[i++];
    std::int64_t exp = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
      }
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw ParseError("malformed exponent", i);
      std::int64_t mag = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        mag = mag * 10 + (text[i] - '0');
        if (mag > (std::int64_t(1) << 40)) throw ParseError("exponent out of range", i);
        ++i;
      }
      exp = neg ? -mag : mag;
    }
    factors.push_back({std::move(name), exp, start});
    skip_ws();
  }
  return factors;
}

}  // namespace

Elem Group::identity() const { return from_factors({}); }

std::optional<std::size_t> Group::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < generator_count(); ++i)
    if (generator_name(i) == name) return i;
  return std::nullopt;
}

Elem Group::parse_word(std::string_view text) const {
  auto factors = scan_word(text);
  // Identity literal: lone `e`, or the empty word.
  if (factors.empty()) return identity();
  if (factors.size() == 1 && factors[0].name == "e" && factors[0].exponent == 1 &&
      !generator_index("e"))
    return identity();
  std::vector<std::pair<std::size_t, std::int64_t>> resolved;
  resolved.reserve(factors.size());
  for (const auto& f : factors) {
    auto idx = generator_index(f.name);
    if (!idx) throw ParseError("unknown generator '" + f.name + "'", f.pos);
    resolved.emplace_back(*idx, f.exponent);
  }
  return from_factors(resolved);
}

Ball Group::ball(int) const {
  throw ContextError("ball enumeration not supported by this backend");
}

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

namespace {

class TrivialGroup final : public Group {
 public:
  TrivialGroup() : Group(Kind::Trivial) {}
  bool finite() const override { return true; }
  std::size_t generator_count() const override { return 0; }
  const std::string& generator_name(std::size_t) const override {
    throw ContextError("trivial group has no generators");
  }
  Elem generator(std::size_t) const override {
    throw ContextError("trivial group has no generators");
  }
  Elem multiply(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    return {this, {}};
  }
  Elem inverse(const Elem& a) const override {
    check_owns(a);
    return {this, {}};
  }
  EqResult equals_ex(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    return {Eq3::True, -1};
  }
  std::vector<std::int64_t> order_key(const Elem& a) const override {
    check_owns(a);
    return {0};
  }
  Ball ball(int) const override { return {{Elem{this, {}}}, true, {}}; }
  std::string format(const Elem& a) const override {
    check_owns(a);
    return "e";
  }

 private:
  Elem from_factors(
      const std::vector<std::pair<std::size_t, std::int64_t>>&) const override {
    return {this, {}};
  }
};

class CyclicGroup final : public Group {
 public:
  explicit CyclicGroup(std::int64_t order)
      : Group(Kind::Cyclic), order_(order), name_("x") {}
  bool finite() const override { return true; }
  std::size_t generator_count() const override { return 1; }
  const std::string& generator_name(std::size_t i) const override {
    if (i != 0) throw ContextError("generator index out of range");
    return name_;
  }
  Elem generator(std::size_t i) const override {
    if (i != 0) throw ContextError("generator index out of range");
    return {this, {order_ > 1 ? 1 : 0}};
  }
  Elem multiply(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    return {this, {(a.v[0] + b.v[0]) % order_}};
  }
  Elem inverse(const Elem& a) const override {
    check_owns(a);
    return {this, {(order_ - a.v[0]) % order_}};
  }
  EqResult equals_ex(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    return {a.v[0] == b.v[0] ? Eq3::True : Eq3::False, -1};
  }
  std::vector<std::int64_t> order_key(const Elem& a) const override {
    check_owns(a);
    std::int64_t k = a.v[0];
    std::int64_t m = std::min(k, order_ - k);
    if (k == 0) return {0};
    std::vector<std::int64_t> key{m};
    key.insert(key.end(), static_cast<std::size_t>(m), k <= order_ - k ? 0 : 1);
    return key;
  }
  Ball ball(int radius) const override {
    Ball out;
    for (std::int64_t k = 0; k < order_; ++k) {
      if (radius >= 0 && std::min(k, order_ - k) > radius) continue;
      out.elems.push_back({this, {k}});
    }
    std::sort(out.elems.begin(), out.elems.end(), [this](const Elem& a, const Elem& b) {
      return compare_keys(order_key(a), order_key(b)) < 0;
    });
    return out;
  }
  std::string format(const Elem& a) const override {
    check_owns(a);
    std::int64_t k = a.v[0];
    if (k == 0) return "e";
    std::int64_t m = k <= order_ - k ? k : -(order_ - k);
    if (m == 1) return name_;
    return name_ + "^" + std::to_string(m);
  }

 private:
  Elem from_factors(const std::vector<std::pair<std::size_t, std::int64_t>>& factors)
      const override {
    Int total = 0;
    for (const auto& [idx, exp] : factors) {
      (void)idx;
      total += exp;
    }
    Int k = total % order_;
    if (k < 0) k += order_;
    return {this, {k.convert_to<std::int64_t>()}};
  }

  std::int64_t order_;
  std::string name_;
};

class FreeAbelianGroup final : public Group {
 public:
  explicit FreeAbelianGroup(std::int64_t rank)
      : Group(Kind::FreeAbelian), rank_(static_cast<std::size_t>(rank)) {
    if (rank_ == 1) {
      names_ = {"x"};
    } else {
      for (std::size_t i = 0; i < rank_; ++i)
        names_.push_back("x" + std::to_string(i + 1));
    }
  }
  bool finite() const override { return false; }
  std::size_t generator_count() const override { return rank_; }
  const std::string& generator_name(std::size_t i) const override {
    if (i >= rank_) throw ContextError("generator index out of range");
    return names_[i];
  }
  Elem generator(std::size_t i) const override {
    if (i >= rank_) throw ContextError("generator index out of range");
    std::vector<std::int64_t> v(rank_, 0);
    v[i] = 1;
    return {this, std::move(v)};
  }
  Elem multiply(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    std::vector<std::int64_t> v(rank_);
    for (std::size_t i = 0; i < rank_; ++i) v[i] = a.v[i] + b.v[i];
    return {this, std::move(v)};
  }
  Elem inverse(const Elem& a) const override {
    check_owns(a);
    std::vector<std::int64_t> v(rank_);
    for (std::size_t i = 0; i < rank_; ++i) v[i] = -a.v[i];
    return {this, std::move(v)};
  }
  EqResult equals_ex(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    return {a.v == b.v ? Eq3::True : Eq3::False, -1};
  }
  std::vector<std::int64_t> order_key(const Elem& a) const override {
    check_owns(a);
    std::int64_t len = 0;
    for (auto c : a.v) len += std::abs(c);
    std::vector<std::int64_t> key{len};
    for (std::size_t i = 0; i < rank_; ++i) {
      std::int64_t letter = 2 * static_cast<std::int64_t>(i) + (a.v[i] < 0 ? 1 : 0);
      key.insert(key.end(), static_cast<std::size_t>(std::abs(a.v[i])), letter);
    }
    return key;
  }
  Ball ball(int radius) const override {
    if (radius < 0)
      throw ContextError("free abelian group requires a finite ball radius");
    Ball out;
    std::vector<std::int64_t> v(rank_, 0);
    enumerate(out.elems, v, 0, radius);
    std::sort(out.elems.begin(), out.elems.end(), [this](const Elem& a, const Elem& b) {
      return compare_keys(order_key(a), order_key(b)) < 0;
    });
    return out;
  }
  std::string format(const Elem& a) const override {
    check_owns(a);
    std::string out;
    for (std::size_t i = 0; i < rank_; ++i) {
      if (a.v[i] == 0) continue;
      if (!out.empty()) out += ' ';
      out += names_[i];
      if (a.v[i] != 1) out += "^" + std::to_string(a.v[i]);
    }
    return out.empty() ? "e" : out;
  }

 private:
  void enumerate(std::vector<Elem>& out, std::vector<std::int64_t>& v,
                 std::size_t i, std::int64_t budget) const {
    if (i == rank_) {
      out.push_back({this, v});
      return;
    }
    for (std::int64_t c = -budget; c <= budget; ++c) {
      v[i] = c;
      enumerate(out, v, i + 1, budget - std::abs(c));
    }
    v[i] = 0;
  }
  Elem from_factors(const std::vector<std::pair<std::size_t, std::int64_t>>& factors)
      const override {
    std::vector<std::int64_t> v(rank_, 0);
    for (const auto& [idx, exp] : factors) v[idx] += exp;
    return {this, std::move(v)};
  }

  std::size_t rank_;
  std::vector<std::string> names_;
};

class TableGroup final : public Group {
 public:
  TableGroup(std::vector<std::string> names, std::vector<std::vector<std::int64_t>> table)
      : Group(Kind::FiniteTable), names_(std::move(names)), table_(std::move(table)) {
    const std::size_t n = names_.size();
    inv_.resize(n, -1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (table_[i][j] == 0 && table_[j][i] == 0) inv_[i] = static_cast<std::int64_t>(j);
  }
  bool finite() const override { return true; }
  std::size_t generator_count() const override { return names_.size(); }
  const std::string& generator_name(std::size_t i) const override {
    if (i >= names_.size()) throw ContextError("element index out of range");
    return names_[i];
  }
  Elem generator(std::size_t i) const override {
    if (i >= names_.size()) throw ContextError("element index out of range");
    return {this, {static_cast<std::int64_t>(i)}};
  }
  Elem multiply(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    return {this, {table_[a.v[0]][b.v[0]]}};
  }
  Elem inverse(const Elem& a) const override {
    check_owns(a);
    return {this, {inv_[a.v[0]]}};
  }
  EqResult equals_ex(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    return {a.v[0] == b.v[0] ? Eq3::True : Eq3::False, -1};
  }
  std::vector<std::int64_t> order_key(const Elem& a) const override {
    check_owns(a);
    return {a.v[0]};
  }
  Ball ball(int radius) const override {
    Ball out;
    if (radius == 0) {
      out.elems.push_back({this, {0}});
      return out;
    }
    for (std::size_t i = 0; i < names_.size(); ++i)
      out.elems.push_back({this, {static_cast<std::int64_t>(i)}});
    return out;
  }
  std::string format(const Elem& a) const override {
    check_owns(a);
    return names_[a.v[0]];
  }

 private:
  Elem from_factors(const std::vector<std::pair<std::size_t, std::int64_t>>& factors)
      const override {
    std::int64_t acc = 0;
    for (const auto& [idx, exp] : factors) {
      std::int64_t g = static_cast<std::int64_t>(idx);
      // Reduce the exponent modulo the element's order before multiplying.
      std::int64_t ord = 1, cur = g;
      while (cur != 0) {
        cur = table_[cur][g];
        ++ord;
      }
      std::int64_t e = exp % ord;
      if (e < 0) e += ord;
      for (std::int64_t s = 0; s < e; ++s) acc = table_[acc][g];
    }
    return {this, {acc}};
  }

  std::vector<std::string> names_;
  std::vector<std::vector<std::int64_t>> table_;
  std::vector<std::int64_t> inv_;
};

class FpGroup final : public Group {
 public:
  FpGroup(std::vector<std::string> gens, std::vector<Word> relators,
          std::vector<std::pair<GroupPtr, std::vector<Elem>>> quotients,
          std::int64_t max_word_length)
      : Group(Kind::Fp),
        gens_(std::move(gens)),
        relators_(std::move(relators)),
        quotients_(std::move(quotients)),
        max_word_length_(static_cast<std::size_t>(max_word_length)) {
    // Insertable set: every relator, its inverse, and all cyclic rotations.
    // All of them lie in the normal closure, so inserting one anywhere
    // multiplies the word by a conjugate of a relator.
    std::unordered_set<std::string> seen;
    for (const auto& r : relators_) {
      for (const Word& base : {r, word_inverse(r)}) {
        for (std::size_t s = 0; s < std::max<std::size_t>(base.size(), 1); ++s) {
          Word rot(base.begin() + s, base.end());
          rot.insert(rot.end(), base.begin(), base.begin() + s);
          rot = free_reduce(rot);
          if (rot.empty()) continue;
          if (seen.insert(word_bytes(rot)).second) insertables_.push_back(rot);
        }
      }
    }
  }

  bool finite() const override { return false; }
  std::size_t generator_count() const override { return gens_.size(); }
  const std::string& generator_name(std::size_t i) const override {
    if (i >= gens_.size()) throw ContextError("generator index out of range");
    return gens_[i];
  }
  Elem generator(std::size_t i) const override {
    if (i >= gens_.size()) throw ContextError("generator index out of range");
    return {this, {static_cast<std::int64_t>(i) + 1}};
  }
  Elem multiply(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    Word w = a.v;
    for (auto l : b.v) free_reduce_append(w, l);
    return {this, std::move(w)};
  }
  Elem inverse(const Elem& a) const override {
    check_owns(a);
    return {this, word_inverse(a.v)};
  }

  EqResult equals_ex(const Elem& a, const Elem& b) const override {
    check_owns(a);
    check_owns(b);
    Word w = a.v;
    for (auto it = b.v.rbegin(); it != b.v.rend(); ++it) free_reduce_append(w, -*it);
    if (w.empty()) return {Eq3::True, -1};
    // Sound "false" first: a quotient with exact equality that separates the
    // images separates the elements.
    for (std::size_t q = 0; q < quotients_.size(); ++q) {
      Elem ia = map_word(q, a.v), ib = map_word(q, b.v);
      if (quotients_[q].first->equals(ia, ib) == Eq3::False)
        return {Eq3::False, static_cast<int>(q)};
    }
    if (prove_trivial(w, kRewriteNodeCap)) return {Eq3::True, -1};
    return {Eq3::Unknown, -1};
  }

  std::vector<std::int64_t> order_key(const Elem& a) const override {
    check_owns(a);
    std::vector<std::int64_t> key{static_cast<std::int64_t>(a.v.size())};
    for (auto l : a.v)
      key.push_back(l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1);
    return key;
  }

  Ball ball(int radius) const override {
    if (radius < 0) throw ContextError("fp group requires a finite ball radius");
    // All freely reduced words of length <= radius, shortlex order.
    std::vector<Word> words{{}};
    std::vector<Word> frontier{{}};
    for (int len = 1; len <= radius; ++len) {
      std::vector<Word> next;
      for (const auto& w : frontier) {
        for (std::size_t g = 0; g < gens_.size(); ++g) {
          for (std::int64_t l : {static_cast<std::int64_t>(g) + 1,
                                 -(static_cast<std::int64_t>(g) + 1)}) {
            if (!w.empty() && w.back() == -l) continue;
            Word nw = w;
            nw.push_back(l);
            next.push_back(std::move(nw));
          }
        }
      }
      words.insert(words.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    std::sort(words.begin(), words.end(), [this](const Word& a, const Word& b) {
      return compare_keys(order_key({this, a}), order_key({this, b})) < 0;
    });
    Ball out;
    for (auto& w : words) {
      Elem cand{this, std::move(w)};
      bool merged = false;
      std::vector<std::size_t> undecided;
      for (std::size_t i = 0; i < out.elems.size() && !merged; ++i) {
        Word diff = cand.v;
        for (auto it = out.elems[i].v.rbegin(); it != out.elems[i].v.rend(); ++it)
          free_reduce_append(diff, -*it);
        if (diff.empty() || prove_trivial(diff, kBallDedupNodeCap)) {
          merged = true;
        } else {
          bool separated = false;
          for (std::size_t q = 0; q < quotients_.size() && !separated; ++q)
            separated = quotients_[q].first->equals(map_word(q, cand.v),
                                                    map_word(q, out.elems[i].v)) ==
                        Eq3::False;
          if (!separated) undecided.push_back(i);
        }
      }
      if (!merged) {
        for (auto i : undecided) {
          out.exact_dedup = false;
          out.ambiguous.emplace_back(i, out.elems.size());
        }
        out.elems.push_back(std::move(cand));
      }
    }
    return out;
  }

  std::string format(const Elem& a) const override {
    check_owns(a);
    if (a.v.empty()) return "e";
    std::string out;
    std::size_t i = 0;
    while (i < a.v.size()) {
      std::size_t j = i;
      while (j < a.v.size() && a.v[j] == a.v[i]) ++j;
      std::int64_t letter = a.v[i];
      std::int64_t exp = static_cast<std::int64_t>(j - i) * (letter > 0 ? 1 : -1);
      if (!out.empty()) out += ' ';
      out += gens_[static_cast<std::size_t>(std::abs(letter)) - 1];
      if (exp != 1) out += "^" + std::to_string(exp);
      i = j;
    }
    return out;
  }

  std::size_t quotient_count() const override { return quotients_.size(); }
  GroupPtr quotient_group(std::size_t q) const override {
    if (q >= quotients_.size()) throw ContextError("quotient index out of range");
    return quotients_[q].first;
  }
  Elem apply_quotient(std::size_t q, const Elem& a) const override {
    check_owns(a);
    if (q >= quotients_.size()) throw ContextError("quotient index out of range");
    return map_word(q, a.v);
  }

 private:
  Elem map_word(std::size_t q, const Word& w) const {
    const auto& [target, images] = quotients_[q];
    Elem acc = target->identity();
    for (auto l : w) {
      const Elem& img = images[static_cast<std::size_t>(std::abs(l)) - 1];
      acc = target->multiply(acc, l > 0 ? img : target->inverse(img));
    }
    return acc;
  }

  // Bounded search for a proof that w represents the identity: breadth-first
  // over freely reduced words reachable by inserting an insertable relator
  // at any position, keeping results of length <= max_word_length. Each move
  // is reversible, so saturation without reaching the empty word is a stable
  // within-bound certificate and gets memoized.
  bool prove_trivial(const Word& start, std::size_t node_cap) const {
    if (start.empty()) return true;
    if (insertables_.empty()) return false;
    {
      std::lock_guard<std::mutex> lk(memo_mutex_);
      auto it = memo_.find(word_bytes(start));
      if (it != memo_.end()) return it->second;
    }
    std::unordered_set<std::string> visited;
    std::deque<Word> queue;
    visited.insert(word_bytes(start));
    queue.push_back(start);
    bool found = false;
    bool capped = false;
    while (!queue.empty()) {
      Word w = std::move(queue.front());
      queue.pop_front();
      for (const auto& r : insertables_) {
        for (std::size_t p = 0; p <= w.size() && !found; ++p) {
          Word nw(w.begin(), w.begin() + p);
          for (auto l : r) free_reduce_append(nw, l);
          for (std::size_t s = p; s < w.size(); ++s) free_reduce_append(nw, w[s]);
          if (nw.empty()) {
            found = true;
            break;
          }
          if (nw.size() > max_word_length_) continue;
          auto key = word_bytes(nw);
          if (visited.count(key)) continue;
          if (visited.size() >= node_cap) {
            capped = true;
            continue;
          }
          visited.insert(std::move(key));
          queue.push_back(std::move(nw));
        }
        if (found) break;
      }
      if (found) break;
    }
    if (found || !capped) {
      std::lock_guard<std::mutex> lk(memo_mutex_);
      memo_.emplace(word_bytes(start), found);
    }
    return found;
  }

  Elem from_factors(const std::vector<std::pair<std::size_t, std::int64_t>>& factors)
      const override {
    Word w;
    for (const auto& [idx, exp] : factors) {
      std::int64_t letter = static_cast<std::int64_t>(idx) + 1;
      std::int64_t n = std::abs(exp);
      if (w.size() + static_cast<std::size_t>(n) > kMaxParsedWordLetters)
        throw ParseError("word too long");
      for (std::int64_t s = 0; s < n; ++s)
        free_reduce_append(w, exp > 0 ? letter : -letter);
    }
    return {this, std::move(w)};
  }

  std::vector<std::string> gens_;
  std::vector<Word> relators_;
  std::vector<Word> insertables_;
  std::vector<std::pair<GroupPtr, std::vector<Elem>>> quotients_;
  std::size_t max_word_length_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::string, bool> memo_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Spec parsing and validation
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

GroupSpec spec_from_json(const json& j);

GroupSpec::Quotient quotient_from_json(const json& j) {
  GroupSpec::Quotient q;
  if (!j.is_object() || !j.contains("group") || !j.contains("images"))
    throw ParseError("quotient requires 'group' and 'images'");
  q.group = std::make_shared<GroupSpec>(spec_from_json(j.at("group")));
  for (const auto& w : j.at("images")) q.images.push_back(w.get<std::string>());
  return q;
}

GroupSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ParseError("group spec must be an object with a 'kind' field");
  GroupSpec s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "trivial") {
    s.kind = GroupSpec::Kind::Trivial;
  } else if (kind == "cyclic") {
    s.kind = GroupSpec::Kind::Cyclic;
    s.order = j.at("order").get<std::int64_t>();
    if (s.order <= 0) throw SpecError("cyclic order must be positive");
  } else if (kind == "free_abelian") {
    s.kind = GroupSpec::Kind::FreeAbelian;
    s.rank = j.at("rank").get<std::int64_t>();
    if (s.rank <= 0) throw SpecError("free abelian rank must be positive");
  } else if (kind == "finite_table") {
    s.kind = GroupSpec::Kind::FiniteTable;
    for (const auto& n : j.at("elements")) s.elements.push_back(n.get<std::string>());
    for (const auto& row : j.at("table"))
      s.table.push_back(row.get<std::vector<std::int64_t>>());
  } else if (kind == "fp") {
    s.kind = GroupSpec::Kind::Fp;
    for (const auto& n : j.at("generators")) s.generators.push_back(n.get<std::string>());
    for (const auto& r : j.at("relators")) s.relators.push_back(r.get<std::string>());
    s.max_word_length = j.at("max_word_length").get<std::int64_t>();
    if (s.max_word_length <= 0) throw SpecError("max_word_length must be positive");
    if (j.contains("quotients"))
      for (const auto& q : j.at("quotients")) s.quotients.push_back(quotient_from_json(q));
  } else {
    throw ParseError("unknown group kind '" + kind + "'");
  }
  return s;
}

void validate_names(const std::vector<std::string>& names, const char* what) {
  for (const auto& n : names) {
    if (n.empty() || !ident_start(n[0]) ||
        !std::all_of(n.begin(), n.end(), ident_char))
      throw SpecError(std::string(what) + " name '" + n + "' is not an identifier");
    if (n == "e")
      throw SpecError(std::string("'e' is reserved for the identity literal"));
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j])
        throw SpecError(std::string(what) + " name '" + names[i] + "' repeated");
}

void validate_table(const GroupSpec& s) {
  const std::size_t n = s.elements.size();
  if (n == 0) throw SpecError("finite_table needs at least one element");
  std::vector<std::string> names = s.elements;
  // Identity may be named e; only non-identity names face the reserved check.
  std::vector<std::string> rest(names.begin() + 1, names.end());
  validate_names(rest, "element");
  for (std::size_t i = 1; i < names.size(); ++i)
    if (names[i] == names[0])
      throw SpecError("element name '" + names[0] + "' repeated");
  if (s.table.size() != n) throw SpecError("table must be order x order");
  for (const auto& row : s.table) {
    if (row.size() != n) throw SpecError("table must be order x order");
    for (auto v : row)
      if (v < 0 || static_cast<std::size_t>(v) >= n)
        throw SpecError("table entry out of range");
  }
  // Latin square: every row and column is a permutation.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> row_seen(n, false), col_seen(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      if (row_seen[s.table[i][j]])
        throw SpecError("table row " + std::to_string(i) + " repeats an element");
      row_seen[s.table[i][j]] = true;
      if (col_seen[s.table[j][i]])
        throw SpecError("table column " + std::to_string(i) + " repeats an element");
      col_seen[s.table[j][i]] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (s.table[0][i] != static_cast<std::int64_t>(i) ||
        s.table[i][0] != static_cast<std::int64_t>(i))
      throw SpecError("element 0 must be the identity");
  for (std::size_t i = 0; i < n; ++i) {
    bool has_inverse = false;
    for (std::size_t j = 0; j < n; ++j)
      if (s.table[i][j] == 0 && s.table[j][i] == 0) has_inverse = true;
    if (!has_inverse)
      throw SpecError("element " + std::to_string(i) + " has no two-sided inverse");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (s.table[s.table[a][b]][c] != s.table[a][s.table[b][c]])
          throw SpecError("table is not associative");
}

}  // namespace

GroupPtr make_group(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::Trivial:
      return std::make_shared<TrivialGroup>();
    case GroupSpec::Kind::Cyclic:
      if (spec.order <= 0) throw SpecError("cyclic order must be positive");
      return std::make_shared<CyclicGroup>(spec.order);
    case GroupSpec::Kind::FreeAbelian:
      if (spec.rank <= 0) throw SpecError("free abelian rank must be positive");
      return std::make_shared<FreeAbelianGroup>(spec.rank);
    case GroupSpec::Kind::FiniteTable:
      validate_table(spec);
      return std::make_shared<TableGroup>(spec.elements, spec.table);
    case GroupSpec::Kind::Fp: {
      validate_names(spec.generators, "generator");
      if (spec.generators.empty()) throw SpecError("fp group needs generators");
      if (spec.max_word_length <= 0) throw SpecError("max_word_length must be positive");
      // Relators are parsed against a relation-free copy of the context.
      auto free_ctx = std::make_shared<FpGroup>(
          spec.generators, std::vector<Word>{},
          std::vector<std::pair<GroupPtr, std::vector<Elem>>>{}, spec.max_word_length);
      std::vector<Word> relators;
      for (const auto& r : spec.relators) {
        Word w = free_ctx->parse_word(r).v;
        if (!w.empty()) relators.push_back(std::move(w));
      }
      std::vector<std::pair<GroupPtr, std::vector<Elem>>> quotients;
      for (const auto& q : spec.quotients) {
        if (!q.group) throw SpecError("quotient group missing");
        if (q.group->kind == GroupSpec::Kind::Fp)
          throw SpecError("quotient targets must have exact equality");
        GroupPtr target = make_group(*q.group);
        if (q.images.size() != spec.generators.size())
          throw SpecError("quotient needs one image word per generator");
        std::vector<Elem> images;
        for (const auto& w : q.images) images.push_back(target->parse_word(w));
        // The images must kill every relator, otherwise the map is not a
        // homomorphism from this group.
        for (const auto& r : relators) {
          Elem acc = target->identity();
          for (auto l : r) {
            const Elem& img = images[static_cast<std::size_t>(std::abs(l)) - 1];
            acc = target->multiply(acc, l > 0 ? img : target->inverse(img));
          }
          if (target->equals(acc, target->identity()) != Eq3::True)
            throw SpecError("quotient images violate a relator");
        }
        quotients.emplace_back(std::move(target), std::move(images));
      }
      return std::make_shared<FpGroup>(spec.generators, std::move(relators),
                                       std::move(quotients), spec.max_word_length);
    }
  }
  throw SpecError("unreachable group kind");
}

GroupSpec parse_group_spec(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("group spec: ") + e.what(), e.byte);
  }
  GroupSpec s;
  try {
    s = spec_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("group spec: ") + e.what());
  }
  make_group(s);  // run the load-time invariant checks
  return s;
}

}  // namespace cesym
