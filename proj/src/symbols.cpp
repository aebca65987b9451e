#include "cesym/symbols.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <limits>
#include <numeric>

namespace cesym {

namespace {

const Group& tuple_ctx(const SymbolTuple& t) {
  if (t.empty()) throw ContextError("empty symbol tuple");
  const Group& ctx = t.front().ctx();
  for (const auto& s : t)
    if (&s.ctx() != &ctx) throw ContextError("tuple symbols from different contexts");
  return ctx;
}

// Allowed entry permutations: every permutation for E, H, T; the twelve
// even permutations for Q (the ordering rule of a quadruple point is fixed
// only up to an even permutation).
const std::vector<std::vector<std::size_t>>& perms_for(SymbolKind kind) {
  static const auto make = [](std::size_t n, bool even_only) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
      if (even_only) {
        int inv = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            if (p[i] > p[j]) ++inv;
        if (inv % 2 != 0) continue;
      }
      out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  };
  static const auto two = make(2, false);
  static const auto three = make(3, false);
  static const auto four_even = make(4, true);
  switch (kind) {
    case SymbolKind::E:
    case SymbolKind::H: return two;
    case SymbolKind::T: return three;
    default: return four_even;
  }
}

std::int64_t coeff_to_i64(const Int& c) {
  static const Int bound = Int(1) << 62;
  if (c >= bound || c <= -bound)
    throw ResourceLimitError("coefficient too large for canonical encoding");
  return c.convert_to<std::int64_t>();
}

void embed_key(std::vector<std::int64_t>& out, const std::vector<std::int64_t>& key) {
  out.push_back(static_cast<std::int64_t>(key.size()));
  out.insert(out.end(), key.begin(), key.end());
}

// Degree part of a block: [support size, ((key len, key...), coeff)...]
// with pairs sorted by key.
void encode_degree(std::vector<std::int64_t>& out,
                   std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  out.push_back(static_cast<std::int64_t>(pairs.size()));
  for (const auto& [key, c] : pairs) {
    embed_key(out, key);
    out.push_back(c);
  }
}

void encode_block(std::vector<std::int64_t>& out, const Symbol& s) {
  const Group& ctx = s.ctx();
  out.push_back(static_cast<std::int64_t>(s.kind));
  for (const auto& e : s.entries) {
    embed_key(out, ctx.order_key(e.g));
    out.push_back(static_cast<std::int64_t>(e.sign));
  }
  std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>> pairs;
  pairs.reserve(s.degree.terms().size());
  for (const auto& [g, c] : s.degree.terms())
    pairs.emplace_back(ctx.order_key(g), coeff_to_i64(c));
  encode_degree(out, pairs);
}

Symbol transform_symbol(const Symbol& s, const std::vector<std::size_t>& perm,
                        const Elem& h, const Elem& k) {
  std::vector<Entry> entries;
  entries.reserve(s.entries.size());
  const Group& ctx = s.ctx();
  for (std::size_t m = 0; m < s.entries.size(); ++m) {
    const Entry& src = s.entries[perm[m]];
    entries.push_back({ctx.multiply(ctx.multiply(h, src.g), k), src.sign});
  }
  return Symbol(s.kind, std::move(entries), s.degree.left_act(h).right_act(k));
}

}  // namespace

Symbol::Symbol(SymbolKind k, std::vector<Entry> es, RingElem d)
    : kind(k), entries(std::move(es)), degree(std::move(d)) {
  if (entries.size() != arity(kind))
    throw ParseError(std::string("symbol of kind ") + kind_char(kind) + " needs " +
                     std::to_string(arity(kind)) + " entries, got " +
                     std::to_string(entries.size()));
  for (const auto& e : entries) degree.ctx().check_owns(e.g);
}

Symbol reverse(const Symbol& s) {
  if (s.kind == SymbolKind::E || s.kind == SymbolKind::T)
    throw NotReversibleError(std::string("symbol of kind ") + kind_char(s.kind) +
                             " has a permanent co-orientation");
  std::vector<Entry> entries = s.entries;
  for (auto& e : entries) e.sign = flip(e.sign);
  if (s.kind == SymbolKind::Q) std::swap(entries[0], entries[1]);
  return Symbol(s.kind, std::move(entries), s.degree);
}

// ---------------------------------------------------------------------------
// Transform
// ---------------------------------------------------------------------------

Transform Transform::identity_for(const SymbolTuple& t) {
  const Group& ctx = tuple_ctx(t);
  Transform w;
  w.left = ctx.identity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    w.tuple_perm.push_back(i);
    std::vector<std::size_t> ep(t[i].entries.size());
    std::iota(ep.begin(), ep.end(), 0);
    w.entry_perms.push_back(std::move(ep));
    w.rights.push_back(ctx.identity());
  }
  return w;
}

SymbolTuple Transform::apply(const SymbolTuple& t) const {
  if (t.size() != tuple_perm.size())
    throw ContextError("transform arity does not match tuple");
  SymbolTuple out;
  out.reserve(t.size());
  for (std::size_t j = 0; j < t.size(); ++j)
    out.push_back(transform_symbol(t[tuple_perm[j]], entry_perms[j], left, rights[j]));
  return out;
}

Transform Transform::then(const Transform& b) const {
  const Group& ctx = *left.ctx;
  Transform w;
  w.left = ctx.multiply(b.left, left);
  for (std::size_t j = 0; j < b.tuple_perm.size(); ++j) {
    std::size_t src = b.tuple_perm[j];
    w.tuple_perm.push_back(tuple_perm[src]);
    std::vector<std::size_t> ep(b.entry_perms[j].size());
    for (std::size_t m = 0; m < ep.size(); ++m)
      ep[m] = entry_perms[src][b.entry_perms[j][m]];
    w.entry_perms.push_back(std::move(ep));
    w.rights.push_back(ctx.multiply(rights[src], b.rights[j]));
  }
  return w;
}

Transform Transform::inverted() const {
  const Group& ctx = *left.ctx;
  const std::size_t n = tuple_perm.size();
  std::vector<std::size_t> inv_tp(n);
  for (std::size_t j = 0; j < n; ++j) inv_tp[tuple_perm[j]] = j;
  Transform w;
  w.left = ctx.inverse(left);
  w.tuple_perm.resize(n);
  w.entry_perms.resize(n);
  w.rights.resize(n);
  // Built so that this->then(w) is the identity transform, which requires
  // tuple_perm[w.tuple_perm[j]] == j.
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t src = inv_tp[j];
    w.tuple_perm[j] = src;
    const auto& ep = entry_perms[src];
    std::vector<std::size_t> inv_ep(ep.size());
    for (std::size_t m = 0; m < ep.size(); ++m) inv_ep[ep[m]] = m;
    w.entry_perms[j] = std::move(inv_ep);
    w.rights[j] = ctx.inverse(rights[src]);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Encoding and canonicalization
// ---------------------------------------------------------------------------

std::vector<std::int64_t> encode_tuple(const SymbolTuple& t) {
  tuple_ctx(t);
  std::vector<std::int64_t> out{static_cast<std::int64_t>(t.size())};
  std::vector<std::int64_t> block;
  for (const auto& s : t) {
    block.clear();
    encode_block(block, s);
    out.push_back(static_cast<std::int64_t>(block.size()));
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

std::string CanonicalForm::bytes() const {
  std::string s(encoding.size() * sizeof(std::int64_t), '\0');
  if (!encoding.empty()) std::memcpy(s.data(), encoding.data(), s.size());
  return s;
}

namespace {

// Best (lexicographically minimal) block encoding of one symbol over the
// given right multipliers and its allowed entry permutations, for a fixed
// common left multiplier.
struct BlockChoice {
  std::vector<std::int64_t> enc;
  std::vector<std::size_t> perm;
  Elem right;
};

// Lexicographic comparison of `cand` (a prefix) against the same-length
// prefix of `best`: -1 smaller, 0 prefix-equal, +1 larger.
int prefix_cmp(const std::vector<std::int64_t>& cand,
               const std::vector<std::int64_t>& best) {
  std::size_t n = std::min(cand.size(), best.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (cand[i] < best[i]) return -1;
    if (cand[i] > best[i]) return 1;
  }
  if (cand.size() <= best.size()) return 0;
  return 1;
}

BlockChoice best_block(const Symbol& s, const Elem& h, const std::vector<Elem>& ks) {
  const Group& ctx = s.ctx();
  const auto& perms = perms_for(s.kind);
  BlockChoice best;
  std::vector<std::int64_t> cand;
  std::vector<std::pair<std::vector<std::int64_t>, Sign>> keyed;
  for (const Elem& k : ks) {
    // Entry keys and the degree encoding do not depend on the permutation.
    keyed.clear();
    for (const auto& e : s.entries)
      keyed.emplace_back(ctx.order_key(ctx.multiply(ctx.multiply(h, e.g), k)), e.sign);
    // The degree encoding is built lazily: most candidates lose on the
    // entry prefix already.
    std::vector<std::int64_t> deg_enc;
    bool have_deg = false;
    for (const auto& perm : perms) {
      cand.clear();
      cand.push_back(static_cast<std::int64_t>(s.kind));
      for (std::size_t m = 0; m < keyed.size(); ++m) {
        embed_key(cand, keyed[perm[m]].first);
        cand.push_back(static_cast<std::int64_t>(keyed[perm[m]].second));
      }
      if (!best.enc.empty() && prefix_cmp(cand, best.enc) > 0) continue;
      if (!have_deg) {
        std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>> deg_pairs;
        deg_pairs.reserve(s.degree.terms().size());
        for (const auto& [g, c] : s.degree.terms())
          deg_pairs.emplace_back(ctx.order_key(ctx.multiply(ctx.multiply(h, g), k)),
                                 coeff_to_i64(c));
        encode_degree(deg_enc, deg_pairs);
        have_deg = true;
      }
      cand.insert(cand.end(), deg_enc.begin(), deg_enc.end());
      if (best.enc.empty() || cand < best.enc) {
        best.enc = cand;
        best.perm = perm;
        best.right = k;
      }
    }
  }
  return best;
}

struct Candidate {
  std::vector<std::int64_t> encoding;
  Transform transform;
};

// Assemble a tuple candidate from per-symbol block choices under a common
// left multiplier: blocks are sorted (the length prefix makes sorted block
// order the lexicographic minimum over tuple permutations).
Candidate assemble(const SymbolTuple& t, const Elem& h,
                   std::vector<BlockChoice> blocks) {
  const Group& ctx = tuple_ctx(t);
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (blocks[a].enc != blocks[b].enc) return blocks[a].enc < blocks[b].enc;
    return a < b;
  });
  Candidate c;
  c.encoding.push_back(static_cast<std::int64_t>(t.size()));
  c.transform.left = h;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const auto& b = blocks[order[j]];
    c.encoding.push_back(static_cast<std::int64_t>(b.enc.size()));
    c.encoding.insert(c.encoding.end(), b.enc.begin(), b.enc.end());
    c.transform.tuple_perm.push_back(order[j]);
    c.transform.entry_perms.push_back(b.perm);
    c.transform.rights.push_back(b.right);
    (void)ctx;
  }
  return c;
}

// Occurring elements of a symbol: entry labels and degree support keys.
std::vector<Elem> occurring(const Symbol& s) {
  std::vector<Elem> out;
  for (const auto& e : s.entries) out.push_back(e.g);
  for (const auto& [g, c] : s.degree.terms()) out.push_back(g);
  return out;
}

}  // namespace

CanonicalForm canonicalize(const SymbolTuple& t, int search_radius) {
  const Group& ctx = tuple_ctx(t);
  CanonicalForm out;
  Candidate best;

  auto consider = [&](Candidate&& cand) {
    if (best.encoding.empty() || cand.encoding < best.encoding) best = std::move(cand);
  };

  const bool abelian = ctx.kind() == Group::Kind::FreeAbelian ||
                       ctx.kind() == Group::Kind::Cyclic ||
                       ctx.kind() == Group::Kind::Trivial;
  if (abelian) {
    // Common-left and per-symbol-right actions compose to an independent
    // translation per symbol, so each symbol is minimized on its own over
    // translations sending some occurring element to the identity.
    std::vector<BlockChoice> blocks;
    for (const auto& s : t) {
      std::vector<Elem> cands;
      for (const auto& g : occurring(s)) {
        Elem inv = ctx.inverse(g);
        if (std::find(cands.begin(), cands.end(), inv) == cands.end())
          cands.push_back(inv);
      }
      if (cands.empty()) cands.push_back(ctx.identity());
      blocks.push_back(best_block(s, ctx.identity(), cands));
      // best_block applied the translation as a right multiplier; in the
      // abelian group left and right coincide so this is the full orbit.
    }
    consider(assemble(t, ctx.identity(), std::move(blocks)));
    out.status = CanonicalForm::Status::Exact;
  } else if (ctx.exact()) {
    const std::vector<Elem> all = ctx.ball(-1).elems;
    for (const Elem& h : all) {
      std::vector<BlockChoice> blocks;
      for (const auto& s : t) blocks.push_back(best_block(s, h, all));
      consider(assemble(t, h, std::move(blocks)));
    }
    out.status = CanonicalForm::Status::Exact;
  } else {
    if (search_radius < 0) throw ContextError("fp canonicalization needs a radius");
    const std::vector<Elem> cands = ctx.ball(search_radius).elems;
    for (const Elem& h : cands) {
      std::vector<BlockChoice> blocks;
      for (const auto& s : t) blocks.push_back(best_block(s, h, cands));
      consider(assemble(t, h, std::move(blocks)));
    }
    out.status = CanonicalForm::Status::Heuristic;
  }

  out.encoding = std::move(best.encoding);
  out.to_canonical = std::move(best.transform);
  out.tuple = out.to_canonical.apply(t);
  return out;
}

// ---------------------------------------------------------------------------
// Equivalence and one-sidedness
// ---------------------------------------------------------------------------

namespace {

Eq3 symbol_matches(const Symbol& a, const Symbol& b) {
  // a and b in the same context; True/False/Unknown termwise comparison.
  if (a.kind != b.kind) return Eq3::False;
  const Group& ctx = a.ctx();
  bool unknown = false;
  for (std::size_t m = 0; m < a.entries.size(); ++m) {
    if (a.entries[m].sign != b.entries[m].sign) return Eq3::False;
    Eq3 eq = ctx.equals(a.entries[m].g, b.entries[m].g);
    if (eq == Eq3::False) return Eq3::False;
    if (eq == Eq3::Unknown) unknown = true;
  }
  Eq3 deq = a.degree.equal(b.degree);
  if (deq == Eq3::False) return Eq3::False;
  if (deq == Eq3::Unknown) unknown = true;
  return unknown ? Eq3::Unknown : Eq3::True;
}

Symbol map_symbol(const Symbol& s, const Group& src, std::size_t q) {
  const Group& target = *src.quotient_group(q);
  std::vector<Entry> entries;
  for (const auto& e : s.entries)
    entries.push_back({src.apply_quotient(q, e.g), e.sign});
  RingElem degree = RingElem::zero(target);
  for (const auto& [g, c] : s.degree.terms())
    degree = degree.add(RingElem::basis(src.apply_quotient(q, g), c));
  return Symbol(s.kind, std::move(entries), std::move(degree));
}

}  // namespace

EquivResult equivalent(const SymbolTuple& a, const SymbolTuple& b, int search_radius) {
  const Group& ctx = tuple_ctx(a);
  if (&tuple_ctx(b) != &ctx) throw ContextError("tuples from different contexts");
  if (a.size() != b.size()) throw ContextError("tuples of different length");

  EquivResult res;
  if (ctx.exact()) {
    CanonicalForm ca = canonicalize(a, search_radius);
    CanonicalForm cb = canonicalize(b, search_radius);
    if (ca.encoding == cb.encoding) {
      res.value = Eq3::True;
      res.witness = ca.to_canonical.then(cb.to_canonical.inverted());
    } else {
      res.value = Eq3::False;
    }
    return res;
  }

  // fp: witness search over ball multipliers, then quotient separation.
  if (search_radius < 0) throw ContextError("fp equivalence needs a radius");
  const std::vector<Elem> cands = ctx.ball(search_radius).elems;
  const std::size_t n = a.size();
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (const Elem& h : cands) {
    std::vector<std::size_t> perm = sigma;
    std::sort(perm.begin(), perm.end());
    do {
      Transform w;
      w.left = h;
      w.tuple_perm = perm;
      bool all_matched = true;
      for (std::size_t j = 0; j < n && all_matched; ++j) {
        const Symbol& src = a[perm[j]];
        const Symbol& dst = b[j];
        bool matched = false;
        for (const Elem& k : cands) {
          for (const auto& rho : perms_for(src.kind)) {
            if (symbol_matches(transform_symbol(src, rho, h, k), dst) == Eq3::True) {
              w.entry_perms.push_back(rho);
              w.rights.push_back(k);
              matched = true;
              break;
            }
          }
          if (matched) break;
        }
        all_matched = matched;
      }
      if (all_matched) {
        res.value = Eq3::True;
        res.witness = std::move(w);
        return res;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  for (std::size_t q = 0; q < ctx.quotient_count(); ++q) {
    SymbolTuple qa, qb;
    for (const auto& s : a) qa.push_back(map_symbol(s, ctx, q));
    for (const auto& s : b) qb.push_back(map_symbol(s, ctx, q));
    if (equivalent(qa, qb, search_radius).value == Eq3::False) {
      res.value = Eq3::False;
      res.separating_quotient = static_cast<int>(q);
      return res;
    }
  }

  res.value = Eq3::Unknown;
  return res;
}

EquivResult is_one_sided(const Symbol& s, int search_radius) {
  if (s.kind == SymbolKind::E || s.kind == SymbolKind::T)
    throw NotReversibleError(std::string("symbol of kind ") + kind_char(s.kind) +
                             " has a permanent co-orientation");
  std::size_t plus = 0;
  for (const auto& e : s.entries)
    if (e.sign == Sign::Plus) ++plus;
  if (2 * plus != s.entries.size()) {
    // Sign counts are preserved by the equivalence and flipped by reversal,
    // so unbalanced symbols are two sided outright.
    EquivResult res;
    res.value = Eq3::False;
    return res;
  }
  return equivalent({s}, {reverse(s)}, search_radius);
}

// ---------------------------------------------------------------------------
// Text form
// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Symbol parse_symbol(const Group& ctx, std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty symbol");
  SymbolKind kind;
  switch (s[0]) {
    case 'E': kind = SymbolKind::E; break;
    case 'H': kind = SymbolKind::H; break;
    case 'T': kind = SymbolKind::T; break;
    case 'Q': kind = SymbolKind::Q; break;
    default: throw ParseError("symbol kind must be one of E, H, T, Q", 0);
  }
  std::size_t open = s.find('{');
  std::size_t close = s.find('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw ParseError("expected '{ ... }' entry list");
  if (trim(s.substr(1, open - 1)) != "")
    throw ParseError("unexpected text between kind and '{'", 1);
  std::string_view inner = s.substr(open + 1, close - open - 1);
  std::vector<Entry> entries;
  std::size_t start = 0;
  while (start <= inner.size()) {
    std::size_t comma = inner.find(',', start);
    std::string_view ent =
        trim(comma == std::string_view::npos ? inner.substr(start)
                                             : inner.substr(start, comma - start));
    if (ent.empty()) throw ParseError("empty symbol entry");
    char last = ent.back();
    Sign sign;
    if (last == '+')
      sign = Sign::Plus;
    else if (last == '-')
      sign = Sign::Minus;
    else
      throw ParseError("entry must end with a sign '+' or '-'");
    Elem g = ctx.parse_word(trim(ent.substr(0, ent.size() - 1)));
    entries.push_back({std::move(g), sign});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::string_view rest = trim(s.substr(close + 1));
  if (rest.empty() || rest[0] != '@')
    throw ParseError("expected '@' and a degree after the entry list");
  RingElem degree = RingElem::parse(ctx, trim(rest.substr(1)));
  return Symbol(kind, std::move(entries), std::move(degree));
}

SymbolTuple parse_tuple(const Group& ctx, std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty tuple");
  if (s.front() != '[' || s.back() != ']')
    throw ParseError("tuple must be enclosed in '[' ... ']'");
  std::string_view inner = s.substr(1, s.size() - 2);
  SymbolTuple out;
  std::size_t start = 0;
  while (start <= inner.size()) {
    std::size_t semi = inner.find(';', start);
    std::string_view part =
        semi == std::string_view::npos ? inner.substr(start)
                                       : inner.substr(start, semi - start);
    out.push_back(parse_symbol(ctx, part));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return out;
}

std::string format_symbol(const Symbol& s) {
  std::string out(1, kind_char(s.kind));
  out += '{';
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    if (i) out += ',';
    out += s.ctx().format(s.entries[i].g);
    out += sign_char(s.entries[i].sign);
  }
  out += "}@";
  out += s.degree.format();
  return out;
}

std::string format_tuple(const SymbolTuple& t) {
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += "; ";
    out += format_symbol(t[i]);
  }
  out += "]";
  return out;
}

}  // namespace cesym
