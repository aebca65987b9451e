#include "cesym/group_ring.hpp"

#include <algorithm>
#include <cctype>

namespace cesym {

void RingElem::sort_terms() {
  std::sort(terms_.begin(), terms_.end(),
            [this](const std::pair<Elem, Int>& a, const std::pair<Elem, Int>& b) {
              return compare_keys(ctx_->order_key(a.first), ctx_->order_key(b.first)) < 0;
            });
}

void RingElem::insert_term(const Elem& g, const Int& coeff) {
  if (coeff == 0) return;
  ctx_->check_owns(g);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    Eq3 eq = ctx_->equals(terms_[i].first, g);
    if (eq == Eq3::True) {
      terms_[i].second += coeff;
      if (terms_[i].second == 0)
        terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
    if (eq == Eq3::Unknown)
      throw UnknownMergeError(ctx_->format(terms_[i].first), ctx_->format(g));
  }
  terms_.emplace_back(g, coeff);
}

RingElem RingElem::basis(const Elem& g, Int coeff) {
  RingElem out(*g.ctx);
  out.insert_term(g, coeff);
  return out;
}

RingElem RingElem::add(const RingElem& other) const {
  if (ctx_ != other.ctx_) throw ContextError("group ring context mismatch");
  RingElem out = *this;
  for (const auto& [g, c] : other.terms_) out.insert_term(g, c);
  out.sort_terms();
  return out;
}

RingElem RingElem::negate() const {
  RingElem out = *this;
  for (auto& [g, c] : out.terms_) c = -c;
  return out;
}

RingElem RingElem::sub_basis(const Elem& g) const {
  RingElem out = *this;
  out.insert_term(g, -1);
  out.sort_terms();
  return out;
}

RingElem RingElem::left_act(const Elem& h) const {
  ctx_->check_owns(h);
  RingElem out(*ctx_);
  // Left translation is injective, so keys never collide; re-sorting suffices.
  for (const auto& [g, c] : terms_) out.terms_.emplace_back(ctx_->multiply(h, g), c);
  out.sort_terms();
  return out;
}

RingElem RingElem::right_act(const Elem& k) const {
  ctx_->check_owns(k);
  RingElem out(*ctx_);
  for (const auto& [g, c] : terms_) out.terms_.emplace_back(ctx_->multiply(g, k), c);
  out.sort_terms();
  return out;
}

std::vector<Int> RingElem::coefficient_multiset() const {
  std::vector<Int> out;
  out.reserve(terms_.size());
  for (const auto& [g, c] : terms_) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

Eq3 RingElem::equal(const RingElem& other) const {
  if (ctx_ != other.ctx_) throw ContextError("group ring context mismatch");
  if (terms_.size() != other.terms_.size())
    return ctx_->exact() ? Eq3::False : Eq3::Unknown;
  if (ctx_->exact()) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].second != other.terms_[i].second) return Eq3::False;
      if (ctx_->equals(terms_[i].first, other.terms_[i].first) != Eq3::True)
        return Eq3::False;
    }
    return Eq3::True;
  }
  // fp: greedy bijective matching under proven equality.
  std::vector<bool> used(other.terms_.size(), false);
  bool unknown = false;
  for (const auto& [g, c] : terms_) {
    bool matched = false;
    for (std::size_t j = 0; j < other.terms_.size() && !matched; ++j) {
      if (used[j] || other.terms_[j].second != c) continue;
      Eq3 eq = ctx_->equals(g, other.terms_[j].first);
      if (eq == Eq3::True) {
        used[j] = true;
        matched = true;
      } else if (eq == Eq3::Unknown) {
        unknown = true;
      }
    }
    if (!matched) return unknown ? Eq3::Unknown : Eq3::False;
  }
  return Eq3::True;
}

std::string RingElem::format() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& [g, c] = terms_[i];
    Int mag = c < 0 ? Int(-c) : c;
    if (i == 0) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1) out += mag.str() + "*";
    out += ctx_->format(g);
  }
  return out;
}

// Textual form: `c1*w1 + c2*w2 + ...`, `0` for zero, coefficient 1 omitted,
// `-` accepted both as term connective and as leading sign.
RingElem RingElem::parse(const Group& ctx, std::string_view text) {
  RingElem out(ctx);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i >= text.size()) throw ParseError("empty group ring element", i);
  if (text[i] == '0') {
    ++i;
    skip_ws();
    if (i != text.size()) throw ParseError("trailing input after 0", i);
    return out;
  }
  bool first = true;
  while (i < text.size()) {
    Int sign = 1;
    if (!first) {
      if (text[i] == '+') {
        ++i;
      } else if (text[i] == '-') {
        sign = -1;
        ++i;
      } else {
        throw ParseError("expected '+' or '-' between terms", i);
      }
      skip_ws();
    }
    // Leading coefficient sign, also accepted right after a connective.
    if (i < text.size() && text[i] == '-') {
      sign = -sign;
      ++i;
      skip_ws();
    }
    first = false;
    Int coeff = 1;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::string digits;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        digits += text[i++];
      coeff = Int(digits);
      skip_ws();
      if (i >= text.size() || text[i] != '*')
        throw ParseError("expected '*' after coefficient", i);
      ++i;
      skip_ws();
    }
    // Word runs until the next top-level '+'/'-' connective. A '-' directly
    // after '^' belongs to an exponent, not to the sum.
    std::size_t start = i;
    while (i < text.size()) {
      char ch = text[i];
      if (ch == '+' || ch == '-') {
        if (i > start && text[i - 1] == '^') {
          ++i;
          continue;
        }
        break;
      }
      ++i;
    }
    if (i == start) throw ParseError("expected a word", i);
    Elem g = ctx.parse_word(text.substr(start, i - start));
    out.insert_term(g, sign * coeff);
    skip_ws();
  }
  out.sort_terms();
  return out;
}

}  // namespace cesym
