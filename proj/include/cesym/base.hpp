#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cesym {

// Coefficients, matrix entries and invariant factors are exact integers of
// unbounded size; elimination can blow up intermediates well past 64 bits.
using Int = boost::multiprecision::cpp_int;

// Tri-state truth value. `Unknown` is only ever produced by the finitely
// presented backend, where the word problem is semi-decidable.
enum class Eq3 : std::uint8_t { False = 0, True = 1, Unknown = 2 };

inline const char* to_string(Eq3 v) {
  switch (v) {
    case Eq3::True: return "true";
    case Eq3::False: return "false";
    default: return "unknown";
  }
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text; carries a byte offset into the offending document.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at offset " + std::to_string(position) + ")"),
        pos(position) {}
  explicit ParseError(const std::string& msg) : Error(msg), pos(0) {}
  std::size_t pos;
};

// Structurally valid input that violates a load-time invariant
// (non-Latin-square table, quotient images breaking a relator, ...).
struct SpecError : Error {
  using Error::Error;
};

// Values from two different group contexts were mixed, or an operation was
// called on a backend that does not support it.
struct ContextError : Error {
  using Error::Error;
};

// Two support keys of a group-ring element over an fp backend could not be
// proven equal or distinct, so a merge cannot be performed soundly.
struct UnknownMergeError : Error {
  UnknownMergeError(const std::string& a, const std::string& b)
      : Error("cannot merge group ring keys with unknown equality: '" + a +
              "' vs '" + b + "'"),
        lhs(a),
        rhs(b) {}
  std::string lhs, rhs;
};

// Co-orientation reversal requested for an E or T symbol, whose positive
// side is chosen permanently.
struct NotReversibleError : Error {
  using Error::Error;
};

struct ResourceLimitError : Error {
  using Error::Error;
};

}  // namespace cesym
