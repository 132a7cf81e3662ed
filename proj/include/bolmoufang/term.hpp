#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bolmoufang/magma.hpp"

namespace bolmoufang {

/// Variables of an identity, always numbered in order of first occurrence.
enum class Var : std::uint8_t { x = 0, y = 1, z = 2 };

inline constexpr int kVarCount = 3;

char var_name(Var v);

/// Immutable binary-operation tree over x, y, z, the constant 1 and formal
/// inverses. Children are shared, so copies are cheap.
class Term {
 public:
  enum class Kind : std::uint8_t { var, one, inv, prod };

  static Term variable(Var v);
  static Term one();
  static Term inverse(Term child);
  static Term product(Term left, Term right);

  Kind kind() const { return kind_; }
  Var var() const { return var_; }
  const Term& child() const { return *left_; }
  const Term& left() const { return *left_; }
  const Term& right() const { return *right_; }

  /// Number of product nodes.
  int size() const;
  /// Variables in left-to-right reading order, repeats included.
  std::vector<Var> reading() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  Term() = default;
  Kind kind_ = Kind::one;
  Var var_ = Var::x;
  std::shared_ptr<const Term> left_;
  std::shared_ptr<const Term> right_;
};

inline Term operator*(Term a, Term b) { return Term::product(std::move(a), std::move(b)); }

/// Juxtaposition with explicit parentheses around every non-atomic factor,
/// e.g. "x((yy)z)".
std::string render(const Term& t);

struct Identity {
  Term lhs;
  Term rhs;
  std::string tag;  // named law, Xij code, or empty

  friend bool operator==(const Identity& a, const Identity& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

std::string render(const Identity& id);

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ClassificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Code of an identity of Bol-Moufang type: variable pattern letter A..F and
/// two bracketings 1..5 with i < j.
struct BMCode {
  char letter = 'A';
  int i = 1;
  int j = 2;

  friend auto operator<=>(const BMCode&, const BMCode&) = default;
};

/// Parses "C25" (letter case-insensitive). Throws ParseError.
BMCode parse_code(std::string_view text);
std::string to_string(const BMCode& code);

/// Variable pattern for a letter, e.g. 'B' -> x y x z.
std::array<Var, 4> pattern(char letter);
/// Bracketing 1..5 applied to four factors.
Term bracket(int shape, const std::array<Term, 4>& factors);

Identity decode_bm(const BMCode& code);
/// Accepts either orientation of the two sides. Throws ClassificationError.
BMCode encode_bm(const Identity& id);
/// All 60 identities in lexicographic code order.
std::vector<Identity> enumerate_bm();
/// Letter/digit rule: Xij -> X' j' i'.
BMCode dual_code(const BMCode& code);

/// Mirror image: reverse every product, swap the sides, and rename variables
/// back to first-occurrence order. An involution on normalized identities.
Identity dual_identity(const Identity& id);
Term mirror(const Term& t);

/// Renames variables to x, y, z in order of first occurrence (lhs first).
Identity normalize_variables(const Identity& id);

/// Named laws: LA RA LB RB M1 M2 M3 M4 C FLEX ASSOC.
const std::vector<std::string>& named_tags();
std::optional<Identity> named_identity(std::string_view tag);
/// A named tag or an Xij code. Throws ParseError.
Identity resolve_identity(std::string_view text);

/// Values of x, y, z; unset entries are unassigned.
using Assignment = std::array<std::optional<Element>, kVarCount>;

/// How 1 and x^{-1} are read in a magma.
struct Interpretation {
  std::optional<Element> neutral;
  std::optional<std::vector<Element>> inverse;
};

/// Two-sided neutral and smallest two-sided inverses, when present.
Interpretation default_interpretation(const Magma& m);

Element eval_term(const Term& t, const Magma& m, const Assignment& a,
                  const Interpretation& interp = {});

/// Number of distinct variables in the identity (0..3).
int variable_count(const Identity& id);

/// First assignment (lexicographic over x, y, z) on which the sides differ.
std::optional<std::array<Element, kVarCount>> falsifying_assignment(
    const Identity& id, const Magma& m, const Interpretation& interp);

bool holds(const Identity& id, const Magma& m, const Interpretation& interp);
/// Uses default_interpretation(m) when the identity mentions 1 or inverses.
bool holds(const Identity& id, const Magma& m);

}  // namespace bolmoufang
