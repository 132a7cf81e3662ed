#pragma once

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bolmoufang {

using Element = int;

/// Finite groupoid on {0, ..., n-1} given by its Cayley table. Row index is
/// the left factor: at(a, b) = a·b.
class Magma {
 public:
  Magma(int order, std::vector<Element> cells);
  Magma(std::initializer_list<std::initializer_list<Element>> rows);

  int order() const { return order_; }
  Element at(Element a, Element b) const { return cells_[a * order_ + b]; }
  std::span<const Element> row(Element a) const {
    return {cells_.data() + a * order_, static_cast<std::size_t>(order_)};
  }
  const std::vector<Element>& cells() const { return cells_; }

  friend bool operator==(const Magma&, const Magma&) = default;
  /// Row-major lexicographic order on tables of equal order.
  friend auto operator<=>(const Magma&, const Magma&) = default;

 private:
  int order_;
  std::vector<Element> cells_;
};

class TableParseError : public std::invalid_argument {
 public:
  TableParseError(const std::string& what, int line)
      : std::invalid_argument(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Reads the Cayley table text format: order on the first line, then one row
/// per line. Blank lines and lines starting with '#' are skipped.
Magma parse_table(std::string_view text);
std::string format_table(const Magma& m);

enum class NeutralSide { left, right, two_sided };
enum class InverseSide { none, left, right, two_sided };

/// Structure demanded of a groupoid. Inverses are relative to the neutral:
/// a left inverse of x is x' with x'x = 1, a right inverse has xx' = 1.
struct StructureSpec {
  NeutralSide neutral = NeutralSide::two_sided;
  InverseSide inverses = InverseSide::two_sided;

  friend bool operator==(const StructureSpec&, const StructureSpec&) = default;
};

std::string to_string(NeutralSide s);
std::string to_string(InverseSide s);
std::string to_string(const StructureSpec& s);
NeutralSide parse_neutral_side(std::string_view s);
InverseSide parse_inverse_side(std::string_view s);
/// Mirror-image structure: left and right swap.
StructureSpec dual_spec(const StructureSpec& s);
/// All 3 x 4 structure specs.
std::vector<StructureSpec> all_structure_specs();

struct PropertyReport {
  std::vector<Element> left_neutrals;
  std::vector<Element> right_neutrals;
  std::optional<Element> two_sided_neutral;
  /// Two-sided neutral if any, else the smallest one-sided neutral. Inverse
  /// witnesses below are taken relative to it.
  std::optional<Element> reference_neutral;
  /// Smallest y with xy = yx = 1 for the two-sided neutral.
  std::optional<std::vector<Element>> inverse_map_two_sided;
  /// Same, relative to reference_neutral.
  std::optional<std::vector<Element>> inverse_map;
  std::vector<std::vector<Element>> left_inverse_witnesses;   // y·x = 1
  std::vector<std::vector<Element>> right_inverse_witnesses;  // x·y = 1
  std::vector<std::vector<Element>> two_sided_inverse_witnesses;
  std::optional<std::vector<Element>> lip_map;  // x^λ·(x·y) = y
  std::optional<std::vector<Element>> rip_map;  // (y·x)·x^ρ = y
  bool left_translations_bijective = false;
  bool right_translations_bijective = false;
  bool is_latin = false;
  bool is_loop = false;
  bool is_associative = false;
  bool is_group = false;
};

PropertyReport analyze(const Magma& m);
bool is_loop(const Magma& m);
bool is_group(const Magma& m);
bool is_associative(const Magma& m);
bool is_latin(const Magma& m);

struct StructureWitness {
  Element neutral = 0;
  /// Chosen inverse per element; empty when no inverses are demanded.
  std::vector<Element> inverses;
};

/// Smallest neutral of the demanded side admitting inverses of the demanded
/// side, with the smallest inverse for each element.
std::optional<StructureWitness> satisfies_structure(const Magma& m, const StructureSpec& spec);

/// Transposed table.
Magma opposite(const Magma& m);
/// Image under the bijection perm (old label -> new label).
Magma relabel(const Magma& m, std::span<const Element> perm);
/// Lexicographically least relabeling; the two-sided neutral, if present, is
/// pinned to 0. Exhaustive over permutations, so only meant for order <= 8.
Magma canonical_form(const Magma& m);

inline constexpr int kMaxCanonicalOrder = 8;

}  // namespace bolmoufang
