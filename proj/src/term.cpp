#include "bolmoufang/term.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace bolmoufang {

char var_name(Var v) { return static_cast<char>('x' + static_cast<int>(v)); }

Term Term::variable(Var v) {
  Term t;
  t.kind_ = Kind::var;
  t.var_ = v;
  return t;
}

Term Term::one() { return Term{}; }

Term Term::inverse(Term child) {
  Term t;
  t.kind_ = Kind::inv;
  t.left_ = std::make_shared<const Term>(std::move(child));
  return t;
}

Term Term::product(Term left, Term right) {
  Term t;
  t.kind_ = Kind::prod;
  t.left_ = std::make_shared<const Term>(std::move(left));
  t.right_ = std::make_shared<const Term>(std::move(right));
  return t;
}

int Term::size() const {
  switch (kind_) {
    case Kind::var:
    case Kind::one:
      return 0;
    case Kind::inv:
      return left_->size();
    case Kind::prod:
      return 1 + left_->size() + right_->size();
  }
  return 0;
}

namespace {

void collect_reading(const Term& t, std::vector<Var>& out) {
  switch (t.kind()) {
    case Term::Kind::var:
      out.push_back(t.var());
      break;
    case Term::Kind::one:
      break;
    case Term::Kind::inv:
      collect_reading(t.child(), out);
      break;
    case Term::Kind::prod:
      collect_reading(t.left(), out);
      collect_reading(t.right(), out);
      break;
  }
}

bool is_atomic(const Term& t) {
  return t.kind() == Term::Kind::var || t.kind() == Term::Kind::one;
}

void render_into(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::var:
      out += var_name(t.var());
      break;
    case Term::Kind::one:
      out += '1';
      break;
    case Term::Kind::inv:
      if (is_atomic(t.child())) {
        render_into(t.child(), out);
      } else {
        out += '(';
        render_into(t.child(), out);
        out += ')';
      }
      out += "^-1";
      break;
    case Term::Kind::prod:
      for (const Term* factor : {&t.left(), &t.right()}) {
        if (factor->kind() == Term::Kind::prod) {
          out += '(';
          render_into(*factor, out);
          out += ')';
        } else {
          render_into(*factor, out);
        }
      }
      break;
  }
}

}  // namespace

std::vector<Var> Term::reading() const {
  std::vector<Var> out;
  collect_reading(*this, out);
  return out;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Term::Kind::var:
      return a.var_ == b.var_;
    case Term::Kind::one:
      return true;
    case Term::Kind::inv:
      return *a.left_ == *b.left_;
    case Term::Kind::prod:
      return *a.left_ == *b.left_ && *a.right_ == *b.right_;
  }
  return false;
}

std::string render(const Term& t) {
  std::string out;
  render_into(t, out);
  return out;
}

std::string render(const Identity& id) { return render(id.lhs) + " = " + render(id.rhs); }

// ---------------------------------------------------------------------------
// Bol-Moufang codes

namespace {

constexpr std::string_view kLetters = "ABCDEF";

Term var_term(Var v) { return Term::variable(v); }

}  // namespace

BMCode parse_code(std::string_view text) {
  if (text.size() != 3) {
    throw ParseError("code '" + std::string(text) + "' must be a letter and two digits",
                     std::min<std::size_t>(text.size(), 3));
  }
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  if (kLetters.find(letter) == std::string_view::npos) {
    throw ParseError("bad letter '" + std::string(1, text[0]) + "' (expected A-F)", 0);
  }
  auto digit = [&](std::size_t pos) {
    const char c = text[pos];
    if (c < '1' || c > '5') {
      throw ParseError("bad bracketing digit '" + std::string(1, c) + "' at position " +
                           std::to_string(pos) + " (expected 1-5)",
                       pos);
    }
    return c - '0';
  };
  BMCode code{letter, digit(1), digit(2)};
  if (code.i >= code.j) {
    throw ParseError("bracketings " + std::to_string(code.i) + " and " + std::to_string(code.j) +
                         " violate i < j",
                     2);
  }
  return code;
}

std::string to_string(const BMCode& code) {
  return std::string(1, code.letter) + static_cast<char>('0' + code.i) +
         static_cast<char>('0' + code.j);
}

std::array<Var, 4> pattern(char letter) {
  using enum Var;
  switch (letter) {
    case 'A': return {x, x, y, z};
    case 'B': return {x, y, x, z};
    case 'C': return {x, y, y, z};
    case 'D': return {x, y, z, x};
    case 'E': return {x, y, z, y};
    case 'F': return {x, y, z, z};
    default: throw ParseError(std::string("bad letter '") + letter + "'", 0);
  }
}

Term bracket(int shape, const std::array<Term, 4>& f) {
  switch (shape) {
    case 1: return f[0] * (f[1] * (f[2] * f[3]));
    case 2: return f[0] * ((f[1] * f[2]) * f[3]);
    case 3: return (f[0] * f[1]) * (f[2] * f[3]);
    case 4: return (f[0] * (f[1] * f[2])) * f[3];
    case 5: return ((f[0] * f[1]) * f[2]) * f[3];
    default: throw ParseError("bracketing " + std::to_string(shape) + " out of 1..5", 0);
  }
}

namespace {

std::array<Term, 4> factors(char letter) {
  const auto p = pattern(letter);
  return {var_term(p[0]), var_term(p[1]), var_term(p[2]), var_term(p[3])};
}

// Bracketing number of a four-leaf product over atomic leaves, or 0.
int shape_of(const Term& t) {
  if (t.kind() != Term::Kind::prod) return 0;
  auto leaf = [](const Term& u) { return u.kind() == Term::Kind::var; };
  auto prod_of_leaves = [&](const Term& u) {
    return u.kind() == Term::Kind::prod && leaf(u.left()) && leaf(u.right());
  };
  const Term& l = t.left();
  const Term& r = t.right();
  if (leaf(l) && r.kind() == Term::Kind::prod) {
    if (leaf(r.left()) && prod_of_leaves(r.right())) return 1;
    if (prod_of_leaves(r.left()) && leaf(r.right())) return 2;
  }
  if (prod_of_leaves(l) && prod_of_leaves(r)) return 3;
  if (l.kind() == Term::Kind::prod && leaf(r)) {
    if (leaf(l.left()) && prod_of_leaves(l.right())) return 4;
    if (prod_of_leaves(l.left()) && leaf(l.right())) return 5;
  }
  return 0;
}

}  // namespace

Identity decode_bm(const BMCode& code) {
  const auto f = factors(code.letter);
  if (code.i < 1 || code.j > 5 || code.i >= code.j) {
    throw ParseError("invalid code " + to_string(code), 1);
  }
  return Identity{bracket(code.i, f), bracket(code.j, f), to_string(code)};
}

BMCode encode_bm(const Identity& raw) {
  const Identity id = normalize_variables(raw);
  const int a = shape_of(id.lhs);
  const int b = shape_of(id.rhs);
  if (a == 0 || b == 0) {
    throw ClassificationError("not of Bol-Moufang type: sides must be products of four variables");
  }
  const auto reading = id.lhs.reading();
  if (reading != id.rhs.reading()) {
    throw ClassificationError("not of Bol-Moufang type: variable order differs between sides");
  }
  if (a == b) {
    throw ClassificationError("not of Bol-Moufang type: both sides have bracketing " +
                              std::to_string(a));
  }
  for (char letter : kLetters) {
    const auto p = pattern(letter);
    if (std::equal(p.begin(), p.end(), reading.begin(), reading.end())) {
      return BMCode{letter, std::min(a, b), std::max(a, b)};
    }
  }
  throw ClassificationError(
      "not of Bol-Moufang type: need three variables with exactly one repeated");
}

std::vector<Identity> enumerate_bm() {
  std::vector<Identity> out;
  out.reserve(60);
  for (char letter : kLetters) {
    for (int i = 1; i <= 5; ++i) {
      for (int j = i + 1; j <= 5; ++j) out.push_back(decode_bm(BMCode{letter, i, j}));
    }
  }
  return out;
}

BMCode dual_code(const BMCode& code) {
  char letter = code.letter;  // C' = C, D' = D
  switch (code.letter) {
    case 'A': letter = 'F'; break;
    case 'B': letter = 'E'; break;
    case 'E': letter = 'B'; break;
    case 'F': letter = 'A'; break;
    default: break;
  }
  // digit k maps to 6 - k; the order of the pair flips
  return BMCode{letter, 6 - code.j, 6 - code.i};
}

Term mirror(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::one:
      return t;
    case Term::Kind::inv:
      return Term::inverse(mirror(t.child()));
    case Term::Kind::prod:
      return mirror(t.right()) * mirror(t.left());
  }
  return t;
}

namespace {

Term rename(const Term& t, const std::array<Var, kVarCount>& map) {
  switch (t.kind()) {
    case Term::Kind::var:
      return Term::variable(map[static_cast<int>(t.var())]);
    case Term::Kind::one:
      return t;
    case Term::Kind::inv:
      return Term::inverse(rename(t.child(), map));
    case Term::Kind::prod:
      return rename(t.left(), map) * rename(t.right(), map);
  }
  return t;
}

std::string dual_tag(const std::string& tag) {
  static const std::map<std::string, std::string> kNamed = {
      {"LA", "RA"}, {"RA", "LA"}, {"LB", "RB"}, {"RB", "LB"}, {"M1", "M2"}, {"M2", "M1"},
      {"M3", "M4"}, {"M4", "M3"}, {"C", "C"},   {"FLEX", "FLEX"}, {"ASSOC", "ASSOC"}};
  if (auto it = kNamed.find(tag); it != kNamed.end()) return it->second;
  try {
    return to_string(dual_code(parse_code(tag)));
  } catch (const ParseError&) {
    return {};
  }
}

}  // namespace

Identity normalize_variables(const Identity& id) {
  std::array<Var, kVarCount> map{Var::x, Var::y, Var::z};
  std::array<bool, kVarCount> seen{};
  int next = 0;
  for (const Term* side : {&id.lhs, &id.rhs}) {
    for (Var v : side->reading()) {
      const int k = static_cast<int>(v);
      if (!seen[k]) {
        seen[k] = true;
        map[k] = static_cast<Var>(next++);
      }
    }
  }
  return Identity{rename(id.lhs, map), rename(id.rhs, map), id.tag};
}

Identity dual_identity(const Identity& id) {
  Identity mirrored{mirror(id.rhs), mirror(id.lhs), dual_tag(id.tag)};
  return normalize_variables(mirrored);
}

// ---------------------------------------------------------------------------
// Named laws

const std::vector<std::string>& named_tags() {
  static const std::vector<std::string> kTags = {"LA", "RA", "LB", "RB", "M1", "M2",
                                                 "M3", "M4", "C",  "FLEX", "ASSOC"};
  return kTags;
}

std::optional<Identity> named_identity(std::string_view raw) {
  std::string tag(raw);
  std::transform(tag.begin(), tag.end(), tag.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  const Term x = var_term(Var::x), y = var_term(Var::y), z = var_term(Var::z);
  auto from_code = [&](const char* code) {
    Identity id = decode_bm(parse_code(code));
    id.tag = tag;
    return id;
  };
  if (tag == "LA") return Identity{x * (x * y), (x * x) * y, tag};
  if (tag == "RA") return Identity{x * (y * y), (x * y) * y, tag};
  if (tag == "FLEX") return Identity{(x * y) * x, x * (y * x), tag};
  if (tag == "ASSOC") return Identity{x * (y * z), (x * y) * z, tag};
  if (tag == "LB") return from_code("B14");
  if (tag == "RB") return from_code("E25");
  if (tag == "M1") return from_code("B15");
  if (tag == "M2") return from_code("E15");
  if (tag == "M3") return from_code("D23");
  if (tag == "M4") return from_code("D34");
  if (tag == "C") return from_code("C15");
  return std::nullopt;
}

Identity resolve_identity(std::string_view text) {
  if (auto named = named_identity(text)) return *named;
  return decode_bm(parse_code(text));
}

// ---------------------------------------------------------------------------
// Evaluation

Interpretation default_interpretation(const Magma& m) {
  const PropertyReport r = analyze(m);
  return Interpretation{r.two_sided_neutral, r.inverse_map_two_sided};
}

Element eval_term(const Term& t, const Magma& m, const Assignment& a,
                  const Interpretation& interp) {
  switch (t.kind()) {
    case Term::Kind::var: {
      const auto& v = a[static_cast<int>(t.var())];
      if (!v) throw EvaluationError(std::string("variable ") + var_name(t.var()) + " is unassigned");
      if (*v < 0 || *v >= m.order()) throw EvaluationError("assigned value out of range");
      return *v;
    }
    case Term::Kind::one:
      if (!interp.neutral) throw EvaluationError("term uses 1 but no neutral element is designated");
      return *interp.neutral;
    case Term::Kind::inv: {
      if (!interp.inverse) throw EvaluationError("term uses an inverse but no inverse map is designated");
      return (*interp.inverse)[eval_term(t.child(), m, a, interp)];
    }
    case Term::Kind::prod:
      return m.at(eval_term(t.left(), m, a, interp), eval_term(t.right(), m, a, interp));
  }
  return 0;
}

int variable_count(const Identity& id) {
  int count = 0;
  for (const Term* side : {&id.lhs, &id.rhs}) {
    for (Var v : side->reading()) count = std::max(count, static_cast<int>(v) + 1);
  }
  return count;
}

std::optional<std::array<Element, kVarCount>> falsifying_assignment(
    const Identity& id, const Magma& m, const Interpretation& interp) {
  const int n = m.order();
  const int vars = variable_count(id);
  const int total = vars == 0 ? 1 : vars == 1 ? n : vars == 2 ? n * n : n * n * n;
  for (int k = 0; k < total; ++k) {
    std::array<Element, kVarCount> values{};
    int rest = k;
    for (int v = vars - 1; v >= 0; --v) {
      values[v] = rest % n;
      rest /= n;
    }
    Assignment a;
    for (int v = 0; v < vars; ++v) a[v] = values[v];
    if (eval_term(id.lhs, m, a, interp) != eval_term(id.rhs, m, a, interp)) return values;
  }
  return std::nullopt;
}

bool holds(const Identity& id, const Magma& m, const Interpretation& interp) {
  return !falsifying_assignment(id, m, interp).has_value();
}

namespace {

bool uses_structure(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var: return false;
    case Term::Kind::one:
    case Term::Kind::inv: return true;
    case Term::Kind::prod: return uses_structure(t.left()) || uses_structure(t.right());
  }
  return false;
}

}  // namespace

bool holds(const Identity& id, const Magma& m) {
  if (uses_structure(id.lhs) || uses_structure(id.rhs)) {
    return holds(id, m, default_interpretation(m));
  }
  return holds(id, m, Interpretation{});
}

}  // namespace bolmoufang
