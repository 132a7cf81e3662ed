#include "bolmoufang/magma.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace bolmoufang {

Magma::Magma(int order, std::vector<Element> cells) : order_(order), cells_(std::move(cells)) {
  if (order_ <= 0) throw std::invalid_argument("magma order must be positive");
  if (cells_.size() != static_cast<std::size_t>(order_) * order_) {
    throw std::invalid_argument("table of order " + std::to_string(order_) + " needs " +
                                std::to_string(order_ * order_) + " entries");
  }
  for (Element e : cells_) {
    if (e < 0 || e >= order_) {
      throw std::invalid_argument("table entry " + std::to_string(e) + " out of range");
    }
  }
}

namespace {

std::vector<Element> flatten(std::initializer_list<std::initializer_list<Element>> rows) {
  std::vector<Element> cells;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw std::invalid_argument("table rows must have equal length");
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return cells;
}

}  // namespace

Magma::Magma(std::initializer_list<std::initializer_list<Element>> rows)
    : Magma(static_cast<int>(rows.size()), flatten(rows)) {}

Magma parse_table(std::string_view text) {
  std::vector<std::vector<long>> lines;
  std::vector<int> line_numbers;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    std::vector<long> values;
    std::size_t i = first;
    while (i < line.size()) {
      if (line[i] == ' ' || line[i] == '\t') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      const std::string_view token = line.substr(i, j - i);
      long value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw TableParseError("line " + std::to_string(line_no) + ": non-integer token '" +
                                  std::string(token) + "'",
                              line_no);
      }
      values.push_back(value);
      i = j;
    }
    lines.push_back(std::move(values));
    line_numbers.push_back(line_no);
    if (end == text.size()) break;
  }
  if (lines.empty()) throw TableParseError("empty table text", line_no);
  if (lines[0].size() != 1) {
    throw TableParseError("line " + std::to_string(line_numbers[0]) +
                              ": first line must hold only the order",
                          line_numbers[0]);
  }
  const long n = lines[0][0];
  if (n <= 0) throw TableParseError("order must be positive", line_numbers[0]);
  if (static_cast<long>(lines.size()) - 1 != n) {
    throw TableParseError("expected " + std::to_string(n) + " rows, found " +
                              std::to_string(lines.size() - 1),
                          line_numbers.back());
  }
  std::vector<Element> cells;
  cells.reserve(static_cast<std::size_t>(n * n));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (static_cast<long>(lines[r].size()) != n) {
      throw TableParseError("line " + std::to_string(line_numbers[r]) + ": expected " +
                                std::to_string(n) + " entries, found " +
                                std::to_string(lines[r].size()),
                            line_numbers[r]);
    }
    for (long v : lines[r]) {
      if (v < 0 || v >= n) {
        throw TableParseError("line " + std::to_string(line_numbers[r]) + ": entry " +
                                  std::to_string(v) + " out of range 0.." + std::to_string(n - 1),
                              line_numbers[r]);
      }
      cells.push_back(static_cast<Element>(v));
    }
  }
  return Magma(static_cast<int>(n), std::move(cells));
}

std::string format_table(const Magma& m) {
  std::ostringstream out;
  out << m.order() << '\n';
  for (int a = 0; a < m.order(); ++a) {
    for (int b = 0; b < m.order(); ++b) out << (b ? " " : "") << m.at(a, b);
    out << '\n';
  }
  return out.str();
}

std::string to_string(NeutralSide s) {
  switch (s) {
    case NeutralSide::left: return "left";
    case NeutralSide::right: return "right";
    case NeutralSide::two_sided: return "two-sided";
  }
  return {};
}

std::string to_string(InverseSide s) {
  switch (s) {
    case InverseSide::none: return "none";
    case InverseSide::left: return "left";
    case InverseSide::right: return "right";
    case InverseSide::two_sided: return "two-sided";
  }
  return {};
}

std::string to_string(const StructureSpec& s) {
  return "{neutral " + to_string(s.neutral) + ", inverses " + to_string(s.inverses) + "}";
}

NeutralSide parse_neutral_side(std::string_view s) {
  if (s == "left") return NeutralSide::left;
  if (s == "right") return NeutralSide::right;
  if (s == "two-sided") return NeutralSide::two_sided;
  throw std::invalid_argument("unknown neutral side '" + std::string(s) + "'");
}

InverseSide parse_inverse_side(std::string_view s) {
  if (s == "none") return InverseSide::none;
  if (s == "left") return InverseSide::left;
  if (s == "right") return InverseSide::right;
  if (s == "two-sided") return InverseSide::two_sided;
  throw std::invalid_argument("unknown inverse side '" + std::string(s) + "'");
}

StructureSpec dual_spec(const StructureSpec& s) {
  StructureSpec d = s;
  if (s.neutral == NeutralSide::left) d.neutral = NeutralSide::right;
  if (s.neutral == NeutralSide::right) d.neutral = NeutralSide::left;
  if (s.inverses == InverseSide::left) d.inverses = InverseSide::right;
  if (s.inverses == InverseSide::right) d.inverses = InverseSide::left;
  return d;
}

std::vector<StructureSpec> all_structure_specs() {
  std::vector<StructureSpec> out;
  for (auto n : {NeutralSide::left, NeutralSide::right, NeutralSide::two_sided}) {
    for (auto i : {InverseSide::none, InverseSide::left, InverseSide::right, InverseSide::two_sided}) {
      out.push_back({n, i});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool is_permutation_of_range(const std::vector<Element>& values, int n) {
  std::vector<bool> seen(n, false);
  for (Element v : values) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

bool rows_bijective(const Magma& m) {
  const int n = m.order();
  for (int a = 0; a < n; ++a) {
    std::vector<Element> r(m.row(a).begin(), m.row(a).end());
    if (!is_permutation_of_range(r, n)) return false;
  }
  return true;
}

bool columns_bijective(const Magma& m) {
  const int n = m.order();
  for (int b = 0; b < n; ++b) {
    std::vector<Element> c(n);
    for (int a = 0; a < n; ++a) c[a] = m.at(a, b);
    if (!is_permutation_of_range(c, n)) return false;
  }
  return true;
}

bool is_left_neutral(const Magma& m, Element e) {
  for (int x = 0; x < m.order(); ++x)
    if (m.at(e, x) != x) return false;
  return true;
}

bool is_right_neutral(const Magma& m, Element e) {
  for (int x = 0; x < m.order(); ++x)
    if (m.at(x, e) != x) return false;
  return true;
}

std::optional<Element> smallest_lambda(const Magma& m, Element x) {
  const int n = m.order();
  for (int c = 0; c < n; ++c) {
    bool ok = true;
    for (int y = 0; y < n && ok; ++y) ok = m.at(c, m.at(x, y)) == y;
    if (ok) return c;
  }
  return std::nullopt;
}

std::optional<Element> smallest_rho(const Magma& m, Element x) {
  const int n = m.order();
  for (int c = 0; c < n; ++c) {
    bool ok = true;
    for (int y = 0; y < n && ok; ++y) ok = m.at(m.at(y, x), c) == y;
    if (ok) return c;
  }
  return std::nullopt;
}

template <class Pick>
std::optional<std::vector<Element>> total_map(int n, Pick pick) {
  std::vector<Element> out(n);
  for (int x = 0; x < n; ++x) {
    auto v = pick(x);
    if (!v) return std::nullopt;
    out[x] = *v;
  }
  return out;
}

std::optional<std::vector<Element>> two_sided_inverses(const Magma& m, Element e) {
  return total_map(m.order(), [&](int x) -> std::optional<Element> {
    for (int y = 0; y < m.order(); ++y)
      if (m.at(x, y) == e && m.at(y, x) == e) return y;
    return std::nullopt;
  });
}

}  // namespace

bool is_latin(const Magma& m) { return rows_bijective(m) && columns_bijective(m); }

bool is_associative(const Magma& m) {
  const int n = m.order();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (m.at(x, m.at(y, z)) != m.at(m.at(x, y), z)) return false;
  return true;
}

bool is_loop(const Magma& m) {
  if (!is_latin(m)) return false;
  for (int e = 0; e < m.order(); ++e)
    if (is_left_neutral(m, e) && is_right_neutral(m, e)) return true;
  return false;
}

bool is_group(const Magma& m) { return is_loop(m) && is_associative(m); }

PropertyReport analyze(const Magma& m) {
  const int n = m.order();
  PropertyReport r;
  for (int e = 0; e < n; ++e) {
    const bool left = is_left_neutral(m, e);
    const bool right = is_right_neutral(m, e);
    if (left) r.left_neutrals.push_back(e);
    if (right) r.right_neutrals.push_back(e);
    if (left && right && !r.two_sided_neutral) r.two_sided_neutral = e;
  }
  if (r.two_sided_neutral) {
    r.reference_neutral = r.two_sided_neutral;
  } else if (!r.left_neutrals.empty() || !r.right_neutrals.empty()) {
    // a left and a right neutral would coincide, so at most one list is nonempty
    r.reference_neutral = r.left_neutrals.empty() ? r.right_neutrals.front() : r.left_neutrals.front();
  }
  r.left_inverse_witnesses.assign(n, {});
  r.right_inverse_witnesses.assign(n, {});
  r.two_sided_inverse_witnesses.assign(n, {});
  if (r.reference_neutral) {
    const Element e = *r.reference_neutral;
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        const bool l = m.at(y, x) == e;
        const bool rr = m.at(x, y) == e;
        if (l) r.left_inverse_witnesses[x].push_back(y);
        if (rr) r.right_inverse_witnesses[x].push_back(y);
        if (l && rr) r.two_sided_inverse_witnesses[x].push_back(y);
      }
    }
    r.inverse_map = two_sided_inverses(m, e);
    if (r.two_sided_neutral) r.inverse_map_two_sided = r.inverse_map;
  }
  r.lip_map = total_map(n, [&](int x) { return smallest_lambda(m, x); });
  r.rip_map = total_map(n, [&](int x) { return smallest_rho(m, x); });
  r.left_translations_bijective = rows_bijective(m);
  r.right_translations_bijective = columns_bijective(m);
  r.is_latin = r.left_translations_bijective && r.right_translations_bijective;
  r.is_loop = r.is_latin && r.two_sided_neutral.has_value();
  r.is_associative = is_associative(m);
  r.is_group = r.is_loop && r.is_associative;
  return r;
}

std::optional<StructureWitness> satisfies_structure(const Magma& m, const StructureSpec& spec) {
  const int n = m.order();
  for (int e = 0; e < n; ++e) {
    const bool left = is_left_neutral(m, e);
    const bool right = is_right_neutral(m, e);
    const bool qualifies = spec.neutral == NeutralSide::left    ? left
                           : spec.neutral == NeutralSide::right ? right
                                                                : left && right;
    if (!qualifies) continue;
    StructureWitness w{e, {}};
    if (spec.inverses == InverseSide::none) return w;
    auto inv = total_map(n, [&](int x) -> std::optional<Element> {
      for (int y = 0; y < n; ++y) {
        const bool l = m.at(y, x) == e;
        const bool r = m.at(x, y) == e;
        if ((spec.inverses == InverseSide::left && l) || (spec.inverses == InverseSide::right && r) ||
            (spec.inverses == InverseSide::two_sided && l && r)) {
          return y;
        }
      }
      return std::nullopt;
    });
    if (inv) {
      w.inverses = std::move(*inv);
      return w;
    }
  }
  return std::nullopt;
}

Magma opposite(const Magma& m) {
  const int n = m.order();
  std::vector<Element> cells(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) cells[a * n + b] = m.at(b, a);
  return Magma(n, std::move(cells));
}

Magma relabel(const Magma& m, std::span<const Element> perm) {
  const int n = m.order();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation size mismatch");
  std::vector<Element> cells(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) cells[perm[a] * n + perm[b]] = perm[m.at(a, b)];
  return Magma(n, std::move(cells));
}

Magma canonical_form(const Magma& m) {
  const int n = m.order();
  if (n > kMaxCanonicalOrder) {
    throw std::invalid_argument("canonical_form supports order <= " +
                                std::to_string(kMaxCanonicalOrder));
  }
  std::optional<Element> neutral;
  for (int e = 0; e < n && !neutral; ++e)
    if (is_left_neutral(m, e) && is_right_neutral(m, e)) neutral = e;

  // perm[old] = new; inverse[new] = old. Iterate over inverse so that the
  // candidate table can be compared cell by cell in row-major order.
  std::vector<Element> inverse(n);
  std::iota(inverse.begin(), inverse.end(), 0);
  std::vector<Element> perm(n);
  std::vector<Element> best;
  std::vector<Element> candidate(m.cells().size());
  do {
    if (neutral && inverse[0] != *neutral) continue;
    for (int k = 0; k < n; ++k) perm[inverse[k]] = k;
    // early-exit lexicographic comparison
    int cmp = best.empty() ? -1 : 0;
    for (int a = 0; a < n && cmp == 0; ++a) {
      for (int b = 0; b < n; ++b) {
        const Element v = perm[m.at(inverse[a], inverse[b])];
        candidate[a * n + b] = v;
        if (v != best[a * n + b]) {
          cmp = v < best[a * n + b] ? -1 : 1;
          break;
        }
      }
    }
    if (cmp < 0) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) candidate[a * n + b] = perm[m.at(inverse[a], inverse[b])];
      best = candidate;
    }
  } while (std::next_permutation(inverse.begin(), inverse.end()));
  return Magma(n, std::move(best));
}

}  // namespace bolmoufang
