#pragma once
// Exhaustive property checks shared by the unit tests and the acceptance
// binary. Each returns the number of violations found.

#include <map>
#include <string>
#include <vector>

#include "bolmoufang/finder.hpp"
#include "bolmoufang/magma.hpp"
#include "bolmoufang/term.hpp"
#include "oracle.hpp"

namespace suites {

using namespace bolmoufang;

inline long codec_violations() {
  long bad = 0;
  const auto all = enumerate_bm();
  if (all.size() != 60) ++bad;
  for (const auto& c : oracle::all_codes()) {
    if (to_string(encode_bm(decode_bm(parse_code(c)))) != c) ++bad;
  }
  return bad;
}

inline long duality_violations() {
  long bad = 0;
  for (const auto& c : oracle::all_codes()) {
    const Identity id = decode_bm(parse_code(c));
    const Identity d = dual_identity(id);
    if (dual_identity(d) != id) ++bad;
    if (to_string(encode_bm(d)) != oracle::dual_code(c)) ++bad;
    if (to_string(dual_code(parse_code(c))) != oracle::dual_code(c)) ++bad;
  }
  return bad;
}

inline long mirror_violations(int max_order) {
  const auto ids = enumerate_bm();
  std::vector<Identity> duals;
  for (const auto& id : ids) duals.push_back(dual_identity(id));
  long bad = 0;
  for (int n = 1; n <= max_order; ++n) {
    oracle::for_each_table(n, [&](const oracle::Table& t) {
      const Magma m(t.n, t.t);
      const Magma op = opposite(m);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (holds(ids[k], m, {}) != holds(duals[k], op, {})) ++bad;
      }
    });
  }
  return bad;
}

// Per-table facts for the naive finder oracle.
struct Facts {
  oracle::Table table;
  std::map<std::string, bool> holds;
  bool loop = false, group = false;
  bool normalized[3][4] = {};  // element 0 is the neutral
  bool any[3][4] = {};         // some element is the neutral
};

inline const std::vector<std::string>& oracle_identities() {
  static const std::vector<std::string> ids = {"B14", "C15", "D23", "ASSOC"};
  return ids;
}

inline std::vector<Facts> table_facts(int n) {
  std::vector<Facts> v;
  oracle::for_each_table(n, [&](const oracle::Table& t) {
    Facts f;
    f.table = t;
    for (const auto& id : oracle_identities()) {
      f.holds[id] = id == "ASSOC" ? oracle::assoc_holds(t) : oracle::bm_holds(id, t);
    }
    f.loop = oracle::loop(t);
    f.group = oracle::group(t);
    for (int ns = 0; ns < 3; ++ns)
      for (int is = 0; is < 4; ++is) {
        f.normalized[ns][is] = oracle::structure_at(t, 0, ns, is);
        f.any[ns][is] = oracle::structure_any(t, ns, is);
      }
    v.push_back(std::move(f));
  });
  return v;
}

inline bool oracle_accepts(const Facts& f, const std::vector<std::string>& ids, Target target) {
  for (const auto& id : ids)
    if (!f.holds.at(id)) return false;
  switch (target) {
    case Target::non_loop: return !f.loop;
    case Target::non_group: return !f.group;
    case Target::any_model: return true;
  }
  return false;
}

inline SearchProblem make_problem(int lo, int hi, StructureSpec spec,
                                  const std::vector<std::string>& ids, Target target) {
  SearchProblem p;
  p.min_order = lo;
  p.max_order = hi;
  p.spec = spec;
  for (const auto& s : ids) p.identities.push_back(resolve_identity(s));
  p.target = target;
  return p;
}

struct OracleTally {
  long problems = 0;
  long bad = 0;
};

// For every identity set over {B14, C15, D23, ASSOC}, every structure spec
// and every target: enumerate_models returns exactly the normalized oracle
// models in lexicographic order, search finds a witness iff any model
// exists, and the deterministic witness is the least normalized model.
inline OracleTally finder_oracle(int max_order) {
  const std::vector<std::vector<std::string>> id_sets = {
      {"B14"}, {"C15"}, {"D23"}, {"ASSOC"}, {"B14", "D23"}, {"C15", "ASSOC"}};
  std::vector<std::vector<Facts>> facts(max_order + 1);
  for (int n = 1; n <= max_order; ++n) facts[n] = table_facts(n);
  OracleTally tally;
  for (const auto& spec : all_structure_specs()) {
    const int ns = static_cast<int>(spec.neutral), is = static_cast<int>(spec.inverses);
    for (const auto& ids : id_sets) {
      for (Target target : {Target::non_loop, Target::non_group, Target::any_model}) {
        std::optional<oracle::Table> first;
        for (int n = 1; n <= max_order; ++n) {
          ++tally.problems;
          std::vector<std::vector<int>> expected;
          bool any_model = false;
          for (const auto& f : facts[n]) {
            if (!oracle_accepts(f, ids, target)) continue;
            if (f.normalized[ns][is]) expected.push_back(f.table.t);
            any_model = any_model || f.any[ns][is];
          }
          std::vector<std::vector<int>> got;
          for (const auto& m : enumerate_models(make_problem(n, n, spec, ids, target), false)) {
            got.push_back(m.cells());
          }
          if (got != expected) ++tally.bad;
          if (any_model != !expected.empty()) ++tally.bad;
          const auto single = search(make_problem(n, n, spec, ids, target));
          if ((single.status == SearchStatus::witness) != any_model) ++tally.bad;
          if (single.witness && single.witness->cells() != expected.front()) ++tally.bad;
          if (any_model && !first) first = oracle::Table{n, expected.front()};
        }
        const auto ranged = search(make_problem(1, max_order, spec, ids, target));
        if (first) {
          if (ranged.status != SearchStatus::witness || ranged.witness->order() != first->n ||
              ranged.witness->cells() != first->t) {
            ++tally.bad;
          }
        } else if (ranged.status != SearchStatus::exhausted) {
          ++tally.bad;
        }
      }
    }
  }
  return tally;
}

inline std::vector<Magma> with_two_sided_neutral(int n) {
  SearchProblem p;
  p.min_order = p.max_order = n;
  p.spec = {NeutralSide::two_sided, InverseSide::none};
  p.target = Target::any_model;
  return enumerate_models(p, false);
}

// Through max_order, over tables with a two-sided neutral at 0:
//  - with the left inverse property, the two-sided inverse is unique per
//    element, is an involution, equals x^λ, and left translations are bijective;
//  - with both inverse properties, x^λ = x^ρ and the magma is a loop.
struct LemmaTally {
  long lip_tables = 0;
  long ip_tables = 0;
  long bad = 0;
};

inline LemmaTally inverse_lemmas(int max_order) {
  LemmaTally t;
  for (int n = 1; n <= max_order; ++n) {
    for (const auto& m : with_two_sided_neutral(n)) {
      const PropertyReport r = analyze(m);
      if (r.lip_map) {
        ++t.lip_tables;
        if (!r.inverse_map_two_sided || !r.left_translations_bijective) {
          ++t.bad;
        } else {
          const auto& inv = *r.inverse_map_two_sided;
          for (int a = 0; a < n; ++a) {
            if (r.two_sided_inverse_witnesses[a].size() != 1) ++t.bad;
            if (inv[inv[a]] != a) ++t.bad;
            if (inv[a] != (*r.lip_map)[a]) ++t.bad;
          }
        }
      }
      if (r.lip_map && r.rip_map) {
        ++t.ip_tables;
        if (*r.lip_map != *r.rip_map || !r.is_loop) ++t.bad;
      }
    }
  }
  return t;
}

}  // namespace suites
