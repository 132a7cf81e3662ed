#include <algorithm>
#include <set>

#include "bolmoufang/finder.hpp"
#include "bolmoufang/lab.hpp"
#include "doctest.h"
#include "oracle.hpp"
#include "suites.hpp"

using namespace bolmoufang;
using namespace std::chrono_literals;

using suites::make_problem;

TEST_CASE("search and enumerate agree with the naive oracle through order 3") {
  const auto t = suites::finder_oracle(3);
  CHECK(t.problems == 12 * 6 * 3 * 3);
  CHECK(t.bad == 0);
}

TEST_CASE("search examples") {
  const StructureSpec two{NeutralSide::two_sided, InverseSide::two_sided};
  const auto m3m4 = search(make_problem(3, 3, two, {"D23", "D34"}, Target::non_loop));
  REQUIRE(m3m4.status == SearchStatus::witness);
  CHECK(verify_witness(make_problem(3, 3, two, {"D23", "D34"}, Target::non_loop), *m3m4.witness));
  // The least witness is not the printed table, but the printed table is
  // one of the models found.
  CHECK(*m3m4.witness == Magma{{0, 1, 2}, {1, 0, 0}, {2, 0, 0}});
  const auto all = enumerate_models(make_problem(3, 3, two, {"D23", "D34"}, Target::non_loop), true);
  CHECK(std::ranges::count(all, canonical_form(lab::m3m4_table())) == 1);

  const auto lb = search(make_problem(1, 5, two, {"B14"}, Target::non_loop));
  CHECK(lb.status == SearchStatus::exhausted);
  CHECK(lb.nodes_explored > 0);

  const auto right = search(
      make_problem(3, 3, {NeutralSide::right, InverseSide::two_sided}, {"LB"}, Target::non_loop));
  REQUIRE(right.status == SearchStatus::witness);
  CHECK(*right.witness == lab::right_neutral_lb_table());
  REQUIRE(right.structure.has_value());
  CHECK(right.structure->neutral == 0);

  for (const auto& spec : all_structure_specs()) {
    const auto o = search(make_problem(1, 1, spec, {}, Target::any_model));
    REQUIRE(o.status == SearchStatus::witness);
    CHECK(*o.witness == Magma(1, {0}));
  }

  CHECK(search(make_problem(2, 2, two, {"ASSOC"}, Target::non_group)).status ==
        SearchStatus::exhausted);
  CHECK(search(make_problem(1, 5, two, {"C"}, Target::non_loop)).status == SearchStatus::exhausted);
}

TEST_CASE("every witness passes re-verification") {
  const StructureSpec two{NeutralSide::two_sided, InverseSide::two_sided};
  for (const auto& id : enumerate_bm()) {
    const auto p = make_problem(1, 4, two, {id.tag}, Target::non_loop);
    const auto o = search(p);
    if (!o.witness) continue;
    CAPTURE(id.tag);
    CHECK(verify_witness(p, *o.witness));
    CHECK(oracle::bm_holds(id.tag, {o.witness->order(), o.witness->cells()}));
    CHECK_FALSE(analyze(*o.witness).is_loop);
  }
  const auto p = make_problem(3, 3, two, {"D23"}, Target::non_loop);
  CHECK_FALSE(verify_witness(p, Magma{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}));  // a group
  CHECK_FALSE(verify_witness(p, lab::hall_table()));
}

TEST_CASE("enumeration counts") {
  const StructureSpec two{NeutralSide::two_sided, InverseSide::two_sided};
  CHECK(enumerate_models(make_problem(2, 2, two, {"ASSOC"}, Target::any_model), true).size() == 1);
  CHECK(enumerate_models(make_problem(1, 1, two, {}, Target::any_model), false).size() == 1);

  const auto groups4 = enumerate_models(
      make_problem(4, 4, {NeutralSide::two_sided, InverseSide::none}, {"ASSOC"}, Target::any_model),
      true);
  std::size_t latin = 0;
  for (const auto& m : groups4) latin += is_latin(m) ? 1 : 0;
  CHECK(latin == 2);

  // Up to isomorphism means distinct canonical forms covering every model.
  const auto p = make_problem(3, 3, {NeutralSide::right, InverseSide::none}, {"B14"}, Target::any_model);
  std::set<Magma> all_forms;
  for (const auto& m : enumerate_models(p, false)) all_forms.insert(canonical_form(m));
  std::set<Magma> iso_forms;
  const auto iso = enumerate_models(p, true);
  for (const auto& m : iso) iso_forms.insert(canonical_form(m));
  CHECK(iso.size() == iso_forms.size());
  CHECK(iso_forms == all_forms);

  std::size_t seen = 0;
  enumerate_models(make_problem(1, 3, two, {}, Target::any_model), false, [&](const Magma&) {
    return ++seen < 5;
  });
  CHECK(seen == 5);
}

TEST_CASE("duality transport through order 3") {
  long bad = 0;
  for (const auto& id : enumerate_bm()) {
    for (const auto& spec : all_structure_specs()) {
      SearchProblem p;
      p.min_order = 1;
      p.max_order = 3;
      p.spec = spec;
      p.identities = {id};
      p.target = Target::non_loop;
      SearchProblem d = p;
      d.spec = dual_spec(spec);
      d.identities = {dual_identity(id)};
      const auto a = search(p);
      const auto b = search(d);
      if (a.status != b.status) ++bad;
      if (a.witness && !verify_witness(d, opposite(*a.witness))) ++bad;
      if (b.witness && !verify_witness(p, opposite(*b.witness))) ++bad;
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("parallel runs agree with sequential runs") {
  const StructureSpec two{NeutralSide::two_sided, InverseSide::two_sided};
  const std::vector<std::pair<std::string, int>> cases = {
      {"D12", 6}, {"C35", 6}, {"E45", 6}, {"B14", 5}, {"A24", 5}, {"D23", 4}};
  for (const auto& [code, max_order] : cases) {
    CAPTURE(code);
    auto p = make_problem(1, max_order, two, {code}, Target::non_loop);
    const auto seq = search(p);
    for (int workers : {2, 4}) {
      for (int depth : {1, 3, 5}) {
        p.workers = workers;
        p.split_depth = depth;
        p.deterministic = true;
        const auto par = search(p);
        CHECK(par.status == seq.status);
        CHECK(par.witness == seq.witness);
        p.deterministic = false;
        const auto fast = search(p);
        CHECK(fast.status == seq.status);
        if (fast.witness) {
          CHECK(fast.witness->order() == seq.witness->order());
          CHECK(verify_witness(p, *fast.witness));
        }
      }
    }
  }
}

TEST_CASE("subtasks partition the search space") {
  const auto p = make_problem(4, 4, {NeutralSide::left, InverseSide::left}, {"B14"}, Target::any_model);
  std::vector<Magma> direct = enumerate_models(p, false);
  const OrderSearch os(p, 4);
  REQUIRE(os.root_consistent());
  for (int depth : {0, 1, 2, 4}) {
    std::vector<Magma> pieces;
    for (const auto& prefix : os.frontier(depth)) {
      const auto r = os.explore(prefix, {}, [&](const Magma& m) {
        pieces.push_back(m);
        return true;
      });
      CHECK(r.status == SubtreeStatus::completed);
    }
    CHECK(pieces == direct);
  }
}

TEST_CASE("budget is a status") {
  SearchProblem p = lab::b25_problem(10);
  p.min_order = 10;
  p.budget = 20ms;
  const auto t0 = Clock::now();
  const auto o = search(p);
  CHECK(o.status == SearchStatus::budget_exceeded);
  CHECK(o.last_order == 10);
  CHECK(Clock::now() - t0 < 2s);

  const auto r = verify_absence({resolve_identity("C15")},
                                {NeutralSide::two_sided, InverseSide::two_sided}, 5, std::nullopt);
  CHECK(r.status == SearchStatus::exhausted);
  REQUIRE(r.orders.size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(r.orders[k].order == k + 1);
    CHECK(r.orders[k].status == SearchStatus::exhausted);
  }
}

TEST_CASE("configuration errors") {
  const StructureSpec two{};
  CHECK_THROWS_AS(search(make_problem(1, 3, two, {}, Target::non_loop)), ConfigError);
  CHECK_THROWS_AS(search(make_problem(0, 3, two, {"B14"}, Target::non_loop)), ConfigError);
  CHECK_THROWS_AS(search(make_problem(3, 2, two, {"B14"}, Target::non_loop)), ConfigError);
  auto p = make_problem(1, 3, two, {"B14"}, Target::non_loop);
  p.workers = -1;
  CHECK_THROWS_AS(search(p), ConfigError);
  p = make_problem(1, 3, two, {}, Target::any_model);
  const Term x = Term::variable(Var::x);
  p.identities.push_back({Term::inverse(x) * x, Term::one(), ""});
  CHECK_THROWS_AS(search(p), ConfigError);
  CHECK(parse_target("any") == Target::any_model);
  CHECK(parse_target("non-group") == Target::non_group);
  CHECK_THROWS(parse_target("loop"));
}
