// bolmoufang: command-line front end for tables, identities and searches.
//
// Exit statuses:
//   check    0 all identities (and the structure, if given) hold, 1 otherwise
//   search   0 witness, 1 exhausted, 2 budget exceeded
//   verify   0 exhausted, 1 counterexample, 2 budget exceeded
//   lab      0 all claims pass, 1 some claim fails, 2 a mandatory search ran out of budget
//   b25      0 exhausted, 1 counterexample, 2 budget exceeded
//   any      3 unreadable input or bad arguments

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bolmoufang/finder.hpp"
#include "bolmoufang/lab.hpp"
#include "bolmoufang/magma.hpp"
#include "bolmoufang/term.hpp"

namespace bm = bolmoufang;

namespace {

constexpr int kInputError = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::vector<bm::Identity> resolve_all(const std::vector<std::string>& names) {
  std::vector<bm::Identity> out;
  for (const auto& n : names) out.push_back(bm::resolve_identity(n));
  return out;
}

// "5" or "1..5"
std::pair<int, int> parse_order_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw InputError("bad order range '" + s + "'");
  }
}

std::optional<std::chrono::milliseconds> budget_of(double seconds) {
  if (seconds <= 0) return std::nullopt;
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
}

long long millis(bm::Clock::duration d) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string set_string(const std::vector<bm::Element>& v) {
  std::string s = "{";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s + "}";
}

std::string map_string(const std::optional<std::vector<bm::Element>>& v) {
  if (!v) return "absent";
  std::string s;
  for (std::size_t k = 0; k < v->size(); ++k) {
    s += (k ? " " : "") + std::to_string(k) + "->" + std::to_string((*v)[k]);
  }
  return s;
}

std::vector<std::pair<std::string, std::string>> report_fields(const bm::PropertyReport& r) {
  auto opt = [](const std::optional<bm::Element>& e) {
    return e ? std::to_string(*e) : std::string("none");
  };
  return {
      {"left_neutrals", set_string(r.left_neutrals)},
      {"right_neutrals", set_string(r.right_neutrals)},
      {"two_sided_neutral", opt(r.two_sided_neutral)},
      {"reference_neutral", opt(r.reference_neutral)},
      {"inverse_map_two_sided", map_string(r.inverse_map_two_sided)},
      {"inverse_map", map_string(r.inverse_map)},
      {"lip_map", map_string(r.lip_map)},
      {"rip_map", map_string(r.rip_map)},
      {"left_translations_bijective", yes_no(r.left_translations_bijective)},
      {"right_translations_bijective", yes_no(r.right_translations_bijective)},
      {"is_latin", yes_no(r.is_latin)},
      {"is_loop", yes_no(r.is_loop)},
      {"is_associative", yes_no(r.is_associative)},
      {"is_group", yes_no(r.is_group)},
  };
}

std::string identity_label(const bm::Identity& id) { return id.tag.empty() ? bm::render(id) : id.tag; }

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string file;
  std::vector<std::string> identities;
  std::string neutral;
  std::string inverses = "none";
  bool machine = false;
};

int cmd_check(const CheckArgs& a) {
  const bm::Magma m = bm::parse_table(read_file(a.file));
  const bm::PropertyReport r = bm::analyze(m);
  const auto ids = resolve_all(a.identities);
  std::optional<bm::StructureSpec> spec;
  if (!a.neutral.empty()) {
    spec = bm::StructureSpec{bm::parse_neutral_side(a.neutral), bm::parse_inverse_side(a.inverses)};
  }
  bool ok = true;
  const bm::Interpretation interp = bm::default_interpretation(m);
  if (a.machine) {
    std::cout << bm::lab::records_header();
    std::cout << "table\torder=" << m.order() << "\ttable=" << bm::lab::inline_table(m) << '\n';
    for (const auto& [k, v] : report_fields(r)) std::cout << "property\t" << k << '=' << v << '\n';
  }
  for (const auto& id : ids) {
    const auto bad = bm::falsifying_assignment(id, m, interp);
    ok = ok && !bad;
    std::string where;
    if (bad) {
      const int vars = bm::variable_count(id);
      for (int v = 0; v < vars; ++v) {
        where += std::string(v ? "," : "") + bm::var_name(static_cast<bm::Var>(v)) + "=" +
                 std::to_string((*bad)[v]);
      }
    }
    if (a.machine) {
      std::cout << "identity\ttag=" << identity_label(id) << "\tresult=" << (bad ? "fails" : "holds");
      if (bad) std::cout << "\tassignment=" << where;
      std::cout << '\n';
    } else {
      std::cout << identity_label(id) << ": " << (bad ? "fails at " + where : std::string("holds"))
                << "; loop: " << yes_no(r.is_loop)
                << "; two-sided inverses: " << yes_no(r.inverse_map_two_sided.has_value()) << '\n';
    }
  }
  if (spec) {
    const auto w = bm::satisfies_structure(m, *spec);
    ok = ok && w.has_value();
    std::string detail = "none";
    if (w) {
      detail = "neutral " + std::to_string(w->neutral);
      if (!w->inverses.empty()) detail += ", inverses " + map_string(w->inverses);
    }
    if (a.machine) {
      std::cout << "structure\tspec=" << bm::to_string(spec->neutral) << '/'
                << bm::to_string(spec->inverses) << "\tresult=" << (w ? "satisfied" : "violated")
                << "\twitness=" << detail << '\n';
    } else {
      std::cout << "structure " << bm::to_string(*spec) << ": " << detail << '\n';
    }
  }
  if (!a.machine) {
    std::cout << "order: " << m.order() << '\n';
    for (const auto& [k, v] : report_fields(r)) std::cout << k << ": " << v << '\n';
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct ProblemArgs {
  std::string order = "1";
  std::string neutral = "two-sided";
  std::string inverses = "two-sided";
  std::vector<std::string> identities;
  std::string target = "non-loop";
  double budget = 0;
  bool nondeterministic = false;
  int workers = 0;
  int split_depth = 3;
  bool machine = false;
  std::string out;
};

void add_problem_options(CLI::App* app, ProblemArgs& a, bool with_order) {
  if (with_order) app->add_option("--order", a.order, "Order N or range A..B")->required();
  app->add_option("--neutral", a.neutral, "left | right | two-sided")->capture_default_str();
  app->add_option("--inverses", a.inverses, "none | left | right | two-sided")->capture_default_str();
  app->add_option("--identity,-i", a.identities, "Named law (LB, M1, ...) or Xij code");
  app->add_option("--budget", a.budget, "Wall-clock budget in seconds (0 = none)");
  app->add_option("--workers", a.workers, "Worker threads (0 = all cores)")->capture_default_str();
  app->add_option("--split-depth", a.split_depth, "Decision levels per subtask")->capture_default_str();
  app->add_flag("--machine", a.machine, "Line-oriented record output");
}

bm::SearchProblem build_problem(const ProblemArgs& a) {
  bm::SearchProblem p;
  std::tie(p.min_order, p.max_order) = parse_order_range(a.order);
  p.spec = {bm::parse_neutral_side(a.neutral), bm::parse_inverse_side(a.inverses)};
  p.identities = resolve_all(a.identities);
  p.target = bm::parse_target(a.target);
  p.deterministic = !a.nondeterministic;
  p.budget = budget_of(a.budget);
  p.workers = a.workers;
  p.split_depth = a.split_depth;
  return p;
}

int cmd_search(const ProblemArgs& a) {
  const bm::SearchProblem p = build_problem(a);
  const bm::SearchOutcome o = bm::search(p);
  if (a.machine) {
    std::cout << bm::lab::records_header();
    std::cout << "outcome\tstatus=" << bm::to_string(o.status) << "\torder=" << o.last_order
              << "\tnodes=" << o.nodes_explored << "\telapsed_ms=" << millis(o.elapsed)
              << "\tsubtasks_done=" << o.subtasks_done << "\tsubtasks_total=" << o.subtasks_total;
    if (o.witness) std::cout << "\twitness=" << bm::lab::inline_table(*o.witness);
    std::cout << '\n';
  } else {
    std::cout << "# " << bm::to_string(o.status) << " at order " << o.last_order << ", "
              << o.nodes_explored << " nodes, " << millis(o.elapsed) << " ms";
    if (o.status == bm::SearchStatus::budget_exceeded) {
      std::cout << ", " << o.subtasks_done << "/" << o.subtasks_total << " subtasks finished";
    }
    std::cout << '\n';
    if (o.witness) std::cout << bm::format_table(*o.witness);
  }
  if (o.witness && !a.out.empty()) write_file(a.out, bm::format_table(*o.witness));
  switch (o.status) {
    case bm::SearchStatus::witness: return 0;
    case bm::SearchStatus::exhausted: return 1;
    case bm::SearchStatus::budget_exceeded: return 2;
  }
  return 1;
}

struct EnumerateArgs {
  ProblemArgs problem;
  bool iso = false;
  bool latin_only = false;
  bool count_only = false;
};

int cmd_enumerate(const EnumerateArgs& a) {
  bm::SearchProblem p = build_problem(a.problem);
  std::size_t count = 0;
  bm::enumerate_models(p, a.iso, [&](const bm::Magma& m) {
    if (a.latin_only && !bm::is_latin(m)) return true;
    ++count;
    if (!a.count_only) std::cout << (count > 1 ? "\n" : "") << bm::format_table(m);
    return true;
  });
  if (a.count_only) std::cout << count << '\n';
  return 0;
}

struct VerifyArgs {
  ProblemArgs problem;
  int max_order = 5;
};

int cmd_verify(const VerifyArgs& a) {
  const auto ids = resolve_all(a.problem.identities);
  const bm::StructureSpec spec{bm::parse_neutral_side(a.problem.neutral),
                               bm::parse_inverse_side(a.problem.inverses)};
  bm::SearchProblem check;
  check.identities = ids;
  check.target = bm::Target::non_loop;
  check.spec = spec;
  bm::validate(check);
  const auto report =
      bm::verify_absence(ids, spec, a.max_order, budget_of(a.problem.budget), a.problem.workers);
  if (a.problem.machine) std::cout << bm::lab::records_header();
  for (const auto& o : report.orders) {
    if (a.problem.machine) {
      std::cout << "order\torder=" << o.order << "\tstatus=" << bm::to_string(o.status)
                << "\tnodes=" << o.nodes << "\telapsed_ms=" << millis(o.elapsed) << '\n';
    } else {
      std::cout << "order " << o.order << ": " << bm::to_string(o.status) << " (" << o.nodes
                << " nodes, " << millis(o.elapsed) << " ms)\n";
    }
  }
  if (report.witness) std::cout << bm::format_table(*report.witness);
  switch (report.status) {
    case bm::SearchStatus::exhausted: return 0;
    case bm::SearchStatus::witness: return 1;
    case bm::SearchStatus::budget_exceeded: return 2;
  }
  return 1;
}

// ---------------------------------------------------------------------------

struct LabArgs {
  std::string suite = "all";
  int max_order = 0;
  double budget = 0;
  std::string out;
  int workers = 0;
};

int cmd_lab(const LabArgs& a) {
  if (a.suite != "all" && a.suite != "fixtures" && a.suite != "classification" &&
      a.suite != "onesided" && a.suite != "b25") {
    throw InputError("unknown suite '" + a.suite + "'");
  }
  const auto budget = budget_of(a.budget);
  std::string records = bm::lab::records_header();
  bool all_pass = true;
  bool budget_hit = false;
  auto report_claims = [&](const std::vector<bm::lab::ClaimResult>& claims) {
    for (const auto& c : claims) {
      records += bm::lab::format_record(c);
      all_pass = all_pass && c.pass;
      budget_hit = budget_hit || c.budget_exceeded;
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.claim_id << ": " << c.observed;
      if (!c.pass) std::cout << " (expected: " << c.expectation << ")";
      std::cout << '\n';
    }
  };
  const bool all = a.suite == "all";
  if (all || a.suite == "fixtures") report_claims(bm::lab::reproduce_fixtures());
  if (all || a.suite == "classification") {
    const int max_order = a.max_order > 0 ? a.max_order : 6;
    for (const auto& row : bm::lab::run_classification(max_order, budget, a.workers)) {
      records += bm::lab::format_record(row, max_order);
      const bool ok = bm::lab::row_consistent(row, max_order);
      all_pass = all_pass && ok;
      if (row.observed.kind == bm::lab::Observation::Kind::budget &&
          row.paper_answer != bm::lab::PaperAnswer::unlisted) {
        budget_hit = budget_hit || !ok;
      }
      std::cout << (ok ? "PASS " : "FAIL ") << bm::to_string(row.code) << " paper="
                << bm::lab::to_string(row.paper_answer) << " observed="
                << bm::lab::to_string(row.observed) << '\n';
    }
  }
  if (all || a.suite == "onesided") {
    report_claims(bm::lab::run_onesided_suite(a.max_order > 0 ? a.max_order : 5, budget));
  }
  if (all || a.suite == "b25") {
    bm::lab::CampaignOptions opt;
    opt.max_order = a.max_order > 0 ? a.max_order : 6;
    opt.budget = budget;
    opt.workers = a.workers;
    report_claims({bm::lab::b25_campaign(opt).claim});
  }
  if (!a.out.empty()) {
    write_file(a.out, records);
  } else {
    std::cout << records;
  }
  if (all_pass) return 0;
  return budget_hit ? 2 : 1;
}

struct B25Args {
  int max_order = 6;
  double budget = 0;
  std::string checkpoint;
  std::string resume;
  int workers = 0;
  int split_depth = 3;
  int every = 64;
};

int cmd_b25(const B25Args& a) {
  bm::lab::CampaignOptions opt;
  opt.max_order = a.max_order;
  opt.budget = budget_of(a.budget);
  opt.workers = a.workers;
  opt.split_depth = a.split_depth;
  opt.checkpoint_every = std::max(1, a.every);
  if (!a.resume.empty()) opt.resume = bm::lab::parse_checkpoint(read_file(a.resume));
  if (!a.checkpoint.empty()) {
    opt.on_checkpoint = [&](const bm::lab::Checkpoint& c) {
      // write-then-rename keeps the previous checkpoint intact on a crash
      const std::string tmp = a.checkpoint + ".tmp";
      write_file(tmp, bm::lab::format_checkpoint(c));
      std::rename(tmp.c_str(), a.checkpoint.c_str());
    };
  }
  const auto result = bm::lab::b25_campaign(opt);
  std::cout << (result.claim.pass ? "PASS " : "FAIL ") << result.claim.claim_id << ": "
            << result.claim.observed << '\n';
  std::cout << "orders searched this run:";
  for (int o : result.orders_searched) std::cout << ' ' << o;
  std::cout << '\n';
  for (const auto& [order, nodes] : result.checkpoint.completed_orders) {
    std::cout << "order " << order << " exhausted (" << nodes << " nodes)\n";
  }
  if (result.counterexample) std::cout << bm::format_table(*result.counterexample);
  switch (result.status) {
    case bm::SearchStatus::exhausted: return 0;
    case bm::SearchStatus::witness: return 1;
    case bm::SearchStatus::budget_exceeded: return 2;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley tables, Bol-Moufang identities and finite model search"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Report properties of a Cayley table");
  c->add_option("table", check.file, "Table file")->required();
  c->add_option("--identity,-i", check.identities, "Named law or Xij code");
  c->add_option("--neutral", check.neutral, "Also check structure: left | right | two-sided");
  c->add_option("--inverses", check.inverses, "none | left | right | two-sided");
  c->add_flag("--machine", check.machine, "Line-oriented record output");

  ProblemArgs search_args;
  auto* s = app.add_subcommand("search", "Search for a model of the given constraints");
  add_problem_options(s, search_args, true);
  s->add_option("--target", search_args.target, "non-loop | non-group | any-model")->capture_default_str();
  s->add_flag("--nondeterministic", search_args.nondeterministic,
              "First-found witness instead of the lexicographically least");
  s->add_option("--out", search_args.out, "Write the witness table to a file");

  EnumerateArgs enum_args;
  enum_args.problem.target = "any-model";
  enum_args.problem.inverses = "none";
  enum_args.problem.workers = 1;
  auto* e = app.add_subcommand("enumerate", "List all models at the given order(s)");
  add_problem_options(e, enum_args.problem, true);
  e->add_option("--target", enum_args.problem.target, "non-loop | non-group | any-model")->capture_default_str();
  e->add_flag("--iso", enum_args.iso, "One model per isomorphism class");
  e->add_flag("--latin-only", enum_args.latin_only, "Keep only Latin tables");
  e->add_flag("--count", enum_args.count_only, "Print only the number of models");

  VerifyArgs verify_args;
  auto* v = app.add_subcommand("verify", "Exhaust orders 1..N for a non-loop model");
  add_problem_options(v, verify_args.problem, false);
  v->add_option("--max-order", verify_args.max_order, "Largest order")->capture_default_str();

  LabArgs lab_args;
  auto* l = app.add_subcommand("lab", "Reproduce the recorded claims");
  l->add_option("suite", lab_args.suite, "fixtures | classification | onesided | b25 | all")
      ->capture_default_str();
  l->add_option("--max-order", lab_args.max_order, "Largest order (suite default if 0)");
  l->add_option("--budget", lab_args.budget, "Budget per search in seconds (0 = none)");
  l->add_option("--out", lab_args.out, "Record file (default: stdout)");
  l->add_option("--workers", lab_args.workers, "Worker threads (0 = all cores)")->capture_default_str();

  B25Args b25_args;
  auto* b = app.add_subcommand("b25", "Resumable search for a non-group B25 magma with inverses");
  b->add_option("--max-order", b25_args.max_order, "Largest order")->capture_default_str();
  b->add_option("--budget", b25_args.budget, "Wall-clock budget in seconds (0 = none)");
  b->add_option("--checkpoint", b25_args.checkpoint, "Checkpoint file to write");
  b->add_option("--resume", b25_args.resume, "Checkpoint file to resume from");
  b->add_option("--workers", b25_args.workers, "Worker threads (0 = all cores)")->capture_default_str();
  b->add_option("--split-depth", b25_args.split_depth, "Decision levels per subtask")->capture_default_str();
  b->add_option("--checkpoint-every", b25_args.every, "Subtasks between checkpoints")->capture_default_str();

  std::string code;
  auto* d = app.add_subcommand("decode", "Render the identity of an Xij code or named law");
  d->add_option("code", code, "Code such as C25")->required();
  auto* du = app.add_subcommand("dual", "Dual code of an Xij code");
  du->add_option("code", code, "Code such as C25")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*c) return cmd_check(check);
    if (*s) return cmd_search(search_args);
    if (*e) return cmd_enumerate(enum_args);
    if (*v) return cmd_verify(verify_args);
    if (*l) return cmd_lab(lab_args);
    if (*b) return cmd_b25(b25_args);
    if (*d) {
      std::cout << bm::render(bm::resolve_identity(code)) << '\n';
      return 0;
    }
    if (*du) {
      std::cout << bm::to_string(bm::dual_code(bm::parse_code(code))) << '\n';
      return 0;
    }
  } catch (const bm::ParseError& err) {
    std::cerr << "parse error at position " << err.position() << ": " << err.what() << '\n';
    return kInputError;
  } catch (const bm::TableParseError& err) {
    std::cerr << "table parse error: " << err.what() << '\n';
    return kInputError;
  } catch (const bm::lab::CheckpointError& err) {
    std::cerr << err.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInputError;
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
