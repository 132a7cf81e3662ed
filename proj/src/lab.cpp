#include "bolmoufang/lab.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <cstdio>
#include <sstream>
#include <thread>

namespace bolmoufang::lab {

Magma q1_table() {
  return Magma{{0, 1, 2, 3, 4, 5}, {1, 5, 0, 4, 2, 3}, {2, 4, 5, 0, 3, 1},
               {3, 0, 4, 5, 1, 2}, {4, 2, 3, 1, 5, 0}, {5, 3, 1, 2, 0, 4}};
}

Magma q2_table() {
  return Magma{{0, 1, 2, 3, 4, 5}, {1, 5, 0, 4, 2, 3}, {2, 4, 5, 0, 3, 1},
               {3, 0, 4, 5, 1, 2}, {4, 3, 1, 2, 5, 0}, {5, 2, 3, 1, 0, 4}};
}

Magma m3m4_table() { return Magma{{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}; }

Magma right_neutral_lb_table() { return Magma{{0, 2, 1}, {1, 0, 2}, {2, 1, 0}}; }

Magma hall_table() { return Magma{{0, 0}, {1, 1}}; }

std::vector<Identity> nuclear_square_laws() {
  const Term x = Term::variable(Var::x), y = Term::variable(Var::y), z = Term::variable(Var::z);
  return {
      Identity{(x * x) * (y * z), ((x * x) * y) * z, "LNS"},
      Identity{x * ((y * y) * z), (x * (y * y)) * z, "MNS"},
      Identity{x * (y * (z * z)), (x * y) * (z * z), "RNS"},
  };
}

namespace {

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string holds_word(const Identity& id, const Magma& m) {
  return holds(id, m) ? "holds" : "fails";
}

std::string element_list(const std::vector<Element>& v) {
  std::string out = "{";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
  return out + "}";
}

template <class Observe>
ClaimResult make_claim(std::string id, std::string expectation, Observe observe) {
  const auto start = Clock::now();
  ClaimResult c;
  c.claim_id = std::move(id);
  c.expectation = std::move(expectation);
  c.observed = observe(c);
  c.pass = !c.budget_exceeded && c.observed == c.expectation;
  c.elapsed = Clock::now() - start;
  return c;
}

}  // namespace

std::vector<ClaimResult> reproduce_fixtures() {
  std::vector<ClaimResult> out;
  const Identity la = *named_identity("LA");

  out.push_back(make_claim("Q1-left-alternative-loop-no-inverses",
                           "loop=yes LA=holds two-sided-inverses=no", [&](ClaimResult&) {
                             const Magma m = q1_table();
                             const auto r = analyze(m);
                             return std::string("loop=") + yes_no(r.is_loop) +
                                    " LA=" + holds_word(la, m) + " two-sided-inverses=" +
                                    yes_no(r.inverse_map_two_sided.has_value());
                           }));

  out.push_back(make_claim(
      "Q2-nuclear-square-loop-no-inverses",
      "loop=yes LNS=holds MNS=holds RNS=holds two-sided-inverses=no", [&](ClaimResult&) {
        const Magma m = q2_table();
        const auto r = analyze(m);
        std::string s = std::string("loop=") + yes_no(r.is_loop);
        for (const Identity& id : nuclear_square_laws()) s += " " + id.tag + "=" + holds_word(id, m);
        return s + " two-sided-inverses=" + yes_no(r.inverse_map_two_sided.has_value());
      }));

  out.push_back(make_claim(
      "M3M4-order3-not-loop", "neutral=0 M3=holds M4=holds two-sided-inverses=yes loop=no",
      [&](ClaimResult&) {
        const Magma m = m3m4_table();
        const auto r = analyze(m);
        return "neutral=" + (r.two_sided_neutral ? std::to_string(*r.two_sided_neutral) : "none") +
               " M3=" + holds_word(*named_identity("M3"), m) +
               " M4=" + holds_word(*named_identity("M4"), m) +
               " two-sided-inverses=" + yes_no(r.inverse_map_two_sided.has_value()) +
               " loop=" + yes_no(r.is_loop);
      }));

  out.push_back(make_claim(
      "RightNeutral-LB-order3-not-loop",
      "right-neutrals={0} two-sided-neutral=none inverses-rel-0=yes LB=holds loop=no",
      [&](ClaimResult&) {
        const Magma m = right_neutral_lb_table();
        const auto r = analyze(m);
        const bool inverses = satisfies_structure(m, {NeutralSide::right, InverseSide::two_sided})
                                  .has_value();
        return "right-neutrals=" + element_list(r.right_neutrals) + " two-sided-neutral=" +
               (r.two_sided_neutral ? std::to_string(*r.two_sided_neutral) : "none") +
               " inverses-rel-0=" + yes_no(inverses) + " LB=" +
               holds_word(*named_identity("LB"), m) + " loop=" + yes_no(r.is_loop);
      }));

  out.push_back(make_claim(
      "Hall-xy=x-associative-not-group",
      "associative=yes right-neutrals={0,1} left-neutrals={} left-inverses=yes group=no",
      [&](ClaimResult&) {
        const Magma m = hall_table();
        const auto r = analyze(m);
        const bool inverses =
            satisfies_structure(m, {NeutralSide::right, InverseSide::left}).has_value();
        return std::string("associative=") + yes_no(r.is_associative) +
               " right-neutrals=" + element_list(r.right_neutrals) +
               " left-neutrals=" + element_list(r.left_neutrals) +
               " left-inverses=" + yes_no(inverses) + " group=" + yes_no(r.is_group);
      }));

  return out;
}

// ---------------------------------------------------------------------------
// Classification

std::string to_string(PaperAnswer a) {
  switch (a) {
    case PaperAnswer::yes: return "yes";
    case PaperAnswer::no: return "no";
    case PaperAnswer::open: return "open";
    case PaperAnswer::unlisted: return "unlisted";
  }
  return {};
}

std::string to_string(const Observation& o) {
  switch (o.kind) {
    case Observation::Kind::counterexample: return "counterexample(" + std::to_string(o.order) + ")";
    case Observation::Kind::exhausted: return "exhausted(" + std::to_string(o.order) + ")";
    case Observation::Kind::budget: return "budget(" + std::to_string(o.order) + ")";
  }
  return {};
}

PaperAnswer paper_answer(const BMCode& code) {
  static const std::map<std::string, PaperAnswer> kAnswers = [] {
    std::map<std::string, PaperAnswer> m;
    // associative-law class, answered explicitly
    for (const char* c : {"A24", "A25", "B34", "B35", "E13", "E23", "F14", "F24"})
      m[c] = PaperAnswer::yes;
    for (const char* c : {"A12", "A23", "B12", "B13", "B24", "C13", "C23", "C34", "C35", "D12",
                          "D13", "D14", "D25", "D35", "D45", "E24", "E35", "E45", "F34", "F45"})
      m[c] = PaperAnswer::no;
    // LB, RB, C, M1, M2 yes; M3, M4 no
    for (const char* c : {"B14", "E25", "C15", "B15", "E15"}) m[c] = PaperAnswer::yes;
    for (const char* c : {"D23", "D34"}) m[c] = PaperAnswer::no;
    m["B25"] = PaperAnswer::open;
    m["E14"] = PaperAnswer::open;
    return m;
  }();
  const auto it = kAnswers.find(to_string(code));
  return it == kAnswers.end() ? PaperAnswer::unlisted : it->second;
}

int exhausted_through(const Observation& o) {
  switch (o.kind) {
    case Observation::Kind::counterexample: return o.order - 1;
    case Observation::Kind::exhausted: return o.order;
    case Observation::Kind::budget: return o.order - 1;
  }
  return 0;
}

bool row_consistent(const ClassificationRow& row, int max_order, int min_exhausted) {
  using K = Observation::Kind;
  switch (row.paper_answer) {
    case PaperAnswer::no:
      return row.observed.kind == K::counterexample && row.observed.order <= 6;
    case PaperAnswer::yes:
      return row.observed.kind != K::counterexample &&
             exhausted_through(row.observed) >= std::min(min_exhausted, max_order);
    case PaperAnswer::open:
      return row.observed.kind != K::counterexample;
    case PaperAnswer::unlisted:
      return true;
  }
  return false;
}

namespace {

ClassificationRow classify(const Identity& id, int max_order, Budget budget) {
  const auto start = Clock::now();
  ClassificationRow row;
  row.code = encode_bm(id);
  row.config = StructureSpec{NeutralSide::two_sided, InverseSide::two_sided};
  row.paper_answer = paper_answer(row.code);
  const AbsenceReport report = verify_absence({id}, row.config, max_order, budget);
  for (const OrderReport& o : report.orders) row.nodes += o.nodes;
  const int reached = report.orders.empty() ? 0 : report.orders.back().order;
  switch (report.status) {
    case SearchStatus::witness:
      row.observed = {Observation::Kind::counterexample, reached};
      row.witness = report.witness;
      break;
    case SearchStatus::exhausted:
      row.observed = {Observation::Kind::exhausted, max_order};
      break;
    case SearchStatus::budget_exceeded:
      row.observed = {Observation::Kind::budget, reached};
      break;
  }
  row.elapsed = Clock::now() - start;
  return row;
}

int thread_count(int workers) {
  if (workers > 0) return workers;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

std::vector<ClassificationRow> run_classification(int max_order, Budget budget_per_row,
                                                  int workers) {
  const std::vector<Identity> codes = enumerate_bm();
  std::vector<ClassificationRow> rows(codes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < codes.size(); i = next++) {
      rows[i] = classify(codes[i], max_order, budget_per_row);
    }
  };
  const int threads = thread_count(workers);
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::vector<ClaimResult> run_onesided_suite(int max_order, Budget budget_per_claim) {
  std::vector<ClaimResult> out;
  auto absence = [&](const char* code, StructureSpec spec) {
    const std::string id = std::string("onesided-") + code + "-" + to_string(spec.neutral) + "-" +
                           to_string(spec.inverses);
    out.push_back(make_claim(id, "exhausted through order " + std::to_string(max_order),
                             [&](ClaimResult& c) -> std::string {
                               const auto r = verify_absence({resolve_identity(code)}, spec,
                                                             max_order, budget_per_claim);
                               const int reached = r.orders.empty() ? 0 : r.orders.back().order;
                               switch (r.status) {
                                 case SearchStatus::exhausted:
                                   return "exhausted through order " + std::to_string(max_order);
                                 case SearchStatus::witness:
                                   return "counterexample at order " + std::to_string(reached);
                                 case SearchStatus::budget_exceeded:
                                   c.budget_exceeded = true;
                                   return "budget exceeded at order " + std::to_string(reached);
                               }
                               return {};
                             }));
  };
  const StructureSpec left{NeutralSide::left, InverseSide::left};
  const StructureSpec right{NeutralSide::right, InverseSide::right};
  for (const char* code : {"B14", "B15", "E15", "C15"}) absence(code, left);
  for (const char* code : {"E25", "B15", "E15", "C15"}) absence(code, right);
  absence("B14", {NeutralSide::two_sided, InverseSide::right});

  out.push_back(make_claim(
      "onesided-B14-right-two-sided-counterexample", "counterexample at order 3",
      [&](ClaimResult& c) -> std::string {
        SearchProblem p;
        p.min_order = 1;
        p.max_order = std::max(3, max_order);
        p.spec = {NeutralSide::right, InverseSide::two_sided};
        p.identities = {resolve_identity("B14")};
        p.target = Target::non_loop;
        p.budget = budget_per_claim;
        const SearchOutcome o = search(p);
        if (o.status == SearchStatus::witness) {
          return "counterexample at order " + std::to_string(o.witness->order());
        }
        if (o.status == SearchStatus::budget_exceeded) c.budget_exceeded = true;
        return to_string(o.status) + " through order " + std::to_string(o.last_order);
      }));
  return out;
}

// ---------------------------------------------------------------------------
// B25 campaign

SearchProblem b25_problem(int order) {
  SearchProblem p;
  p.min_order = p.max_order = order;
  p.spec = {NeutralSide::two_sided, InverseSide::two_sided};
  p.identities = {decode_bm(parse_code("B25"))};
  p.target = Target::non_group;
  return p;
}

std::uint64_t problem_hash(const SearchProblem& p, int split_depth) {
  std::string key;
  for (const Identity& id : p.identities) key += render(id) + ";";
  key += "|" + to_string(p.spec) + "|" + to_string(p.target) + "|" + std::to_string(split_depth);
  // FNV-1a
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string format_prefix(const Prefix& p) {
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    out += (k ? "," : "") + std::to_string(p[k].cell) + "=" + std::to_string(p[k].value);
  }
  return out.empty() ? "-" : out;
}

template <class Int>
Int parse_number(std::string_view s, const char* what) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw CheckpointError(std::string("checkpoint: bad ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

Prefix parse_prefix(std::string_view s) {
  Prefix p;
  if (s == "-") return p;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string_view item = s.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw CheckpointError("checkpoint: bad decision '" + std::string(item) + "'");
    p.push_back({parse_number<int>(item.substr(0, eq), "cell"),
                 parse_number<int>(item.substr(eq + 1), "value")});
    pos = comma + 1;
  }
  return p;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t start = line.find_first_not_of(' ', pos);
    if (start == std::string_view::npos) break;
    const std::size_t end = std::min(line.find(' ', start), line.size());
    words.push_back(line.substr(start, end - start));
    pos = end;
  }
  return words;
}

constexpr std::string_view kCheckpointMagic = "bolmoufang-checkpoint 1";

}  // namespace

std::string format_checkpoint(const Checkpoint& c) {
  std::ostringstream out;
  out << kCheckpointMagic << '\n';
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.problem_hash));
  out << "problem " << hash << '\n';
  out << "split-depth " << c.split_depth << '\n';
  for (const auto& [order, nodes] : c.completed_orders) out << "order-done " << order << ' ' << nodes << '\n';
  if (c.active_order) {
    out << "order-active " << c.active_order << ' ' << c.active_nodes << '\n';
    for (const Prefix& p : c.done_prefixes) out << "prefix " << format_prefix(p) << '\n';
  }
  out << "end\n";
  return out.str();
}

Checkpoint parse_checkpoint(std::string_view text) {
  Checkpoint c;
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  if (lines.empty() || lines.front() != kCheckpointMagic) {
    throw CheckpointError("checkpoint: missing header");
  }
  bool seen_problem = false, seen_depth = false, seen_end = false;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (seen_end) {
      if (!lines[k].empty()) throw CheckpointError("checkpoint: data after end marker");
      continue;
    }
    const auto w = split_words(lines[k]);
    if (w.empty()) throw CheckpointError("checkpoint: blank line at " + std::to_string(k + 1));
    if (w[0] == "problem" && w.size() == 2 && w[1].size() == 16) {
      std::uint64_t h = 0;
      const auto [ptr, ec] = std::from_chars(w[1].data(), w[1].data() + 16, h, 16);
      if (ec != std::errc{} || ptr != w[1].data() + 16) throw CheckpointError("checkpoint: bad problem hash");
      c.problem_hash = h;
      seen_problem = true;
    } else if (w[0] == "split-depth" && w.size() == 2) {
      c.split_depth = parse_number<int>(w[1], "split depth");
      seen_depth = true;
    } else if (w[0] == "order-done" && w.size() == 3) {
      c.completed_orders.emplace_back(parse_number<int>(w[1], "order"),
                                      parse_number<std::uint64_t>(w[2], "node count"));
    } else if (w[0] == "order-active" && w.size() == 3) {
      c.active_order = parse_number<int>(w[1], "order");
      c.active_nodes = parse_number<std::uint64_t>(w[2], "node count");
    } else if (w[0] == "prefix" && w.size() == 2) {
      if (!c.active_order) throw CheckpointError("checkpoint: prefix without active order");
      c.done_prefixes.insert(parse_prefix(w[1]));
    } else if (w[0] == "end" && w.size() == 1) {
      seen_end = true;
    } else {
      throw CheckpointError("checkpoint: unrecognized line '" + std::string(lines[k]) + "'");
    }
  }
  if (!seen_problem || !seen_depth) throw CheckpointError("checkpoint: missing problem or split depth");
  if (!seen_end) throw CheckpointError("checkpoint: truncated (no end marker)");
  return c;
}

CampaignResult b25_campaign(const CampaignOptions& opt) {
  const auto start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (opt.budget) deadline = start + *opt.budget;
  const std::uint64_t hash = problem_hash(b25_problem(2), opt.split_depth);

  CampaignResult result;
  Checkpoint& cp = result.checkpoint;
  if (opt.resume) {
    if (opt.resume->problem_hash != hash || opt.resume->split_depth != opt.split_depth) {
      throw CheckpointError("checkpoint belongs to a different problem or split depth");
    }
    cp = *opt.resume;
  } else {
    cp.problem_hash = hash;
    cp.split_depth = opt.split_depth;
  }
  auto emit = [&] {
    if (opt.on_checkpoint) opt.on_checkpoint(cp);
  };

  std::optional<int> stopped_at;
  for (int order = 2; order <= opt.max_order && result.status == SearchStatus::exhausted; ++order) {
    const bool done_before = std::any_of(cp.completed_orders.begin(), cp.completed_orders.end(),
                                         [&](const auto& e) { return e.first == order; });
    if (done_before) continue;
    if (cp.active_order != order) {
      cp.active_order = order;
      cp.active_nodes = 0;
      cp.done_prefixes.clear();
    }
    const SearchProblem problem = b25_problem(order);
    OrderSearch space(problem, order);
    const std::vector<Prefix> all = space.frontier(opt.split_depth);
    std::vector<const Prefix*> pending;
    for (const Prefix& p : all)
      if (!cp.done_prefixes.count(p)) pending.push_back(&p);
    if (!pending.empty()) result.orders_searched.push_back(order);

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> found{false};
    std::atomic<bool> budget_hit{false};
    int finished_since_emit = 0;
    auto worker = [&] {
      for (std::size_t i = next++; i < pending.size(); i = next++) {
        if (found || budget_hit) return;
        SearchControl control{deadline, [&] { return found.load(); }};
        std::optional<Magma> hit;
        const std::function<bool(const Magma&)> sink = [&](const Magma& m) {
          hit = m;
          return false;
        };
        const SubtreeResult r = space.explore(*pending[i], control, sink);
        std::lock_guard lock(mu);
        if (hit) {
          found = true;
          if (!result.counterexample) result.counterexample = hit;
        } else if (r.status == SubtreeStatus::budget_exceeded) {
          budget_hit = true;
        } else if (r.status == SubtreeStatus::completed) {
          cp.done_prefixes.insert(*pending[i]);
          cp.active_nodes += r.nodes;
          if (++finished_since_emit >= opt.checkpoint_every) {
            finished_since_emit = 0;
            emit();
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < thread_count(opt.workers); ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    if (found) {
      result.status = SearchStatus::witness;
      stopped_at = order;
    } else if (budget_hit) {
      result.status = SearchStatus::budget_exceeded;
      stopped_at = order;
    } else {
      cp.completed_orders.emplace_back(order, cp.active_nodes);
      cp.active_order = 0;
      cp.active_nodes = 0;
      cp.done_prefixes.clear();
    }
    emit();
  }

  ClaimResult& claim = result.claim;
  claim.claim_id = "B25-no-counterexample-through-order-" + std::to_string(opt.max_order);
  claim.expectation = "exhausted through order " + std::to_string(opt.max_order);
  switch (result.status) {
    case SearchStatus::exhausted:
      claim.observed = claim.expectation;
      break;
    case SearchStatus::witness:
      if (!verify_witness(b25_problem(*stopped_at), *result.counterexample)) {
        throw std::logic_error("B25 campaign produced an unverifiable counterexample");
      }
      claim.observed = "counterexample at order " + std::to_string(*stopped_at);
      break;
    case SearchStatus::budget_exceeded:
      claim.observed = "budget exceeded at order " + std::to_string(*stopped_at) + " (" +
                       std::to_string(cp.done_prefixes.size()) + " subtasks done)";
      claim.budget_exceeded = true;
      break;
  }
  claim.pass = claim.observed == claim.expectation;
  claim.elapsed = Clock::now() - start;
  return result;
}

// ---------------------------------------------------------------------------
// Records

std::string escape_value(std::string_view v) {
  std::string out;
  for (char c : v) {
    switch (c) {
      case '%': out += "%25"; break;
      case '\t': out += "%09"; break;
      case '\n': out += "%0A"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_value(std::string_view v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == '%' && k + 2 < v.size()) {
      unsigned value = 0;
      std::from_chars(v.data() + k + 1, v.data() + k + 3, value, 16);
      out += static_cast<char>(value);
      k += 2;
    } else {
      out += v[k];
    }
  }
  return out;
}

std::string inline_table(const Magma& m) {
  std::string out = std::to_string(m.order());
  for (int a = 0; a < m.order(); ++a) {
    out += ';';
    for (int b = 0; b < m.order(); ++b) out += (b ? " " : "") + std::to_string(m.at(a, b));
  }
  return out;
}

std::string records_header() { return "# bolmoufang-records 1\n"; }

namespace {

long long millis(Clock::duration d) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
}

}  // namespace

std::string format_record(const ClaimResult& c) {
  return "claim\tclaim_id=" + escape_value(c.claim_id) + "\texpectation=" +
         escape_value(c.expectation) + "\tobserved=" + escape_value(c.observed) +
         "\tpass=" + yes_no(c.pass) + "\telapsed_ms=" + std::to_string(millis(c.elapsed)) + "\n";
}

std::string format_record(const ClassificationRow& r, int max_order) {
  return "row\tcode=" + to_string(r.code) + "\tconfig=" + to_string(r.config.neutral) + "/" +
         to_string(r.config.inverses) + "\tpaper_answer=" + to_string(r.paper_answer) +
         "\tobserved=" + to_string(r.observed) + "\tconsistent=" +
         yes_no(row_consistent(r, max_order)) + "\tnodes=" + std::to_string(r.nodes) +
         "\telapsed_ms=" + std::to_string(millis(r.elapsed)) +
         "\twitness=" + (r.witness ? inline_table(*r.witness) : std::string("-")) + "\n";
}

}  // namespace bolmoufang::lab
