#include "bolmoufang/finder.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <thread>

namespace bolmoufang {

std::string to_string(Target t) {
  switch (t) {
    case Target::non_loop: return "non-loop";
    case Target::non_group: return "non-group";
    case Target::any_model: return "any-model";
  }
  return {};
}

Target parse_target(std::string_view s) {
  if (s == "non-loop") return Target::non_loop;
  if (s == "non-group") return Target::non_group;
  if (s == "any-model" || s == "any") return Target::any_model;
  throw ConfigError("unknown target '" + std::string(s) + "'");
}

bool target_accepts(Target t, const Magma& m) {
  switch (t) {
    case Target::non_loop: return !is_loop(m);
    case Target::non_group: return !is_group(m);
    case Target::any_model: return true;
  }
  return false;
}

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::witness: return "witness";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::budget_exceeded: return "budget-exceeded";
  }
  return {};
}

inline constexpr int kMaxSearchOrder = 16;

namespace {

bool uses_inverse(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::inv: return true;
    case Term::Kind::prod: return uses_inverse(t.left()) || uses_inverse(t.right());
    default: return false;
  }
}

}  // namespace

void validate(const SearchProblem& p) {
  if (p.min_order < 1) throw ConfigError("order must be at least 1");
  if (p.max_order < p.min_order) throw ConfigError("empty order range");
  if (p.max_order > kMaxSearchOrder) {
    throw ConfigError("order above " + std::to_string(kMaxSearchOrder) + " is not supported");
  }
  if (p.identities.empty() && p.target != Target::any_model) {
    throw ConfigError("a " + to_string(p.target) + " search needs at least one identity");
  }
  for (const Identity& id : p.identities) {
    if (uses_inverse(id.lhs) || uses_inverse(id.rhs)) {
      throw ConfigError("identities with formal inverses cannot be searched: " + render(id));
    }
  }
  if (p.split_depth < 0) throw ConfigError("split depth must be non-negative");
  if (p.workers < 0) throw ConfigError("worker count must be non-negative");
}

bool verify_witness(const SearchProblem& problem, const Magma& m) {
  const auto w = satisfies_structure(m, problem.spec);
  if (!w) return false;
  const Interpretation interp{w->neutral, std::nullopt};
  for (const Identity& id : problem.identities)
    if (!holds(id, m, interp)) return false;
  return target_accepts(problem.target, m);
}

// ---------------------------------------------------------------------------
// Propagation engine

namespace {

// Postorder program for one side of an identity; the root is last.
struct Node {
  enum Kind : std::uint8_t { var, constant, prod };
  Kind kind;
  std::uint8_t a;
  std::uint8_t b;
};

struct CompiledIdentity {
  std::array<std::vector<Node>, 2> sides;
  int vars = 0;
};

void compile_term(const Term& t, std::vector<Node>& out) {
  switch (t.kind()) {
    case Term::Kind::var:
      out.push_back({Node::var, static_cast<std::uint8_t>(t.var()), 0});
      break;
    case Term::Kind::one:
      // the demanded neutral is always element 0
      out.push_back({Node::constant, 0, 0});
      break;
    case Term::Kind::inv:
      throw ConfigError("formal inverses are not supported by the search engine");
    case Term::Kind::prod: {
      compile_term(t.left(), out);
      const auto l = static_cast<std::uint8_t>(out.size() - 1);
      compile_term(t.right(), out);
      const auto r = static_cast<std::uint8_t>(out.size() - 1);
      out.push_back({Node::prod, l, r});
      break;
    }
  }
}

struct Instance {
  std::uint16_t identity;
  std::array<std::int8_t, kVarCount> vals;
};

// Shared, immutable description of one order of a problem.
struct Model {
  int n = 0;
  StructureSpec spec;
  Target target = Target::any_model;
  std::vector<CompiledIdentity> identities;
  std::vector<Instance> instances;
};

struct SideEval {
  int value = -1;
  int blocker = -1;
  bool root_blocked = false;
};

constexpr std::uint32_t kClockStride = 256;

class Engine {
 public:
  explicit Engine(std::shared_ptr<const Model> model)
      : model_(std::move(model)),
        n_(model_->n),
        values_(static_cast<std::size_t>(n_) * n_, -1),
        watch_(values_.size()) {}

  // Fixes the neutral, posts every identity instance, and propagates.
  bool initialize() {
    const auto& spec = model_->spec;
    for (int x = 0; x < n_; ++x) {
      if (spec.neutral != NeutralSide::right && !assign_checked(x, x)) return false;  // 0·x = x
      if (spec.neutral != NeutralSide::left && !assign_checked(x * n_, x)) return false;  // x·0 = x
    }
    for (std::uint32_t i = 0; i < model_->instances.size(); ++i) {
      if (!post(i)) return false;
    }
    for (int x = 0; x < n_; ++x) {
      if (!check_inverses_of(x)) return false;
    }
    return propagate();
  }

  int order() const { return n_; }
  int cells() const { return static_cast<int>(values_.size()); }
  bool assigned(int cell) const { return values_[cell] >= 0; }

  int select_cell() const {
    // Candidate sets only shrink by assignment, so most-constrained-first
    // degenerates to its row-major tie-break.
    for (int c = 0; c < cells(); ++c)
      if (values_[c] < 0) return c;
    return -1;
  }

  struct Mark {
    std::size_t trail;
    std::size_t watch_trail;
  };
  Mark mark() const { return {trail_.size(), watch_trail_.size()}; }

  void restore(Mark m) {
    while (trail_.size() > m.trail) {
      values_[trail_.back()] = -1;
      trail_.pop_back();
    }
    while (watch_trail_.size() > m.watch_trail) {
      watch_[watch_trail_.back()].pop_back();
      watch_trail_.pop_back();
    }
    queue_.clear();
  }

  bool decide(int cell, Element v) {
    assign(cell, v);
    return propagate();
  }

  Magma table() const {
    return Magma(n_, std::vector<Element>(values_.begin(), values_.end()));
  }

 private:
  void assign(int cell, int v) {
    values_[cell] = static_cast<std::int8_t>(v);
    trail_.push_back(cell);
    queue_.push_back(cell);
  }

  bool assign_checked(int cell, int v) {
    if (values_[cell] >= 0) return values_[cell] == v;
    assign(cell, v);
    return true;
  }

  void add_watch(int cell, std::uint32_t entry) {
    watch_[cell].push_back(entry);
    watch_trail_.push_back(cell);
  }

  SideEval eval(const std::vector<Node>& side, const Instance& in) const {
    std::array<int, 16> vals{};
    SideEval r;
    const std::size_t last = side.size() - 1;
    for (std::size_t k = 0; k < side.size(); ++k) {
      const Node& node = side[k];
      switch (node.kind) {
        case Node::var:
          vals[k] = in.vals[node.a];
          break;
        case Node::constant:
          vals[k] = node.a;
          break;
        case Node::prod: {
          const int l = vals[node.a];
          const int rr = vals[node.b];
          if (l < 0 || rr < 0) {
            vals[k] = -1;
            break;
          }
          const int cell = l * n_ + rr;
          vals[k] = values_[cell];
          if (vals[k] < 0) {
            if (r.blocker < 0) r.blocker = cell;
            if (k == last) r.root_blocked = true;
          }
          break;
        }
      }
    }
    r.value = vals[last];
    return r;
  }

  // Evaluates an instance; returns false on a violated ground equation.
  // Unit-propagates when one side is known and the other misses exactly its
  // outermost lookup. Otherwise the sides listed in `rewatch` are re-watched
  // on their current blocking cell.
  bool examine(std::uint32_t inst, bool rewatch_lhs, bool rewatch_rhs) {
    const Instance& in = model_->instances[inst];
    const CompiledIdentity& id = model_->identities[in.identity];
    const SideEval l = eval(id.sides[0], in);
    const SideEval r = eval(id.sides[1], in);
    if (l.value >= 0 && r.value >= 0) return l.value == r.value;
    if (l.value >= 0 && r.root_blocked) {
      assign(r.blocker, l.value);
      return true;
    }
    if (r.value >= 0 && l.root_blocked) {
      assign(l.blocker, r.value);
      return true;
    }
    if (rewatch_lhs && l.value < 0) add_watch(l.blocker, inst * 2);
    if (rewatch_rhs && r.value < 0) add_watch(r.blocker, inst * 2 + 1);
    return true;
  }

  bool post(std::uint32_t inst) { return examine(inst, true, true); }

  // Existence of inverses relative to the neutral 0, as row/column constraints.
  bool check_inverses_of(int x) {
    switch (model_->spec.inverses) {
      case InverseSide::none:
        return true;
      case InverseSide::right:  // x·y = 0 for some y: row x contains 0
        return require_zero_in_line(x * n_, 1);
      case InverseSide::left:  // y·x = 0 for some y: column x contains 0
        return require_zero_in_line(x, n_);
      case InverseSide::two_sided: {
        int candidate = -1;
        int count = 0;
        for (int y = 0; y < n_; ++y) {
          const int a = values_[x * n_ + y];
          const int b = values_[y * n_ + x];
          if (a == 0 && b == 0) return true;
          if ((a < 0 || a == 0) && (b < 0 || b == 0)) {
            candidate = y;
            ++count;
          }
        }
        if (count == 0) return false;
        if (count == 1) {
          if (values_[x * n_ + candidate] < 0) assign(x * n_ + candidate, 0);
          if (values_[candidate * n_ + x] < 0) assign(candidate * n_ + x, 0);
        }
        return true;
      }
    }
    return true;
  }

  bool require_zero_in_line(int start, int stride) {
    int open = -1;
    int count = 0;
    for (int k = 0; k < n_; ++k) {
      const int cell = start + k * stride;
      if (values_[cell] == 0) return true;
      if (values_[cell] < 0) {
        open = cell;
        ++count;
      }
    }
    if (count == 0) return false;
    if (count == 1) assign(open, 0);
    return true;
  }

  bool propagate() {
    std::size_t head = 0;
    while (head < queue_.size()) {
      const int cell = queue_[head++];
      if (values_[cell] != 0 && model_->spec.inverses != InverseSide::none) {
        const int p = cell / n_;
        const int q = cell % n_;
        if (!check_inverses_of(p) || !check_inverses_of(q)) {
          queue_.clear();
          return false;
        }
      }
      const auto& watchers = watch_[cell];
      for (std::size_t k = 0; k < watchers.size(); ++k) {
        const std::uint32_t entry = watchers[k];
        const bool rhs = entry & 1u;
        if (!examine(entry >> 1, !rhs, rhs)) {
          queue_.clear();
          return false;
        }
      }
    }
    queue_.clear();
    return true;
  }

  std::shared_ptr<const Model> model_;
  int n_;
  std::vector<std::int8_t> values_;
  std::vector<std::vector<std::uint32_t>> watch_;
  std::vector<int> trail_;
  std::vector<int> watch_trail_;
  std::vector<int> queue_;
};

std::shared_ptr<const Model> build_model(const SearchProblem& problem, int order) {
  auto model = std::make_shared<Model>();
  model->n = order;
  model->spec = problem.spec;
  model->target = problem.target;
  for (const Identity& id : problem.identities) {
    CompiledIdentity c;
    compile_term(id.lhs, c.sides[0]);
    compile_term(id.rhs, c.sides[1]);
    c.vars = variable_count(id);
    if (c.sides[0].size() > 16 || c.sides[1].size() > 16) {
      throw ConfigError("identity too large for the search engine: " + render(id));
    }
    const auto index = static_cast<std::uint16_t>(model->identities.size());
    model->identities.push_back(std::move(c));
    int total = 1;
    for (int v = 0; v < model->identities.back().vars; ++v) total *= order;
    for (int k = 0; k < total; ++k) {
      Instance in{index, {0, 0, 0}};
      int rest = k;
      for (int v = model->identities.back().vars - 1; v >= 0; --v) {
        in.vals[v] = static_cast<std::int8_t>(rest % order);
        rest /= order;
      }
      model->instances.push_back(in);
    }
  }
  return model;
}

class Explorer {
 public:
  Explorer(Engine engine, const SearchControl& control,
           const std::function<bool(const Magma&)>& sink, Target target)
      : engine_(std::move(engine)), control_(control), sink_(sink), target_(target) {}

  SubtreeResult run() {
    dfs();
    return {status_, nodes_};
  }

  // Collects prefixes at the given depth instead of descending further.
  void collect(int depth, std::vector<Prefix>& out) {
    Prefix prefix;
    collect_rec(depth, prefix, out);
  }

  Engine& engine() { return engine_; }

 private:
  bool should_stop() {
    if (++since_check_ < kClockStride) return false;
    since_check_ = 0;
    if (control_.deadline && Clock::now() >= *control_.deadline) {
      status_ = SubtreeStatus::budget_exceeded;
      return true;
    }
    if (control_.stop_requested && control_.stop_requested()) {
      status_ = SubtreeStatus::stopped;
      return true;
    }
    return false;
  }

  // Returns false once the search must unwind.
  bool dfs() {
    ++nodes_;
    if (should_stop()) return false;
    const int cell = engine_.select_cell();
    if (cell < 0) {
      const Magma m = engine_.table();
      if (!target_accepts(target_, m)) return true;
      if (!sink_(m)) {
        status_ = SubtreeStatus::stopped;
        return false;
      }
      return true;
    }
    const int n = engine_.order();
    for (int v = 0; v < n; ++v) {
      const auto mark = engine_.mark();
      if (engine_.decide(cell, v) && !dfs()) {
        engine_.restore(mark);
        return false;
      }
      engine_.restore(mark);
    }
    return true;
  }

  void collect_rec(int depth, Prefix& prefix, std::vector<Prefix>& out) {
    const int cell = engine_.select_cell();
    if (depth == 0 || cell < 0) {
      out.push_back(prefix);
      return;
    }
    const int n = engine_.order();
    for (int v = 0; v < n; ++v) {
      const auto mark = engine_.mark();
      if (engine_.decide(cell, v)) {
        prefix.push_back({cell, v});
        collect_rec(depth - 1, prefix, out);
        prefix.pop_back();
      }
      engine_.restore(mark);
    }
  }

  Engine engine_;
  const SearchControl& control_;
  const std::function<bool(const Magma&)>& sink_;
  Target target_;
  SubtreeStatus status_ = SubtreeStatus::completed;
  std::uint64_t nodes_ = 0;
  std::uint32_t since_check_ = 0;
};

}  // namespace

struct OrderSearch::Impl {
  std::shared_ptr<const Model> model;
  std::optional<Engine> root;  // empty when the root is inconsistent
};

OrderSearch::OrderSearch(const SearchProblem& problem, int order) : impl_(std::make_unique<Impl>()) {
  validate(problem);
  impl_->model = build_model(problem, order);
  Engine engine(impl_->model);
  if (engine.initialize()) impl_->root.emplace(std::move(engine));
}

OrderSearch::~OrderSearch() = default;

int OrderSearch::order() const { return impl_->model->n; }

bool OrderSearch::root_consistent() const { return impl_->root.has_value(); }

std::vector<Prefix> OrderSearch::frontier(int depth) const {
  std::vector<Prefix> out;
  if (!impl_->root) return out;
  const SearchControl control;
  const std::function<bool(const Magma&)> sink = [](const Magma&) { return true; };
  Explorer ex(*impl_->root, control, sink, impl_->model->target);
  ex.collect(depth, out);
  return out;
}

SubtreeResult OrderSearch::explore(const Prefix& prefix, const SearchControl& control,
                                   const std::function<bool(const Magma&)>& sink) const {
  if (!impl_->root) return {};
  Engine engine = *impl_->root;
  for (const Decision& d : prefix) {
    if (d.cell < 0 || d.cell >= engine.cells()) throw std::out_of_range("decision cell out of range");
    if (engine.assigned(d.cell) || !engine.decide(d.cell, d.value)) return {};
  }
  Explorer ex(std::move(engine), control, sink, impl_->model->target);
  return ex.run();
}

// ---------------------------------------------------------------------------
// Drivers

namespace {

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct OrderResult {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<Magma> witness;
  std::uint64_t nodes = 0;
  std::size_t subtasks_total = 0;
  std::size_t subtasks_done = 0;
};

OrderResult run_order(const SearchProblem& problem, int order,
                      std::optional<Clock::time_point> deadline) {
  OrderSearch space(problem, order);
  OrderResult result;
  if (!space.root_consistent()) return result;
  const int workers = resolve_workers(problem.workers);

  if (workers == 1) {
    SearchControl control{deadline, {}};
    const std::function<bool(const Magma&)> sink = [&](const Magma& m) {
      result.witness = m;
      return false;
    };
    const SubtreeResult r = space.explore({}, control, sink);
    result.nodes = r.nodes;
    result.subtasks_total = 1;
    result.subtasks_done = r.status == SubtreeStatus::budget_exceeded ? 0 : 1;
    if (result.witness) {
      result.status = SearchStatus::witness;
    } else if (r.status == SubtreeStatus::budget_exceeded) {
      result.status = SearchStatus::budget_exceeded;
    }
    return result;
  }

  const std::vector<Prefix> tasks = space.frontier(problem.split_depth);
  result.subtasks_total = tasks.size();
  std::vector<std::optional<Magma>> found(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{tasks.size()};  // smallest task index with a witness
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> budget_hit{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      if (best.load() < i) continue;
      SearchControl control{deadline, [&, i] {
                              return problem.deterministic ? best.load() < i
                                                           : best.load() < tasks.size();
                            }};
      const std::function<bool(const Magma&)> sink = [&, i](const Magma& m) {
        found[i] = m;
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        return false;
      };
      const SubtreeResult r = space.explore(tasks[i], control, sink);
      nodes += r.nodes;
      if (r.status == SubtreeStatus::budget_exceeded) {
        budget_hit = true;
      } else {
        ++done;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  result.nodes = nodes.load();
  result.subtasks_done = done.load();
  if (best.load() < tasks.size()) {
    result.status = SearchStatus::witness;
    result.witness = found[best.load()];
  } else if (budget_hit) {
    result.status = SearchStatus::budget_exceeded;
  }
  return result;
}

}  // namespace

SearchOutcome search(const SearchProblem& problem) {
  validate(problem);
  const auto start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (problem.budget) deadline = start + *problem.budget;
  SearchOutcome out;
  for (int order = problem.min_order; order <= problem.max_order; ++order) {
    out.last_order = order;
    OrderResult r = run_order(problem, order, deadline);
    out.nodes_explored += r.nodes;
    out.subtasks_total = r.subtasks_total;
    out.subtasks_done = r.subtasks_done;
    if (r.status == SearchStatus::witness) {
      if (!verify_witness(problem, *r.witness)) {
        throw std::logic_error("search produced a table that fails re-verification:\n" +
                               format_table(*r.witness));
      }
      out.status = SearchStatus::witness;
      out.structure = satisfies_structure(*r.witness, problem.spec);
      out.witness = std::move(r.witness);
      break;
    }
    if (r.status == SearchStatus::budget_exceeded) {
      out.status = SearchStatus::budget_exceeded;
      break;
    }
  }
  out.elapsed = Clock::now() - start;
  return out;
}

void enumerate_models(const SearchProblem& problem, bool up_to_iso,
                      const std::function<bool(const Magma&)>& sink) {
  validate(problem);
  if (up_to_iso && problem.max_order > kMaxCanonicalOrder) {
    throw ConfigError("isomorphism-free enumeration supports order <= " +
                      std::to_string(kMaxCanonicalOrder));
  }
  const SearchControl control;
  for (int order = problem.min_order; order <= problem.max_order; ++order) {
    OrderSearch space(problem, order);
    std::set<Magma> seen;
    bool stopped = false;
    const std::function<bool(const Magma&)> filter = [&](const Magma& m) {
      if (up_to_iso && !seen.insert(canonical_form(m)).second) return true;
      if (!sink(m)) {
        stopped = true;
        return false;
      }
      return true;
    };
    space.explore({}, control, filter);
    if (stopped) return;
  }
}

std::vector<Magma> enumerate_models(const SearchProblem& problem, bool up_to_iso) {
  std::vector<Magma> out;
  enumerate_models(problem, up_to_iso, [&](const Magma& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

AbsenceReport verify_absence(const std::vector<Identity>& identities, const StructureSpec& spec,
                             int max_order, std::optional<std::chrono::milliseconds> budget,
                             int workers) {
  AbsenceReport report;
  const auto start = Clock::now();
  for (int order = 1; order <= max_order; ++order) {
    SearchProblem p;
    p.min_order = p.max_order = order;
    p.spec = spec;
    p.identities = identities;
    p.target = Target::non_loop;
    p.workers = workers;
    if (budget) {
      const auto used = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
      p.budget = std::max(std::chrono::milliseconds(0), *budget - used);
    }
    const SearchOutcome o = search(p);
    report.orders.push_back({order, o.status, o.nodes_explored, o.elapsed});
    if (o.status != SearchStatus::exhausted) {
      report.status = o.status;
      report.witness = o.witness;
      return report;
    }
  }
  report.status = SearchStatus::exhausted;
  return report;
}

}  // namespace bolmoufang
