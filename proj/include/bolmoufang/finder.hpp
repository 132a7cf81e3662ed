#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolmoufang/magma.hpp"
#include "bolmoufang/term.hpp"

namespace bolmoufang {

enum class Target { non_loop, non_group, any_model };

std::string to_string(Target t);
Target parse_target(std::string_view s);
bool target_accepts(Target t, const Magma& m);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Clock = std::chrono::steady_clock;

struct SearchProblem {
  int min_order = 1;
  int max_order = 1;
  StructureSpec spec;
  std::vector<Identity> identities;
  Target target = Target::any_model;
  /// Static row-major cell order, so the first witness is the lexicographically
  /// least table of the smallest order, independent of worker count.
  bool deterministic = true;
  std::optional<std::chrono::milliseconds> budget;
  /// 0 = hardware concurrency.
  int workers = 1;
  /// Decision levels used to split the tree into subtasks.
  int split_depth = 3;
};

/// Throws ConfigError on an ill-formed problem.
void validate(const SearchProblem& p);

enum class SearchStatus { witness, exhausted, budget_exceeded };
std::string to_string(SearchStatus s);

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<Magma> witness;
  std::optional<StructureWitness> structure;
  std::uint64_t nodes_explored = 0;
  Clock::duration elapsed{};
  /// Order being searched when the search stopped.
  int last_order = 0;
  std::size_t subtasks_total = 0;
  std::size_t subtasks_done = 0;
};

SearchOutcome search(const SearchProblem& problem);

/// Every normalized model at every order of the range, in search order. A
/// model is normalized when element 0 is a neutral of the demanded side with
/// inverses relative to it. With up_to_iso, one model per isomorphism class.
/// The sink returns false to stop.
void enumerate_models(const SearchProblem& problem, bool up_to_iso,
                      const std::function<bool(const Magma&)>& sink);
std::vector<Magma> enumerate_models(const SearchProblem& problem, bool up_to_iso);

struct OrderReport {
  int order = 0;
  SearchStatus status = SearchStatus::exhausted;
  std::uint64_t nodes = 0;
  Clock::duration elapsed{};
};

struct AbsenceReport {
  SearchStatus status = SearchStatus::exhausted;
  std::vector<OrderReport> orders;
  std::optional<Magma> witness;
};

/// Search for a non-loop at each order 1..max_order in turn.
AbsenceReport verify_absence(const std::vector<Identity>& identities, const StructureSpec& spec,
                             int max_order, std::optional<std::chrono::milliseconds> budget,
                             int workers = 1);

/// Re-checks a witness against every constraint of the problem.
bool verify_witness(const SearchProblem& problem, const Magma& m);

// ---------------------------------------------------------------------------
// Subtask-level access, used for parallel runs and resumable campaigns.

struct Decision {
  int cell = 0;
  Element value = 0;
  friend bool operator==(const Decision&, const Decision&) = default;
  friend auto operator<=>(const Decision&, const Decision&) = default;
};
using Prefix = std::vector<Decision>;

struct SearchControl {
  std::optional<Clock::time_point> deadline;
  std::function<bool()> stop_requested;
};

enum class SubtreeStatus { completed, stopped, budget_exceeded };

struct SubtreeResult {
  SubtreeStatus status = SubtreeStatus::completed;
  std::uint64_t nodes = 0;
};

/// The search space of one order of a problem. Immutable after construction;
/// explore() works on a private copy of the propagated root state.
class OrderSearch {
 public:
  OrderSearch(const SearchProblem& problem, int order);
  ~OrderSearch();
  OrderSearch(const OrderSearch&) = delete;
  OrderSearch& operator=(const OrderSearch&) = delete;

  int order() const;
  /// False when propagation at the root already fails.
  bool root_consistent() const;
  /// Decision prefixes of all surviving nodes at the given depth (or leaves
  /// reached earlier), in depth-first order.
  std::vector<Prefix> frontier(int depth) const;
  /// Visits the models below prefix that pass the target; the sink returns
  /// false to stop.
  SubtreeResult explore(const Prefix& prefix, const SearchControl& control,
                        const std::function<bool(const Magma&)>& sink) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bolmoufang
