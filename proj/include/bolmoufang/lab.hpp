#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolmoufang/finder.hpp"
#include "bolmoufang/magma.hpp"
#include "bolmoufang/term.hpp"

namespace bolmoufang::lab {

using Budget = std::optional<std::chrono::milliseconds>;

// Tables printed in the source text, verbatim.
Magma q1_table();                // left alternative loop without inverses
Magma q2_table();                // nuclear square loop without inverses
Magma m3m4_table();              // order 3, satisfies M3 and M4, not a loop
Magma right_neutral_lb_table();  // order 3, right neutral, LB, not a loop
Magma hall_table();              // xy = x on two elements

/// Left, middle and right nuclear square laws.
std::vector<Identity> nuclear_square_laws();

struct ClaimResult {
  std::string claim_id;
  std::string expectation;
  std::string observed;
  bool pass = false;
  /// Set when a mandatory search ran out of budget.
  bool budget_exceeded = false;
  Clock::duration elapsed{};
};

std::vector<ClaimResult> reproduce_fixtures();

enum class PaperAnswer { yes, no, open, unlisted };
std::string to_string(PaperAnswer a);

struct Observation {
  enum class Kind { counterexample, exhausted, budget };
  Kind kind = Kind::exhausted;
  /// counterexample: its order; exhausted: max order; budget: order reached.
  int order = 0;
};
std::string to_string(const Observation& o);

struct ClassificationRow {
  BMCode code;
  StructureSpec config;
  PaperAnswer paper_answer = PaperAnswer::unlisted;
  Observation observed;
  std::optional<Magma> witness;
  std::uint64_t nodes = 0;
  Clock::duration elapsed{};
};

/// Paper answer for a code under two-sided neutral and inverses.
PaperAnswer paper_answer(const BMCode& code);
/// Orders exhausted without a counterexample.
int exhausted_through(const Observation& o);
/// "no" rows need a counterexample of order <= 6; "yes" rows need exhaustion
/// through min(min_exhausted, max_order); open rows must not be refuted.
bool row_consistent(const ClassificationRow& row, int max_order, int min_exhausted = 5);

/// One row per Bol-Moufang code, in code order. Rows run concurrently on
/// `workers` threads (0 = all cores), each with its own budget.
std::vector<ClassificationRow> run_classification(int max_order, Budget budget_per_row,
                                                  int workers = 1);

std::vector<ClaimResult> run_onesided_suite(int max_order, Budget budget_per_claim);

// ---------------------------------------------------------------------------
// B25 campaign

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  std::uint64_t problem_hash = 0;
  int split_depth = 0;
  /// Finished orders with their node counts.
  std::vector<std::pair<int, std::uint64_t>> completed_orders;
  /// Order in progress, 0 if none.
  int active_order = 0;
  std::uint64_t active_nodes = 0;
  std::set<Prefix> done_prefixes;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::string format_checkpoint(const Checkpoint& c);
/// Throws CheckpointError on malformed or truncated text.
Checkpoint parse_checkpoint(std::string_view text);

/// The searched problem: B25, two-sided neutral and inverses, non-group.
SearchProblem b25_problem(int order);
std::uint64_t problem_hash(const SearchProblem& p, int split_depth);

struct CampaignResult {
  ClaimResult claim;
  SearchStatus status = SearchStatus::exhausted;
  std::optional<Magma> counterexample;
  Checkpoint checkpoint;
  /// Orders at which any subtask was explored during this run.
  std::vector<int> orders_searched;
};

struct CampaignOptions {
  int max_order = 6;
  Budget budget;
  std::optional<Checkpoint> resume;
  int split_depth = 3;
  /// 0 = all cores.
  int workers = 1;
  /// Called after every `checkpoint_every` finished subtasks and at each
  /// order boundary.
  std::function<void(const Checkpoint&)> on_checkpoint;
  int checkpoint_every = 64;
};

/// Throws CheckpointError when the resume checkpoint belongs to another problem.
CampaignResult b25_campaign(const CampaignOptions& options);

// ---------------------------------------------------------------------------
// Record format: one record per line, a kind word followed by tab-separated
// key=value fields; '%', tab and newline in values are percent-encoded.

std::string records_header();
std::string format_record(const ClaimResult& c);
std::string format_record(const ClassificationRow& r, int max_order);
std::string escape_value(std::string_view v);
std::string unescape_value(std::string_view v);
/// Table as "n;row;row;..." with space-separated entries.
std::string inline_table(const Magma& m);

}  // namespace bolmoufang::lab
