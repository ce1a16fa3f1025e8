#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcnu/errors.hpp"
#include "rcnu/eventlog.hpp"
#include "rcnu/lognet.hpp"
#include "rcnu/poset.hpp"
#include "rcnu/rcnet.hpp"

namespace rcnu {

enum class MoveKind { kLog, kModel, kSync };

std::string to_string(MoveKind k);

// A log move carries an event, a model move a firing, a sync move both.
// Events index into the log the alignment was computed for.
struct Move {
  MoveKind kind = MoveKind::kLog;
  std::optional<std::size_t> event;
  std::optional<std::size_t> transition;
  Mode mode;

  friend bool operator==(const Move&, const Move&) = default;
};

struct CostTable {
  std::int64_t sync = 0;
  std::int64_t tau = 1;
  std::int64_t visible = 10000;
};

std::int64_t move_cost(const RcNuNet& net, const Move& m, const CostTable& costs);

struct Alignment {
  std::vector<Move> moves;
  Poset order;  // transitively closed
};

std::int64_t alignment_cost(const RcNuNet& net, const Alignment& al, const CostTable& costs = {});

// Integer token counts that may go negative.
using PseudoMarking = ColoredMarking;

// start plus the effect of the firings among `members` (log moves ignored).
PseudoMarking pseudo_fire(const RcNuNet& net, const ColoredMarking& start, const Alignment& al,
                          std::span<const std::size_t> members);
PseudoMarking pseudo_fire(const RcNuNet& net, const Alignment& al, std::span<const std::size_t> members);

enum class Side { kPre, kPost };
// Pseudo-marking after firing everything strictly below g (pre) or below or in g (post).
PseudoMarking antichain_marking(const RcNuNet& net, const Alignment& al, const Antichain& g, Side side,
                                const ColoredMarking* start = nullptr);

// Label-matching (event, transition) pairs; whether a pair actually
// synchronizes also depends on the mode (see sync_compatible).
struct SyncPair {
  std::size_t event;
  std::size_t transition;
};

struct SyncProduct {
  const RcNuNet* model = nullptr;
  const EventLog* log = nullptr;
  LogNet log_net;
  std::vector<SyncPair> sync;
  std::vector<std::string> warnings;
};

SyncProduct build_sync_product(const RcNuNet& model, const EventLog& log);

// The firing belongs to the event's case and touches exactly the event's resources.
bool sync_compatible(const RcNuNet& net, const Event& e, std::size_t t, const Mode& mode);

enum class OrderStyle { kCausal, kSequential };

struct SearchOptions {
  CostTable costs;
  std::size_t node_budget = 2'000'000;
  // Extra synthetic identifiers for fresh variables beyond the log's case ids.
  std::size_t fresh_spares = 0;
  // Replaces the default pool (log case ids plus spares) when set.
  std::optional<std::vector<Name>> fresh_pool;
  // Model firings may only bind case variables to these ids when set.
  std::optional<std::vector<Name>> allowed_cases;
  OrderStyle order = OrderStyle::kCausal;
};

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t stored = 0;
  std::size_t frontier = 0;
  std::int64_t frontier_cost = 0;
};

struct SearchExhausted : BudgetError {
  SearchExhausted(const std::string& what, SearchStats s) : BudgetError(what), stats(s) {}
  SearchStats stats;
};

struct AlignmentResult {
  Alignment alignment;
  std::vector<std::size_t> sequence;  // firing order found by the search (indices into moves)
  std::int64_t cost = 0;
  SearchStats stats;
};

// Cheapest execution of the product from (start, nothing fired) to (goal,
// everything fired). Uniform-cost search; ties go to the earliest generated
// state. Throws SearchExhausted when the budget of stored states runs out.
AlignmentResult optimal_alignment(const SyncProduct& prod, const ColoredMarking& start, const ColoredMarking& goal,
                                  const SearchOptions& options = {});
AlignmentResult optimal_alignment(const RcNuNet& net, const EventLog& log, const SearchOptions& options = {});

// Turns a firing sequence into a partial order. Causal: token flow (first in,
// first out per token), fresh-name reuse and log order. Sequential: total.
Alignment order_moves(const RcNuNet& net, const EventLog& log, const ColoredMarking& start, std::vector<Move> sequence,
                      OrderStyle style);

struct ValidityReport {
  bool valid = true;
  std::string witness;
  // Moves fired before the failing move in some linearization (when known).
  std::vector<std::size_t> prefix;
};

// Exhaustive replays every linearization; flow bounds, per firing and token,
// the worst marking any linearization can present (a min-cut over down-sets).
// Auto replays up to 8 firings and uses flow above that.
enum class ValidityCheck { kAuto, kExhaustive, kFlow };

// Checks that the log projection is the log (each event exactly once, log
// order contained) and that every linearization of the firings leads from
// start to goal.
ValidityReport is_valid_alignment(const RcNuNet& net, const EventLog& log, const Alignment& al,
                                  const ColoredMarking& start, const ColoredMarking& goal,
                                  ValidityCheck method = ValidityCheck::kAuto);
ValidityReport is_valid_alignment(const RcNuNet& net, const EventLog& log, const Alignment& al);

// Fires the transition moves of `sequence` in order; nullopt if some firing is
// not enabled.
std::optional<ColoredMarking> replay(const RcNuNet& net, const ColoredMarking& start, const std::vector<Move>& moves,
                                     std::span<const std::size_t> sequence);

}  // namespace rcnu
