#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rcnu/align.hpp"
#include "rcnu/ilp.hpp"

namespace rcnu {

// Union of per-case alignments. Moves are indexed case by case (cases in name
// order, each case's moves in its own sequence order).
struct ComposedAlignment {
  Alignment alignment;
  std::vector<Name> case_of;
  std::vector<std::size_t> position;  // index within the case's alignment
};

// Tokens of case c plus the tokens carrying no case.
ColoredMarking case_marking(const ColoredMarking& m, Name c);

// Optimal alignment of every trace on its own, spread over worker threads. Event
// indices of each result refer to project_case(log, c).
std::map<Name, Alignment> align_cases(const RcNuNet& net, const EventLog& log, const SearchOptions& options = {});

// Per-case orders plus log order between event-carrying moves, closed.
ComposedAlignment compose(const EventLog& log, const std::map<Name, Alignment>& per_case);

// Availability before g is short of what g's firings claim together, for some instance.
bool violating_antichain(const RcNuNet& net, const Alignment& al, const Antichain& g);

struct ResourceInstance {
  Name name;
  std::size_t role = 0;
  std::int64_t capacity = 0;
};

struct IlpInstance {
  std::size_t n = 0;
  std::vector<std::vector<std::uint8_t>> R;
  std::vector<ResourceInstance> instances;
  std::vector<std::vector<std::int64_t>> claim;    // n x instances
  std::vector<std::vector<std::int64_t>> release;  // n x instances
  std::int64_t reversal_weight = 1000;
  BinaryProgram program;
  std::vector<std::size_t> var;  // n*n, X_ij at var[i*n+j]; unused on the diagonal
  std::vector<std::size_t> case_index;

  std::size_t x(std::size_t i, std::size_t j) const { return var[i * n + j]; }
  bool touches_resources(std::size_t i) const;
  // Cases one after another, each keeping its own order.
  std::vector<int> block_triangular() const;
  // Follows the given order as far as free instances allow; a claim waits
  // until enough instances are back. nullopt when every case is stuck.
  std::optional<std::vector<int>> greedy_schedule() const;
  // Order pairs encoded by an assignment.
  Poset order_of(const std::vector<int>& assignment) const;
  std::int64_t reversals(const std::vector<int>& assignment) const;
};

IlpInstance build_ilp(const RcNuNet& net, const ComposedAlignment& comp);

struct Segment {
  std::vector<std::size_t> members;  // composed-move indices
  Antichain lower;                   // minimal members under the new order
  Antichain upper;
};

struct Extraction {
  Solution solution;
  bool optimal = true;  // false when the solver budget ran out
  Poset order;          // the new order on the composed moves
  std::int64_t reversals = 0;
  std::vector<std::pair<std::size_t, std::size_t>> reversed;  // (i, j): now i before j, was j before i
  std::vector<Segment> segments;
};

Extraction solve_and_extract(const ComposedAlignment& comp, const IlpInstance& inst, std::size_t node_budget = 1'000'000);

// Some order extending the composed one reverses nothing and stays within capacity.
bool is_violating(const RcNuNet& net, const ComposedAlignment& comp, std::size_t node_budget = 1'000'000);

struct RealignedSegment {
  Segment segment;
  std::vector<std::size_t> moves;  // indices into the final alignment
  std::int64_t original_cost = 0;
  std::int64_t cost = 0;
  bool fallback = false;
  std::string note;
};

struct Realignment {
  Alignment alignment;  // events index the full log
  std::int64_t cost = 0;
  bool fallback = false;
  std::string note;
};

// Aligns the events of `members` from the marking before them to the marking
// after them. `before` lists the composed moves fired earlier. Falls back to
// firing the members' transitions in `order` with every event as a log move.
Realignment realign_segment(const RcNuNet& net, const EventLog& log, const ComposedAlignment& comp, const Poset& order,
                            const std::vector<std::size_t>& before, const std::vector<std::size_t>& members,
                            const SearchOptions& options);

struct ApproxOptions {
  SearchOptions search;
  std::size_t ilp_budget = 1'000'000;
};

struct ApproxResult {
  Alignment alignment;
  std::int64_t cost = 0;
  ComposedAlignment composed;
  bool violating = false;
  bool ilp_optimal = true;
  std::size_t ilp_nodes = 0;
  std::vector<RealignedSegment> segments;
  std::vector<std::string> warnings;
};

ApproxResult approximate(const RcNuNet& net, const EventLog& log, const ApproxOptions& options = {});
Alignment approximate_alignment(const RcNuNet& net, const EventLog& log, const ApproxOptions& options = {});

}  // namespace rcnu
