#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace rcnu {

using Antichain = std::vector<std::size_t>;
using OrderPair = std::pair<std::size_t, std::size_t>;

// Strict partial order over the indices 0..n-1, stored as a dense bit matrix.
// The order is not required to be transitively closed; call closure() for that.
class Poset {
 public:
  Poset() = default;
  explicit Poset(std::size_t n);
  Poset(std::size_t n, std::span<const OrderPair> pairs);

  std::size_t size() const { return n_; }

  // Records a < b. Self-loops are rejected with CycleError.
  void add(std::size_t a, std::size_t b);
  void remove(std::size_t a, std::size_t b);

  bool precedes(std::size_t a, std::size_t b) const {
    return (rows_[a][b >> 6] >> (b & 63)) & 1U;
  }
  bool preceq(std::size_t a, std::size_t b) const { return a == b || precedes(a, b); }
  bool comparable(std::size_t a, std::size_t b) const { return precedes(a, b) || precedes(b, a); }
  bool concurrent(std::size_t a, std::size_t b) const { return a != b && !comparable(a, b); }

  // Pairs in ascending (a, b) order.
  std::vector<OrderPair> pairs() const;
  std::size_t pair_count() const;

  bool is_transitively_closed() const;
  bool is_acyclic() const;
  bool is_total() const;

  // Smallest transitively closed superset. Throws CycleError on cycles.
  Poset closure() const;
  // Covering relation of a closed order.
  Poset reduction() const;

  std::vector<std::size_t> successors(std::size_t a) const;
  std::vector<std::size_t> predecessors(std::size_t b) const;

  Antichain minimal() const;
  Antichain maximal() const;
  bool is_antichain(std::span<const std::size_t> members) const;

  // Topological order, smallest available index first. Throws CycleError.
  std::vector<std::size_t> topological_order() const;

  friend bool operator==(const Poset& a, const Poset& b) { return a.n_ == b.n_ && a.rows_ == b.rows_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<std::uint64_t>> rows_;
};

// A subposet: the retained elements (indices into the host, ascending) and the
// host order restricted to them, renumbered 0..k-1 in the same sequence.
struct Subposet {
  std::vector<std::size_t> members;
  Poset order;
};

Subposet restrict(const Poset& p, std::span<const std::size_t> members);

// An interval endpoint: an antichain of the host, or the artificial bottom/top.
struct Endpoint {
  enum class Kind { kBottom, kTop, kSet };
  Kind kind = Kind::kSet;
  Antichain members;

  static Endpoint bottom() { return {Kind::kBottom, {}}; }
  static Endpoint top() { return {Kind::kTop, {}}; }
  static Endpoint of(Antichain a) { return {Kind::kSet, std::move(a)}; }
};

enum class Bounds { kClosed, kOpenLeft, kOpenRight, kOpen };

// Elements x with A <= x <= B (some a <= x, x <= some b), with the endpoint
// antichains removed according to `bounds`. The host should be closed.
// Throws ValidationError if an endpoint is not an antichain of p.
Subposet interval(const Poset& p, const Endpoint& a, const Endpoint& b, Bounds bounds);
Subposet prefix(const Poset& p, const Antichain& a);
Subposet prefix_open(const Poset& p, const Antichain& a);

// Maximal antichains of a closed order, sorted. Throws SizeError above 25 elements.
std::vector<Antichain> maximal_antichains(const Poset& p);
// All antichains (including empty) of a closed order; intended for oracles.
std::vector<Antichain> all_antichains(const Poset& p, std::size_t cap = 1'000'000);

// Calls visit(sequence) for every topological order; stops early if visit
// returns false. Returns false iff stopped early. Throws SizeError once more
// than `cap` sequences have been produced.
bool for_each_linearization(const Poset& p, const std::function<bool(const std::vector<std::size_t>&)>& visit,
                            std::size_t cap = 1'000'000);
std::vector<std::vector<std::size_t>> linearizations(const Poset& p, std::size_t cap = 100'000);

}  // namespace rcnu
