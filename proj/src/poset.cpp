#include "rcnu/poset.hpp"

#include <algorithm>
#include <bit>

#include "rcnu/errors.hpp"

namespace rcnu {

Poset::Poset(std::size_t n) : n_(n), rows_(n, std::vector<std::uint64_t>((n + 63) / 64, 0)) {}

Poset::Poset(std::size_t n, std::span<const OrderPair> pairs) : Poset(n) {
  for (const auto& [a, b] : pairs) add(a, b);
}

void Poset::add(std::size_t a, std::size_t b) {
  if (a == b) throw CycleError("order pair relates element " + std::to_string(a) + " to itself");
  rows_[a][b >> 6] |= std::uint64_t{1} << (b & 63);
}

void Poset::remove(std::size_t a, std::size_t b) { rows_[a][b >> 6] &= ~(std::uint64_t{1} << (b & 63)); }

std::vector<OrderPair> Poset::pairs() const {
  std::vector<OrderPair> out;
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (precedes(a, b)) out.emplace_back(a, b);
  return out;
}

std::size_t Poset::pair_count() const {
  std::size_t c = 0;
  for (const auto& row : rows_)
    for (auto w : row) c += std::popcount(w);
  return c;
}

Poset Poset::closure() const {
  Poset out = *this;
  const std::size_t words = (n_ + 63) / 64;
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!out.precedes(i, k)) continue;
      auto& ri = out.rows_[i];
      const auto& rk = out.rows_[k];
      for (std::size_t w = 0; w < words; ++w) ri[w] |= rk[w];
    }
  }
  for (std::size_t i = 0; i < n_; ++i)
    if (out.precedes(i, i)) throw CycleError("order contains a cycle through element " + std::to_string(i));
  return out;
}

bool Poset::is_transitively_closed() const {
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b) {
      if (!precedes(a, b)) continue;
      for (std::size_t w = 0; w < rows_[b].size(); ++w)
        if ((rows_[b][w] & ~rows_[a][w]) != 0) return false;
    }
  return true;
}

bool Poset::is_acyclic() const {
  try {
    (void)topological_order();
    return true;
  } catch (const CycleError&) {
    return false;
  }
}

bool Poset::is_total() const {
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = a + 1; b < n_; ++b)
      if (!comparable(a, b)) return false;
  return true;
}

Poset Poset::reduction() const {
  Poset out(n_);
  const std::size_t words = (n_ + 63) / 64;
  for (std::size_t a = 0; a < n_; ++a) {
    std::vector<std::uint64_t> covered(words, 0);
    for (std::size_t c = 0; c < n_; ++c)
      if (precedes(a, c))
        for (std::size_t w = 0; w < words; ++w) covered[w] |= rows_[c][w];
    for (std::size_t w = 0; w < words; ++w) out.rows_[a][w] = rows_[a][w] & ~covered[w];
  }
  return out;
}

std::vector<std::size_t> Poset::successors(std::size_t a) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < n_; ++b)
    if (precedes(a, b)) out.push_back(b);
  return out;
}

std::vector<std::size_t> Poset::predecessors(std::size_t b) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < n_; ++a)
    if (precedes(a, b)) out.push_back(a);
  return out;
}

Antichain Poset::minimal() const {
  Antichain out;
  for (std::size_t x = 0; x < n_; ++x) {
    bool has_pred = false;
    for (std::size_t y = 0; y < n_ && !has_pred; ++y) has_pred = precedes(y, x);
    if (!has_pred) out.push_back(x);
  }
  return out;
}

Antichain Poset::maximal() const {
  Antichain out;
  for (std::size_t x = 0; x < n_; ++x) {
    bool has_succ = false;
    for (auto w : rows_[x]) has_succ = has_succ || w != 0;
    if (!has_succ) out.push_back(x);
  }
  return out;
}

bool Poset::is_antichain(std::span<const std::size_t> members) const {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] >= n_) return false;
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (members[i] == members[j] || comparable(members[i], members[j])) return false;
  }
  return true;
}

std::vector<std::size_t> Poset::topological_order() const {
  std::vector<std::size_t> indegree(n_, 0);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (precedes(a, b)) ++indegree[b];
  std::vector<std::size_t> out;
  std::vector<bool> done(n_, false);
  out.reserve(n_);
  while (out.size() < n_) {
    std::size_t pick = n_;
    for (std::size_t x = 0; x < n_; ++x)
      if (!done[x] && indegree[x] == 0) {
        pick = x;
        break;
      }
    if (pick == n_) throw CycleError("order contains a cycle");
    done[pick] = true;
    out.push_back(pick);
    for (std::size_t b = 0; b < n_; ++b)
      if (precedes(pick, b)) --indegree[b];
  }
  return out;
}

Subposet restrict(const Poset& p, std::span<const std::size_t> members) {
  Subposet out;
  out.members.assign(members.begin(), members.end());
  std::sort(out.members.begin(), out.members.end());
  out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
  out.order = Poset(out.members.size());
  for (std::size_t i = 0; i < out.members.size(); ++i)
    for (std::size_t j = 0; j < out.members.size(); ++j)
      if (p.precedes(out.members[i], out.members[j])) out.order.add(i, j);
  return out;
}

Subposet interval(const Poset& p, const Endpoint& a, const Endpoint& b, Bounds bounds) {
  for (const Endpoint* e : {&a, &b})
    if (e->kind == Endpoint::Kind::kSet && !p.is_antichain(e->members))
      throw ValidationError("interval endpoint is not an antichain of the poset");
  std::vector<std::size_t> members;
  for (std::size_t x = 0; x < p.size(); ++x) {
    bool above = a.kind != Endpoint::Kind::kSet ||
                 std::any_of(a.members.begin(), a.members.end(), [&](std::size_t m) { return p.preceq(m, x); });
    bool below = b.kind != Endpoint::Kind::kSet ||
                 std::any_of(b.members.begin(), b.members.end(), [&](std::size_t m) { return p.preceq(x, m); });
    if (a.kind == Endpoint::Kind::kTop || b.kind == Endpoint::Kind::kBottom) above = below = false;
    if (!above || !below) continue;
    const bool drop_left = (bounds == Bounds::kOpenLeft || bounds == Bounds::kOpen) &&
                           std::find(a.members.begin(), a.members.end(), x) != a.members.end();
    const bool drop_right = (bounds == Bounds::kOpenRight || bounds == Bounds::kOpen) &&
                            std::find(b.members.begin(), b.members.end(), x) != b.members.end();
    if (!drop_left && !drop_right) members.push_back(x);
  }
  return restrict(p, members);
}

Subposet prefix(const Poset& p, const Antichain& a) {
  return interval(p, Endpoint::bottom(), Endpoint::of(a), Bounds::kClosed);
}

Subposet prefix_open(const Poset& p, const Antichain& a) {
  return interval(p, Endpoint::bottom(), Endpoint::of(a), Bounds::kOpenRight);
}

namespace {

using Mask = std::uint32_t;

void bron_kerbosch(Mask r, Mask candidates, Mask excluded, const std::vector<Mask>& adj,
                   std::vector<Antichain>& out) {
  if (candidates == 0 && excluded == 0) {
    Antichain a;
    for (std::size_t i = 0; i < 32; ++i)
      if ((r >> i) & 1U) a.push_back(i);
    out.push_back(std::move(a));
    return;
  }
  const Mask both = candidates | excluded;
  const int pivot = std::countr_zero(both);
  Mask todo = candidates & ~adj[pivot];
  while (todo != 0) {
    const int v = std::countr_zero(todo);
    const Mask bit = Mask{1} << v;
    bron_kerbosch(r | bit, candidates & adj[v], excluded & adj[v], adj, out);
    candidates &= ~bit;
    excluded |= bit;
    todo &= ~bit;
  }
}

}  // namespace

std::vector<Antichain> maximal_antichains(const Poset& p) {
  if (p.size() > 25)
    throw SizeError("maximal antichain enumeration limited to 25 elements, got " + std::to_string(p.size()));
  std::vector<Antichain> out;
  if (p.size() == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<Mask> adj(p.size(), 0);
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = 0; b < p.size(); ++b)
      if (p.concurrent(a, b)) adj[a] |= Mask{1} << b;
  const Mask all = p.size() == 32 ? ~Mask{0} : ((Mask{1} << p.size()) - 1);
  bron_kerbosch(0, all, 0, adj, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Antichain> all_antichains(const Poset& p, std::size_t cap) {
  std::vector<Antichain> out;
  Antichain current;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    if (out.size() >= cap) throw SizeError("antichain enumeration exceeded cap");
    out.push_back(current);
    for (std::size_t x = next; x < p.size(); ++x) {
      if (std::any_of(current.begin(), current.end(), [&](std::size_t y) { return p.comparable(x, y); })) continue;
      current.push_back(x);
      rec(x + 1);
      current.pop_back();
    }
  };
  rec(0);
  return out;
}

bool for_each_linearization(const Poset& p, const std::function<bool(const std::vector<std::size_t>&)>& visit,
                            std::size_t cap) {
  const std::size_t n = p.size();
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (p.precedes(a, b)) ++pending[b];
  std::vector<bool> used(n, false);
  std::vector<std::size_t> seq;
  seq.reserve(n);
  std::size_t produced = 0;
  std::function<bool()> rec = [&]() -> bool {
    if (seq.size() == n) {
      if (++produced > cap) throw SizeError("linearization enumeration exceeded cap");
      return visit(seq);
    }
    bool any = false;
    for (std::size_t x = 0; x < n; ++x) {
      if (used[x] || pending[x] != 0) continue;
      any = true;
      used[x] = true;
      seq.push_back(x);
      for (std::size_t b = 0; b < n; ++b)
        if (p.precedes(x, b)) --pending[b];
      const bool keep_going = rec();
      for (std::size_t b = 0; b < n; ++b)
        if (p.precedes(x, b)) ++pending[b];
      seq.pop_back();
      used[x] = false;
      if (!keep_going) return false;
    }
    if (!any) throw CycleError("order contains a cycle");
    return true;
  };
  return rec();
}

std::vector<std::vector<std::size_t>> linearizations(const Poset& p, std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  for_each_linearization(
      p,
      [&](const std::vector<std::size_t>& s) {
        out.push_back(s);
        return true;
      },
      cap);
  return out;
}

}  // namespace rcnu
