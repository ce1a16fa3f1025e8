#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <tuple>

#include "rcnu/align.hpp"

namespace rcnu {
namespace {

class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : adj_(n), level_(n), iter_(n) {}

  void add_edge(std::size_t a, std::size_t b, std::int64_t cap) {
    adj_[a].push_back({b, adj_[b].size(), cap});
    adj_[b].push_back({a, adj_[a].size() - 1, 0});
  }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (auto f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
    }
    return flow;
  }

  // After run(): nodes reachable from s in the residual graph.
  std::vector<bool> source_side(std::size_t s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (const auto& e : adj_[v])
        if (e.cap > 0 && !seen[e.to]) {
          seen[e.to] = true;
          stack.push_back(e.to);
        }
    }
    return seen;
  }

 private:
  struct Edge {
    std::size_t to, rev;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      for (const auto& e : adj_[v])
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t v, std::size_t t, std::int64_t f) {
    if (v == t) return f;
    for (auto& i = iter_[v]; i < adj_[v].size(); ++i) {
      auto& e = adj_[v][i];
      if (e.cap <= 0 || level_[e.to] != level_[v] + 1) continue;
      if (auto d = dfs(e.to, t, std::min(f, e.cap)); d > 0) {
        e.cap -= d;
        adj_[e.to][e.rev].cap += d;
        return d;
      }
    }
    return 0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

// Maximum of sum(weight) over subsets of `free` closed under predecessors
// (within free). Returns the value and fills `chosen`.
std::int64_t max_closure(const std::vector<std::size_t>& free, const std::vector<std::int64_t>& weight,
                         const Poset& order, std::vector<std::size_t>& chosen) {
  const std::size_t n = free.size(), s = n, t = n + 1;
  MaxFlow flow(n + 2);
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::int64_t positive = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (weight[a] > 0) {
      flow.add_edge(s, a, weight[a]);
      positive += weight[a];
    } else if (weight[a] < 0) {
      flow.add_edge(a, t, -weight[a]);
    }
    for (std::size_t b = 0; b < n; ++b)
      if (order.precedes(free[b], free[a])) flow.add_edge(a, b, kInf);
  }
  const auto cut = flow.run(s, t);
  const auto side = flow.source_side(s);
  chosen.clear();
  for (std::size_t a = 0; a < n; ++a)
    if (side[a]) chosen.push_back(free[a]);
  return positive - cut;
}

using TokenKey = std::tuple<std::size_t, std::uint32_t, std::uint32_t>;

std::map<TokenKey, std::int64_t> effect(const RcNuNet& net, const Move& mv) {
  std::map<TokenKey, std::int64_t> out;
  for (const auto& d : consumed(net, *mv.transition, mv.mode))
    out[{d.place, d.token.case_id.id(), d.token.resource.id()}] -= d.count;
  for (const auto& d : produced(net, *mv.transition, mv.mode))
    out[{d.place, d.token.case_id.id(), d.token.resource.id()}] += d.count;
  return out;
}

std::int64_t mentions_count(const ColoredMarking& m, Name x) {
  std::int64_t n = 0;
  for (const auto& bag : m.places)
    for (const auto& [tok, c] : bag)
      if (tok.case_id == x || tok.resource == x) n += c;
  return n;
}

std::string static_mode_problem(const RcNuNet& net, const Move& mv) {
  const auto& tr = net.transition(*mv.transition);
  if (mv.mode.case_values.size() != tr.case_vars.size() || mv.mode.resource_values.size() != tr.resource_vars.size())
    return "mode arity does not match transition " + tr.name;
  for (const auto* vals : {&mv.mode.case_values, &mv.mode.resource_values}) {
    for (std::size_t i = 0; i < vals->size(); ++i) {
      if ((*vals)[i].is_epsilon()) return "variable bound to epsilon in " + describe(net, *mv.transition, mv.mode);
      for (std::size_t j = i + 1; j < vals->size(); ++j)
        if ((*vals)[i] == (*vals)[j]) return "mode is not injective in " + describe(net, *mv.transition, mv.mode);
    }
  }
  return {};
}

std::string move_text(const RcNuNet& net, const EventLog& log, const Alignment& al, std::size_t i) {
  const auto& mv = al.moves[i];
  std::string s = "move " + std::to_string(i) + " (" + to_string(mv.kind);
  if (mv.transition) s += " " + describe(net, *mv.transition, mv.mode);
  if (mv.event) s += " event " + log.event(*mv.event).activity + "@" + log.event(*mv.event).case_id.str();
  return s + ")";
}

}  // namespace

ValidityReport is_valid_alignment(const RcNuNet& net, const EventLog& log, const Alignment& al,
                                  const ColoredMarking& start, const ColoredMarking& goal, ValidityCheck method) {
  ValidityReport r;
  auto fail = [&r](std::string why) {
    r.valid = false;
    r.witness = std::move(why);
    return r;
  };
  const std::size_t n = al.moves.size();
  if (al.order.size() != n) return fail("order size does not match move count");
  if (!al.order.is_acyclic() || !al.order.is_transitively_closed())
    return fail("move order is not a transitively closed acyclic relation");

  // Log projection.
  std::vector<std::size_t> move_of(log.size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mv = al.moves[i];
    const bool needs_event = mv.kind != MoveKind::kModel, needs_firing = mv.kind != MoveKind::kLog;
    if (needs_event != mv.event.has_value() || needs_firing != mv.transition.has_value())
      return fail(move_text(net, log, al, i) + " has the wrong shape for its kind");
    if (mv.event) {
      if (*mv.event >= log.size()) return fail(move_text(net, log, al, i) + " refers to an unknown event");
      if (move_of[*mv.event] != n)
        return fail("event " + std::to_string(*mv.event) + " appears in more than one move");
      move_of[*mv.event] = i;
    }
    if (mv.transition) {
      if (*mv.transition >= net.transitions().size()) return fail(move_text(net, log, al, i) + " names no transition");
      if (auto p = static_mode_problem(net, mv); !p.empty()) return fail(p);
    }
    if (mv.kind == MoveKind::kSync && !sync_compatible(net, log.event(*mv.event), *mv.transition, mv.mode))
      return fail(move_text(net, log, al, i) + " pairs an event with an incompatible firing");
  }
  for (std::size_t e = 0; e < log.size(); ++e)
    if (move_of[e] == n)
      return fail("event " + log.event(e).activity + "@" + log.event(e).case_id.str() + " (index " +
                  std::to_string(e) + ") is missing from the alignment");
  for (const auto& [a, b] : log.order().pairs())
    if (!al.order.precedes(move_of[a], move_of[b]))
      return fail("log order " + std::to_string(a) + " < " + std::to_string(b) + " is not kept by the alignment");

  // Firings.
  std::vector<std::size_t> firing;
  for (std::size_t i = 0; i < n; ++i)
    if (al.moves[i].transition) firing.push_back(i);

  const bool exhaustive =
      method == ValidityCheck::kExhaustive || (method == ValidityCheck::kAuto && firing.size() <= 8);
  if (exhaustive) {
    const auto sub = restrict(al.order, firing);
    for_each_linearization(sub.order, [&](const std::vector<std::size_t>& lin) {
      ColoredMarking m = start;
      for (std::size_t k = 0; k < lin.size(); ++k) {
        const auto i = sub.members[lin[k]];
        const auto& mv = al.moves[i];
        if (!mode_enabled(net, m, *mv.transition, mv.mode)) {
          r.valid = false;
          r.witness = move_text(net, log, al, i) + " is not enabled in some linearization";
          for (std::size_t q = 0; q < k; ++q) r.prefix.push_back(sub.members[lin[q]]);
          return false;
        }
        m = fire_mode(net, m, *mv.transition, mv.mode);
      }
      if (!(m == goal)) {
        r.valid = false;
        r.witness = "firings do not end in the final marking";
        return false;
      }
      return true;
    });
    return r;
  }

  const auto end = pseudo_fire(net, start, al, firing);
  if (!(end == goal)) return fail("firings do not end in the final marking");

  std::vector<std::map<TokenKey, std::int64_t>> effects(n);
  for (auto i : firing) effects[i] = effect(net, al.moves[i]);
  std::map<TokenKey, std::int64_t> start_counts;
  for (std::size_t p = 0; p < start.places.size(); ++p)
    for (const auto& [tok, c] : start.places[p]) start_counts[{p, tok.case_id.id(), tok.resource.id()}] = c;

  for (auto i : firing) {
    const auto& mv = al.moves[i];
    std::vector<std::size_t> forced, free;
    for (auto j : firing) {
      if (j == i) continue;
      if (al.order.precedes(j, i)) forced.push_back(j);
      else if (!al.order.precedes(i, j)) free.push_back(j);
    }
    std::map<TokenKey, std::int64_t> need;
    for (const auto& d : consumed(net, *mv.transition, mv.mode))
      need[{d.place, d.token.case_id.id(), d.token.resource.id()}] += d.count;
    for (const auto& [tok, amount] : need) {
      auto get = [&](std::size_t j) {
        auto it = effects[j].find(tok);
        return it == effects[j].end() ? 0 : it->second;
      };
      std::int64_t base = start_counts.count(tok) ? start_counts[tok] : 0;
      for (auto j : forced) base += get(j);
      std::vector<std::size_t> touching;
      std::vector<std::int64_t> w;
      for (auto j : free)
        if (auto v = get(j); v != 0) {
          touching.push_back(j);
          w.push_back(-v);
        }
      std::vector<std::size_t> chosen;
      const auto worst_drop = max_closure(touching, w, al.order, chosen);
      if (base - worst_drop < amount) {
        r.valid = false;
        r.witness = move_text(net, log, al, i) + " can lack a token on place " +
                    net.place(std::get<0>(tok)).name + " in some linearization";
        r.prefix = forced;
        // Close the chosen set under predecessors among the free moves.
        for (auto c : chosen)
          for (auto j : free)
            if (al.order.preceq(j, c)) r.prefix.push_back(j);
        std::sort(r.prefix.begin(), r.prefix.end());
        r.prefix.erase(std::unique(r.prefix.begin(), r.prefix.end()), r.prefix.end());
        return r;
      }
    }
    const auto& tr = net.transition(*mv.transition);
    std::vector<Name> fresh;
    for (std::size_t v = 0; v < tr.case_vars.size(); ++v)
      if (tr.case_vars[v].fresh) fresh.push_back(mv.mode.case_values[v]);
    for (std::size_t v = 0; v < tr.resource_vars.size(); ++v)
      if (tr.resource_vars[v].fresh) fresh.push_back(mv.mode.resource_values[v]);
    for (Name x : fresh) {
      auto count_x = [&](std::size_t j) {
        std::int64_t c = 0;
        for (const auto& [k, v] : effects[j])
          if (std::get<1>(k) == x.id() || std::get<2>(k) == x.id()) c += v;
        return c;
      };
      std::int64_t base = mentions_count(start, x);
      for (auto j : forced) base += count_x(j);
      std::vector<std::size_t> touching;
      std::vector<std::int64_t> w;
      for (auto j : free)
        if (auto v = count_x(j); v != 0) {
          touching.push_back(j);
          w.push_back(v);
        }
      std::vector<std::size_t> chosen;
      if (base + max_closure(touching, w, al.order, chosen) > 0)
        return fail(move_text(net, log, al, i) + " may create name " + x.str() + " while it is still in use");
    }
  }
  return r;
}

ValidityReport is_valid_alignment(const RcNuNet& net, const EventLog& log, const Alignment& al) {
  return is_valid_alignment(net, log, al, net.initial(), net.final_marking());
}

}  // namespace rcnu
