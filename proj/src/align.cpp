#include "rcnu/align.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

namespace rcnu {

std::string to_string(MoveKind k) {
  switch (k) {
    case MoveKind::kLog: return "log";
    case MoveKind::kModel: return "model";
    case MoveKind::kSync: return "sync";
  }
  return "?";
}

std::int64_t move_cost(const RcNuNet& net, const Move& m, const CostTable& costs) {
  switch (m.kind) {
    case MoveKind::kSync: return costs.sync;
    case MoveKind::kLog: return costs.visible;
    case MoveKind::kModel: return net.transition(*m.transition).label ? costs.visible : costs.tau;
  }
  return 0;
}

std::int64_t alignment_cost(const RcNuNet& net, const Alignment& al, const CostTable& costs) {
  std::int64_t c = 0;
  for (const auto& m : al.moves) c += move_cost(net, m, costs);
  return c;
}

PseudoMarking pseudo_fire(const RcNuNet& net, const ColoredMarking& start, const Alignment& al,
                          std::span<const std::size_t> members) {
  PseudoMarking out = start;
  for (auto i : members) {
    const auto& mv = al.moves.at(i);
    if (!mv.transition) continue;
    for (const auto& d : consumed(net, *mv.transition, mv.mode)) out.places[d.place].add(d.token, -d.count);
    for (const auto& d : produced(net, *mv.transition, mv.mode)) out.places[d.place].add(d.token, d.count);
  }
  return out;
}

PseudoMarking pseudo_fire(const RcNuNet& net, const Alignment& al, std::span<const std::size_t> members) {
  return pseudo_fire(net, net.initial(), al, members);
}

PseudoMarking antichain_marking(const RcNuNet& net, const Alignment& al, const Antichain& g, Side side,
                                const ColoredMarking* start) {
  if (!al.order.is_antichain(g)) throw ValidationError("moves do not form an antichain");
  const auto sub = side == Side::kPre ? prefix_open(al.order, g) : prefix(al.order, g);
  return pseudo_fire(net, start ? *start : net.initial(), al, sub.members);
}

SyncProduct build_sync_product(const RcNuNet& model, const EventLog& log) {
  SyncProduct prod;
  prod.model = &model;
  prod.log = &log;
  prod.log_net = build_log_net(log);
  std::set<std::string> missing;
  for (std::size_t e = 0; e < log.size(); ++e) {
    bool any = false;
    for (std::size_t t = 0; t < model.transitions().size(); ++t)
      if (model.transition(t).label == log.event(e).activity) {
        prod.sync.push_back({e, t});
        any = true;
      }
    if (!any) missing.insert(log.event(e).activity);
  }
  for (const auto& a : missing)
    prod.warnings.push_back("activity '" + a + "' does not label any model transition; its events can only be log moves");
  return prod;
}

bool sync_compatible(const RcNuNet& net, const Event& e, std::size_t t, const Mode& mode) {
  if (net.transition(t).label != e.activity) return false;
  const auto c = firing_case(net, t, mode);
  if (!c || *c != e.case_id) return false;
  for (Name v : mode.case_values)
    if (v != e.case_id) return false;
  return resource_demand(net, t, mode) == e.resources;
}

std::optional<ColoredMarking> replay(const RcNuNet& net, const ColoredMarking& start, const std::vector<Move>& moves,
                                     std::span<const std::size_t> sequence) {
  ColoredMarking m = start;
  for (auto i : sequence) {
    const auto& mv = moves.at(i);
    if (!mv.transition) continue;
    if (!mode_enabled(net, m, *mv.transition, mv.mode)) return std::nullopt;
    m = fire_mode(net, m, *mv.transition, mv.mode);
  }
  return m;
}

namespace {

struct State {
  ColoredMarking marking;
  std::vector<std::uint64_t> fired;

  std::size_t hash() const {
    std::size_t h = marking.hash();
    for (auto w : fired) h ^= std::hash<std::uint64_t>()(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
  bool has(std::size_t e) const { return (fired[e >> 6] >> (e & 63)) & 1U; }
  void set(std::size_t e) { fired[e >> 6] |= std::uint64_t{1} << (e & 63); }
  friend bool operator==(const State&, const State&) = default;
};

struct Node {
  State state;
  std::size_t parent;
  Move move;
  std::int64_t g;
};

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

std::vector<Name> default_pool(const EventLog& log, std::size_t spares) {
  std::vector<Name> pool = log.cases();
  for (std::size_t i = 1; i <= spares; ++i) pool.emplace_back("nu_spare" + std::to_string(i));
  return pool;
}

bool cases_allowed(const Mode& mode, const std::optional<std::vector<Name>>& allowed) {
  if (!allowed) return true;
  for (Name c : mode.case_values)
    if (std::find(allowed->begin(), allowed->end(), c) == allowed->end()) return false;
  return true;
}

}  // namespace

AlignmentResult optimal_alignment(const SyncProduct& prod, const ColoredMarking& start, const ColoredMarking& goal,
                                  const SearchOptions& options) {
  const RcNuNet& net = *prod.model;
  const EventLog& log = *prod.log;
  const std::size_t n_events = log.size();
  const std::vector<Name> pool = options.fresh_pool ? *options.fresh_pool : default_pool(log, options.fresh_spares);

  std::vector<std::vector<std::size_t>> preds(n_events);
  for (std::size_t e = 0; e < n_events; ++e) preds[e] = log.order().predecessors(e);
  std::vector<std::vector<std::size_t>> sync_of(n_events);
  for (const auto& sp : prod.sync) sync_of[sp.event].push_back(sp.transition);

  std::vector<Node> nodes;
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
  using Entry = std::tuple<std::int64_t, std::size_t, std::size_t>;  // cost, sequence number, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::size_t seq = 0;
  SearchStats stats;

  auto lookup = [&](const State& s, std::size_t h) -> std::optional<std::size_t> {
    auto it = buckets.find(h);
    if (it == buckets.end()) return std::nullopt;
    for (auto id : it->second)
      if (nodes[id].state == s) return id;
    return std::nullopt;
  };

  auto offer = [&](State s, std::size_t parent, Move mv, std::int64_t g) {
    const std::size_t h = s.hash();
    if (auto id = lookup(s, h)) {
      if (g < nodes[*id].g) {
        nodes[*id].g = g;
        nodes[*id].parent = parent;
        nodes[*id].move = std::move(mv);
        open.emplace(g, seq++, *id);
      }
      return;
    }
    if (nodes.size() >= options.node_budget) {
      stats.stored = nodes.size();
      stats.frontier = open.size();
      stats.frontier_cost = open.empty() ? g : std::get<0>(open.top());
      throw SearchExhausted("alignment search exhausted its budget of " + std::to_string(options.node_budget) +
                                " states (expanded " + std::to_string(stats.expanded) + ", frontier " +
                                std::to_string(stats.frontier) + ", lowest frontier cost " +
                                std::to_string(stats.frontier_cost) + ")",
                            stats);
    }
    nodes.push_back({std::move(s), parent, std::move(mv), g});
    buckets[h].push_back(nodes.size() - 1);
    open.emplace(g, seq++, nodes.size() - 1);
  };

  State init{start, std::vector<std::uint64_t>((n_events + 63) / 64, 0)};
  offer(std::move(init), kNoParent, Move{}, 0);

  std::optional<std::size_t> found;
  while (!open.empty()) {
    const auto [g, s_no, id] = open.top();
    open.pop();
    if (g > nodes[id].g) continue;
    const State state = nodes[id].state;
    bool all_fired = true;
    for (std::size_t e = 0; e < n_events && all_fired; ++e) all_fired = state.has(e);
    if (all_fired && state.marking == goal) {
      found = id;
      break;
    }
    ++stats.expanded;

    std::vector<std::size_t> ready;
    for (std::size_t e = 0; e < n_events; ++e) {
      if (state.has(e)) continue;
      bool ok = true;
      for (auto p : preds[e]) ok = ok && state.has(p);
      if (ok) ready.push_back(e);
    }
    for (auto e : ready) {
      State next = state;
      next.set(e);
      Move mv{MoveKind::kLog, e, std::nullopt, {}};
      const auto c = g + move_cost(net, mv, options.costs);
      offer(std::move(next), id, std::move(mv), c);
    }
    for (std::size_t t = 0; t < net.transitions().size(); ++t)
      for (auto& mode : enabled_modes(net, state.marking, t, pool)) {
        if (!cases_allowed(mode, options.allowed_cases)) continue;
        State next{fire_mode(net, state.marking, t, mode), state.fired};
        Move mv{MoveKind::kModel, std::nullopt, t, std::move(mode)};
        const auto c = g + move_cost(net, mv, options.costs);
        offer(std::move(next), id, std::move(mv), c);
      }
    for (auto e : ready) {
      const Event& ev = log.event(e);
      for (auto t : sync_of[e])
        for (auto& mode : enabled_modes(net, state.marking, t, pool, ev.case_id)) {
          if (!sync_compatible(net, ev, t, mode) || !cases_allowed(mode, options.allowed_cases)) continue;
          State next{fire_mode(net, state.marking, t, mode), state.fired};
          next.set(e);
          Move mv{MoveKind::kSync, e, t, std::move(mode)};
          const auto c = g + move_cost(net, mv, options.costs);
          offer(std::move(next), id, std::move(mv), c);
        }
    }
  }
  stats.stored = nodes.size();
  stats.frontier = open.size();
  if (!found) throw SearchExhausted("no alignment exists: goal unreachable", stats);

  std::vector<Move> moves;
  for (auto id = *found; nodes[id].parent != kNoParent; id = nodes[id].parent) moves.push_back(nodes[id].move);
  std::reverse(moves.begin(), moves.end());

  std::int64_t taus = 0;
  for (const auto& mv : moves)
    if (mv.kind == MoveKind::kModel && !net.transition(*mv.transition).label) ++taus;
  if (options.costs.tau > 0 && taus * options.costs.tau >= options.costs.visible)
    throw Error("optimal alignment uses " + std::to_string(taus) +
                " silent moves; the integer cost scaling no longer separates them from visible moves");

  AlignmentResult out;
  out.cost = nodes[*found].g;
  out.stats = stats;
  out.alignment = order_moves(net, log, start, std::move(moves), options.order);
  out.sequence.resize(out.alignment.moves.size());
  for (std::size_t i = 0; i < out.sequence.size(); ++i) out.sequence[i] = i;
  return out;
}

AlignmentResult optimal_alignment(const RcNuNet& net, const EventLog& log, const SearchOptions& options) {
  const auto prod = build_sync_product(net, log);
  return optimal_alignment(prod, net.initial(), net.final_marking(), options);
}

Alignment order_moves(const RcNuNet& net, const EventLog& log, const ColoredMarking& start, std::vector<Move> sequence,
                      OrderStyle style) {
  const std::size_t n = sequence.size();
  Alignment al{std::move(sequence), Poset(n)};
  if (style == OrderStyle::kSequential) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) al.order.add(i, j);
    return al;
  }
  constexpr std::size_t kInitial = static_cast<std::size_t>(-1);
  using Key = std::tuple<std::size_t, std::uint32_t, std::uint32_t>;
  std::map<Key, std::deque<std::size_t>> producers;
  auto key = [](std::size_t p, const Token& t) { return Key{p, t.case_id.id(), t.resource.id()}; };
  auto push = [&](const Key& k, std::int64_t count, std::size_t who) {
    auto& q = producers[k];
    q.insert(q.end(), static_cast<std::size_t>(std::max<std::int64_t>(count, 0)), who);
  };
  for (std::size_t p = 0; p < start.places.size(); ++p)
    for (const auto& [tok, cnt] : start.places[p]) push(key(p, tok), cnt, kInitial);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mv = al.moves[i];
    if (!mv.transition) continue;
    const auto& tr = net.transition(*mv.transition);
    for (const auto& d : consumed(net, *mv.transition, mv.mode)) {
      auto& q = producers[key(d.place, d.token)];
      for (std::int64_t k = 0; k < d.count && !q.empty(); ++k) {
        if (q.front() != kInitial) al.order.add(q.front(), i);
        q.pop_front();
      }
    }
    for (const auto& d : produced(net, *mv.transition, mv.mode)) push(key(d.place, d.token), d.count, i);
    std::vector<Name> fresh;
    for (std::size_t v = 0; v < tr.case_vars.size(); ++v)
      if (tr.case_vars[v].fresh) fresh.push_back(mv.mode.case_values[v]);
    for (std::size_t v = 0; v < tr.resource_vars.size(); ++v)
      if (tr.resource_vars[v].fresh) fresh.push_back(mv.mode.resource_values[v]);
    for (Name x : fresh)
      for (std::size_t j = 0; j < i; ++j) {
        const auto& mj = al.moves[j];
        const bool mentions =
            std::find(mj.mode.case_values.begin(), mj.mode.case_values.end(), x) != mj.mode.case_values.end() ||
            std::find(mj.mode.resource_values.begin(), mj.mode.resource_values.end(), x) !=
                mj.mode.resource_values.end();
        if (mentions) al.order.add(j, i);
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && al.moves[i].event && al.moves[j].event &&
          log.order().precedes(*al.moves[i].event, *al.moves[j].event))
        al.order.add(i, j);
  al.order = al.order.closure();
  return al;
}

}  // namespace rcnu
