#include "rcnu/approx.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <set>
#include <thread>

namespace rcnu {
namespace {

// Runs job(0..count-1) on a few worker threads; rethrows the first failure.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w)
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<std::size_t> case_events(const EventLog& log, Name c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < log.size(); ++i)
    if (log.event(i).case_id == c) out.push_back(i);
  return out;
}

// Events `keep` (ascending) with the order restricted to them.
EventLog sub_log(const EventLog& log, const std::vector<std::size_t>& keep) {
  std::vector<Event> events;
  for (auto i : keep) events.push_back(log.event(i));
  Poset order(keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b)
      if (log.order().precedes(keep[a], keep[b])) order.add(a, b);
  return EventLog(std::move(events), std::move(order), log.roles());
}

using Mask = std::vector<bool>;

// Everything between two members of s.
Mask convex_hull(const Mask& s, const Poset& p) {
  const std::size_t n = s.size();
  Mask up(n, false), down(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    if (!s[a]) continue;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == a || p.precedes(a, m)) up[m] = true;
      if (m == a || p.precedes(m, a)) down[m] = true;
    }
  }
  Mask out(n, false);
  for (std::size_t m = 0; m < n; ++m) out[m] = up[m] && down[m];
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Node of each move once every group is contracted to a single node:
// groups take ids 0..groups-1, other moves follow.
std::vector<std::size_t> contracted_nodes(const std::vector<int>& group_of, std::size_t groups) {
  std::vector<std::size_t> node(group_of.size());
  std::size_t next = groups;
  for (std::size_t m = 0; m < group_of.size(); ++m) node[m] = group_of[m] >= 0 ? std::size_t(group_of[m]) : next++;
  return node;
}

// Groups of reversed-pair intervals, closed under both orders, merged until
// contracting each group leaves the new order acyclic.
std::vector<Mask> build_groups(const Poset& before, const Poset& after,
                               const std::vector<std::pair<std::size_t, std::size_t>>& reversed) {
  const std::size_t n = before.size();
  // Intervals sharing a move form one group.
  Mask in_v(n, false);
  UnionFind uf(n);
  for (const auto& [i, j] : reversed) {
    std::optional<std::size_t> first;
    for (std::size_t m = 0; m < n; ++m) {
      if (!((m == j || before.precedes(j, m)) && (m == i || before.precedes(m, i)))) continue;
      in_v[m] = true;
      if (first)
        uf.unite(*first, m);
      else
        first = m;
    }
  }
  std::vector<Mask> groups;
  std::vector<int> root_group(n, -1);
  for (std::size_t m = 0; m < n; ++m) {
    if (!in_v[m]) continue;
    const auto r = uf.find(m);
    if (root_group[r] < 0) {
      root_group[r] = int(groups.size());
      groups.emplace_back(n, false);
    }
    groups[root_group[r]][m] = true;
  }

  for (bool changed = true; changed;) {
    changed = false;
    for (auto& g : groups)
      for (;;) {
        auto h = convex_hull(convex_hull(g, before), after);
        if (h == g) break;
        g = std::move(h);
        changed = true;
      }

    UnionFind merge(groups.size());
    for (std::size_t a = 0; a < groups.size(); ++a)
      for (std::size_t b = a + 1; b < groups.size(); ++b)
        for (std::size_t m = 0; m < n; ++m)
          if (groups[a][m] && groups[b][m]) {
            merge.unite(a, b);
            break;
          }
    std::vector<int> group_of(n, -1);
    std::vector<Mask> merged;
    std::vector<int> slot(groups.size(), -1);
    for (std::size_t a = 0; a < groups.size(); ++a) {
      const auto r = merge.find(a);
      if (slot[r] < 0) {
        slot[r] = int(merged.size());
        merged.emplace_back(n, false);
      }
      for (std::size_t m = 0; m < n; ++m)
        if (groups[a][m]) merged[slot[r]][m] = true;
    }
    if (merged.size() != groups.size()) changed = true;
    groups = std::move(merged);
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::size_t m = 0; m < n; ++m)
        if (groups[g][m]) group_of[m] = int(g);

    // Reachability between contracted nodes; nodes on a common cycle fuse.
    const auto node = contracted_nodes(group_of, groups.size());
    const std::size_t nodes = groups.size() + std::count(group_of.begin(), group_of.end(), -1);
    std::vector<Mask> reach(nodes, Mask(nodes, false));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (after.precedes(a, b) && node[a] != node[b]) reach[node[a]][node[b]] = true;
    for (std::size_t k = 0; k < nodes; ++k)
      for (std::size_t i = 0; i < nodes; ++i)
        if (reach[i][k])
          for (std::size_t j = 0; j < nodes; ++j)
            if (reach[k][j]) reach[i][j] = true;
    UnionFind cyc(nodes);
    bool cyclic = false;
    for (std::size_t i = 0; i < nodes; ++i)
      if (reach[i][i])
        for (std::size_t j = 0; j < nodes; ++j)
          if (reach[i][j] && reach[j][i]) {
            cyc.unite(i, j);
            cyclic = true;
          }
    if (!cyclic) continue;
    changed = true;
    std::vector<int> fused(nodes, -1);
    std::vector<Mask> next;
    for (std::size_t m = 0; m < n; ++m) {
      const auto r = cyc.find(node[m]);
      const bool grouped = group_of[m] >= 0 || r != node[m] || reach[node[m]][node[m]];
      if (!grouped) continue;
      if (fused[r] < 0) {
        fused[r] = int(next.size());
        next.emplace_back(n, false);
      }
      next[fused[r]][m] = true;
    }
    groups = std::move(next);
  }
  std::sort(groups.begin(), groups.end(), [](const Mask& a, const Mask& b) {
    return std::find(a.begin(), a.end(), true) - a.begin() < std::find(b.begin(), b.end(), true) - b.begin();
  });
  return groups;
}

Segment make_segment(const Mask& g, const Poset& order) {
  Segment s;
  for (std::size_t m = 0; m < g.size(); ++m)
    if (g[m]) s.members.push_back(m);
  for (auto a : s.members) {
    bool has_pred = false, has_succ = false;
    for (auto b : s.members) {
      has_pred = has_pred || order.precedes(b, a);
      has_succ = has_succ || order.precedes(a, b);
    }
    if (!has_pred) s.lower.push_back(a);
    if (!has_succ) s.upper.push_back(a);
  }
  return s;
}

// Members listed so that `order` is respected, smallest index first among ties.
std::vector<std::size_t> sorted_by(const Poset& order, const std::vector<std::size_t>& members) {
  const auto sub = restrict(order, members);
  std::vector<std::size_t> out;
  for (auto i : sub.order.topological_order()) out.push_back(sub.members[i]);
  return out;
}

// Identifiers and shared places a move touches; two moves touching nothing in
// common commute.
struct Footprint {
  std::set<Name> names;
  std::set<std::size_t> places;

  bool overlaps(const Footprint& o) const {
    for (Name n : names)
      if (o.names.count(n)) return true;
    for (auto p : places)
      if (o.places.count(p)) return true;
    return false;
  }
};

Footprint footprint(const RcNuNet& net, const EventLog& log, const Move& m) {
  Footprint f;
  if (m.event) {
    const auto& e = log.event(*m.event);
    f.names.insert(e.case_id);
    for (const auto& [inst, k] : e.resources) f.names.insert(inst);
  }
  if (m.transition) {
    for (Name c : m.mode.case_values) f.names.insert(c);
    for (Name r : m.mode.resource_values) f.names.insert(r);
    auto note = [&](const std::vector<TokenDelta>& ds) {
      for (const auto& d : ds)
        if (d.token.case_id.is_epsilon() && net.place(d.place).kind == PlaceKind::kProduction) f.places.insert(d.place);
    };
    note(consumed(net, *m.transition, m.mode));
    note(produced(net, *m.transition, m.mode));
  }
  f.names.erase(Name());
  return f;
}

}  // namespace

ColoredMarking case_marking(const ColoredMarking& m, Name c) {
  ColoredMarking out(m.places.size());
  for (std::size_t p = 0; p < m.places.size(); ++p)
    for (const auto& [tok, k] : m.places[p])
      if (tok.case_id.is_epsilon() || tok.case_id == c) out.places[p].add(tok, k);
  return out;
}

std::map<Name, Alignment> align_cases(const RcNuNet& net, const EventLog& log, const SearchOptions& options) {
  const auto cases = log.cases();
  std::vector<Alignment> results(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const Name c = cases[i];
    const EventLog trace = project_case(log, c);
    const auto prod = build_sync_product(net, trace);
    SearchOptions o = options;
    o.fresh_pool = std::vector<Name>{c};
    o.allowed_cases = std::vector<Name>{c};
    o.order = OrderStyle::kSequential;
    results[i] =
        optimal_alignment(prod, case_marking(net.initial(), c), case_marking(net.final_marking(), c), o).alignment;
  });
  std::map<Name, Alignment> out;
  for (std::size_t i = 0; i < cases.size(); ++i) out.emplace(cases[i], std::move(results[i]));
  return out;
}

ComposedAlignment compose(const EventLog& log, const std::map<Name, Alignment>& per_case) {
  ComposedAlignment out;
  std::vector<OrderPair> pairs;
  const auto cases = log.cases();
  for (const auto& [c, al] : per_case)
    if (std::find(cases.begin(), cases.end(), c) == cases.end())
      throw ValidationError("alignment given for case " + c.str() + " which is not in the log");
  for (Name c : cases) {
    auto it = per_case.find(c);
    if (it == per_case.end()) throw ValidationError("no alignment for case " + c.str());
    const auto events = case_events(log, c);
    const std::size_t base = out.alignment.moves.size();
    const auto& al = it->second;
    for (std::size_t k = 0; k < al.moves.size(); ++k) {
      Move mv = al.moves[k];
      if (mv.event) mv.event = events.at(*mv.event);
      out.alignment.moves.push_back(std::move(mv));
      out.case_of.push_back(c);
      out.position.push_back(k);
    }
    for (const auto& [a, b] : al.order.pairs()) pairs.emplace_back(base + a, base + b);
  }
  const auto& moves = out.alignment.moves;
  for (std::size_t a = 0; a < moves.size(); ++a)
    for (std::size_t b = 0; b < moves.size(); ++b)
      if (moves[a].event && moves[b].event && log.order().precedes(*moves[a].event, *moves[b].event))
        pairs.emplace_back(a, b);
  try {
    out.alignment.order = Poset(moves.size(), pairs).closure();
  } catch (const CycleError& e) {
    throw Error(std::string("per-case alignments contradict the log order: ") + e.what());
  }
  return out;
}

bool violating_antichain(const RcNuNet& net, const Alignment& al, const Antichain& g) {
  const auto before = antichain_marking(net, al, g, Side::kPre);
  for (const auto& role : net.roles()) {
    if (!role.available_place) continue;
    for (const auto& [inst, cap] : role.instances) {
      std::int64_t need = 0;
      for (auto m : g)
        if (al.moves[m].transition) need += claims(net, *al.moves[m].transition, al.moves[m].mode, inst);
      if (need > 0 && before.places[*role.available_place].count(Token{Name(), inst}) < need) return true;
    }
  }
  return false;
}

bool IlpInstance::touches_resources(std::size_t i) const {
  for (std::size_t k = 0; k < instances.size(); ++k)
    if (claim[i][k] != 0 || release[i][k] != 0) return true;
  return false;
}

std::vector<int> IlpInstance::block_triangular() const {
  std::vector<int> a(program.n_vars, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (case_index[i] == case_index[j])
        a[x(i, j)] = R[i][j];
      else
        a[x(i, j)] = case_index[i] < case_index[j] ? 1 : 0;
    }
  return a;
}

std::optional<std::vector<int>> IlpInstance::greedy_schedule() const {
  // Rank by a linear extension of R, smallest index first among the minimal.
  std::vector<std::size_t> rank(n), preds(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) preds[j] += R[i][j];
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (!preds[i]) ready.insert(i);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto i = *ready.begin();
    ready.erase(ready.begin());
    rank[i] = pos;
    for (std::size_t j = 0; j < n; ++j)
      if (R[i][j] && --preds[j] == 0) ready.insert(j);
  }

  std::vector<std::int64_t> free_units(instances.size());
  for (std::size_t k = 0; k < instances.size(); ++k) free_units[k] = instances[k].capacity;
  std::vector<std::size_t> waiting(n, 0), seq;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && case_index[i] == case_index[j] && R[j][i]) ++waiting[i];
  std::vector<bool> done(n, false);
  while (seq.size() < n) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || waiting[i] || (pick && rank[*pick] < rank[i])) continue;
      bool fits = true;
      for (std::size_t k = 0; k < instances.size() && fits; ++k) fits = claim[i][k] <= free_units[k];
      if (fits) pick = i;
    }
    if (!pick) return std::nullopt;
    const auto i = *pick;
    done[i] = true;
    seq.push_back(i);
    for (std::size_t k = 0; k < instances.size(); ++k) free_units[k] += release[i][k] - claim[i][k];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && case_index[j] == case_index[i] && R[i][j]) --waiting[j];
  }

  std::vector<std::size_t> at(n);
  for (std::size_t p = 0; p < n; ++p) at[seq[p]] = p;
  std::vector<int> total(program.n_vars, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) total[x(i, j)] = at[i] < at[j] ? 1 : 0;
  // Keep only the schedule's pairs that R or the resources ask for.
  Poset kept(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && at[i] < at[j] && (R[i][j] || R[j][i] || (touches_resources(i) && touches_resources(j))))
        kept.add(i, j);
  kept = kept.closure();
  std::vector<int> sparse(program.n_vars, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sparse[x(i, j)] = kept.precedes(i, j) ? 1 : 0;
  if (check_feasible(program, sparse).ok) return sparse;
  if (check_feasible(program, total).ok) return total;
  return std::nullopt;
}

Poset IlpInstance::order_of(const std::vector<int>& assignment) const {
  Poset p(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && assignment[x(i, j)] == 1) p.add(i, j);
  return p;
}

std::int64_t IlpInstance::reversals(const std::vector<int>& assignment) const {
  std::int64_t r = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && R[j][i] && assignment[x(i, j)] == 1) ++r;
  return r;
}

namespace {
void fill_program(IlpInstance& inst, std::optional<std::int64_t> weight);
}  // namespace

IlpInstance build_ilp(const RcNuNet& net, const ComposedAlignment& comp) {
  IlpInstance inst;
  const auto& al = comp.alignment;
  const std::size_t n = inst.n = al.moves.size();
  inst.R.assign(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inst.R[i][j] = al.order.precedes(i, j) ? 1 : 0;

  for (std::size_t r = 0; r < net.roles().size(); ++r)
    for (const auto& [name, cap] : net.roles()[r].instances) inst.instances.push_back({name, r, cap});
  const std::size_t nr = inst.instances.size();
  inst.claim.assign(n, std::vector<std::int64_t>(nr, 0));
  inst.release.assign(n, std::vector<std::int64_t>(nr, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mv = al.moves[i];
    if (!mv.transition) continue;
    for (std::size_t k = 0; k < nr; ++k) {
      inst.claim[i][k] = claims(net, *mv.transition, mv.mode, inst.instances[k].name);
      inst.release[i][k] = releases(net, *mv.transition, mv.mode, inst.instances[k].name);
    }
  }

  inst.case_index.assign(n, 0);
  for (std::size_t i = 1; i < n; ++i)
    inst.case_index[i] = inst.case_index[i - 1] + (comp.case_of[i] != comp.case_of[i - 1] ? 1 : 0);
  fill_program(inst, std::nullopt);
  return inst;
}

namespace {

void fill_program(IlpInstance& inst, std::optional<std::int64_t> weight) {
  const std::size_t n = inst.n, nr = inst.instances.size();
  const auto same_case = [&](std::size_t i, std::size_t j) { return inst.case_index[i] == inst.case_index[j]; };

  std::int64_t open_pairs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !same_case(i, j) && !inst.R[i][j] && !inst.R[j][i]) ++open_pairs;
  // Reversals must outweigh every possible set of added pairs.
  inst.reversal_weight = weight ? *weight : std::max<std::int64_t>(1000, open_pairs + 1);

  auto& prog = inst.program;
  inst.var.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::int64_t cost = inst.R[j][i] ? inst.reversal_weight : (inst.R[i][j] ? 0 : 1);
      inst.var[i * n + j] = prog.add_var("x" + std::to_string(i) + "_" + std::to_string(j), cost);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && same_case(i, j)) prog.fix(inst.x(i, j), inst.R[i][j]);

  const auto pair_name = [](const char* tag, std::size_t i, std::size_t j) {
    return tag + std::to_string(i) + "_" + std::to_string(j);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (same_case(i, j)) continue;
      // A removed pair comes back reversed; never both directions.
      if (inst.R[i][j] || inst.R[j][i])
        prog.rows.push_back({{{inst.x(i, j), 1}, {inst.x(j, i), 1}}, Comparator::kEq, 1, pair_name("rev", i, j)});
      else
        prog.rows.push_back({{{inst.x(i, j), 1}, {inst.x(j, i), 1}}, Comparator::kLe, 1, pair_name("anti", i, j)});
    }

  const auto fixed = [&](std::size_t i, std::size_t j) -> std::optional<int> {
    if (same_case(i, j)) return inst.R[i][j];
    return std::nullopt;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || fixed(i, j) == 0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j || fixed(j, k) == 0 || fixed(i, k) == 1) continue;
        if (same_case(i, j) && same_case(j, k)) continue;
        prog.rows.push_back({{{inst.x(i, j), 1}, {inst.x(j, k), 1}, {inst.x(i, k), -1}},
                             Comparator::kLe,
                             1,
                             "t" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k)});
      }
    }

  // Holding at i: claims of everything not after i minus releases of
  // everything before i, per instance.
  for (std::size_t k = 0; k < nr; ++k) {
    std::int64_t all_claims = 0;
    for (std::size_t j = 0; j < n; ++j) all_claims += inst.claim[j][k];
    if (all_claims == 0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.claim[i][k] == 0) continue;
      LinearRow row;
      row.cmp = Comparator::kLe;
      row.bound = inst.instances[k].capacity - all_claims;
      row.name = "cap" + std::to_string(i) + "_" + inst.instances[k].name.str();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (inst.claim[j][k] != 0) row.terms.emplace_back(inst.x(i, j), -inst.claim[j][k]);
        if (inst.release[j][k] != 0) row.terms.emplace_back(inst.x(j, i), -inst.release[j][k]);
      }
      prog.rows.push_back(std::move(row));
    }
  }
}

// The instance on a subset of moves, with the parent's reversal weight.
IlpInstance restrict_to(const IlpInstance& inst, const std::vector<std::size_t>& members) {
  IlpInstance sub;
  sub.n = members.size();
  sub.instances = inst.instances;
  sub.R.assign(sub.n, std::vector<std::uint8_t>(sub.n, 0));
  for (std::size_t a = 0; a < sub.n; ++a) {
    for (std::size_t b = 0; b < sub.n; ++b) sub.R[a][b] = inst.R[members[a]][members[b]];
    sub.claim.push_back(inst.claim[members[a]]);
    sub.release.push_back(inst.release[members[a]]);
    sub.case_index.push_back(inst.case_index[members[a]]);
  }
  fill_program(sub, inst.reversal_weight);
  return sub;
}

// Splits where everything before precedes everything after and no instance
// is held. Optimal solutions of the blocks, stacked in block order, are
// optimal for the whole.
std::vector<std::vector<std::size_t>> independent_blocks(const IlpInstance& inst) {
  const std::size_t n = inst.n;
  std::vector<std::size_t> preds(n, 0), seq;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) preds[j] += inst.R[i][j];
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (!preds[i]) ready.insert(i);
  while (!ready.empty()) {
    const auto i = *ready.begin();
    ready.erase(ready.begin());
    seq.push_back(i);
    for (std::size_t j = 0; j < n; ++j)
      if (inst.R[i][j] && --preds[j] == 0) ready.insert(j);
  }
  std::vector<std::vector<std::size_t>> blocks(1);
  std::vector<std::int64_t> held(inst.instances.size(), 0);
  // below[s]: moves of the current block that precede s.
  std::vector<std::size_t> below(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    const auto i = seq[p];
    blocks.back().push_back(i);
    for (std::size_t k = 0; k < held.size(); ++k) held[k] += inst.claim[i][k] - inst.release[i][k];
    for (std::size_t j = 0; j < n; ++j) below[j] += inst.R[i][j];
    if (p + 1 == n || std::any_of(held.begin(), held.end(), [](std::int64_t h) { return h != 0; })) continue;
    const auto size = blocks.back().size();
    bool split = true;
    for (std::size_t q = p + 1; q < n && split; ++q) split = below[seq[q]] == size;
    if (!split) continue;
    blocks.emplace_back();
    std::fill(below.begin(), below.end(), 0);
  }
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  return blocks;
}

}  // namespace

namespace {

// Solves one block; false in the flag when the budget ran out first.
std::pair<Solution, bool> solve_block(const IlpInstance& inst, std::size_t node_budget) {
  SolveOptions o;
  o.node_budget = node_budget;
  o.value_hint.assign(inst.program.n_vars, 0);
  std::vector<std::size_t> both, one;
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      o.value_hint[inst.x(i, j)] = inst.R[i][j];
      if (inst.case_index[i] == inst.case_index[j]) continue;
      const int touching = int(inst.touches_resources(i)) + int(inst.touches_resources(j));
      if (touching == 2) both.push_back(inst.x(i, j));
      if (touching == 1) one.push_back(inst.x(i, j));
    }
  o.branch_priority = both;
  o.branch_priority.insert(o.branch_priority.end(), one.begin(), one.end());
  for (auto start : {inst.greedy_schedule(), std::optional(inst.block_triangular())})
    if (start && check_feasible(inst.program, *start).ok &&
        (!o.incumbent || evaluate(inst.program, *start) < evaluate(inst.program, *o.incumbent)))
      o.incumbent = std::move(start);
  if (node_budget == 0) {
    if (!o.incumbent) throw IlpBudgetExhausted("0/1 program search has no budget left", std::nullopt);
    Solution s{true, *o.incumbent, evaluate(inst.program, *o.incumbent), 0};
    return {std::move(s), false};
  }
  try {
    return {solve(inst.program, o), true};
  } catch (const IlpBudgetExhausted& e) {
    if (!e.incumbent) throw;
    auto best = *e.incumbent;
    best.nodes = node_budget;
    return {std::move(best), false};
  }
}

}  // namespace

Extraction solve_and_extract(const ComposedAlignment& comp, const IlpInstance& inst, std::size_t node_budget) {
  Extraction ex;
  const auto blocks = independent_blocks(inst);
  std::vector<std::size_t> block_of(inst.n, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (auto i : blocks[b]) block_of[i] = b;
  std::vector<int> x(inst.program.n_vars, 0);
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = 0; j < inst.n; ++j)
      if (i != j && block_of[i] < block_of[j]) x[inst.x(i, j)] = 1;
  ex.solution.feasible = true;
  for (const auto& block : blocks) {
    const auto sub = blocks.size() == 1 ? inst : restrict_to(inst, block);
    const auto left = node_budget - std::min(node_budget, ex.solution.nodes);
    auto [sol, optimal] = solve_block(sub, left);
    ex.solution.nodes += sol.nodes;
    ex.optimal = ex.optimal && optimal;
    if (!sol.feasible) {
      ex.solution.feasible = false;
      break;
    }
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = 0; b < block.size(); ++b)
        if (a != b) x[inst.x(block[a], block[b])] = sol.assignment[sub.x(a, b)];
  }
  ex.solution.assignment = std::move(x);
  ex.solution.objective = evaluate(inst.program, ex.solution.assignment);
  if (!ex.solution.feasible) throw Error("resource ordering program has no solution");
  ex.order = inst.order_of(ex.solution.assignment).closure();
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = 0; j < inst.n; ++j)
      if (i != j && inst.R[j][i] && ex.order.precedes(i, j)) ex.reversed.emplace_back(i, j);
  ex.reversals = std::int64_t(ex.reversed.size());
  for (const auto& g : build_groups(comp.alignment.order, ex.order, ex.reversed))
    ex.segments.push_back(make_segment(g, ex.order));
  return ex;
}

bool is_violating(const RcNuNet& net, const ComposedAlignment& comp, std::size_t node_budget) {
  const auto inst = build_ilp(net, comp);
  const auto ex = solve_and_extract(comp, inst, node_budget);
  if (!ex.optimal && ex.reversals > 0)
    throw BudgetError("ordering program ran out of budget before deciding whether a reversal is needed");
  return ex.reversals > 0;
}

Realignment realign_segment(const RcNuNet& net, const EventLog& log, const ComposedAlignment& comp, const Poset& order,
                            const std::vector<std::size_t>& before, const std::vector<std::size_t>& members,
                            const SearchOptions& options) {
  const auto& al = comp.alignment;
  const auto m_a = pseudo_fire(net, net.initial(), al, before);
  const auto m_b = pseudo_fire(net, m_a, al, members);

  std::vector<std::size_t> events;
  std::set<Name> cases;
  for (auto m : members) {
    if (al.moves[m].event) events.push_back(*al.moves[m].event);
    cases.insert(comp.case_of[m]);
  }
  std::sort(events.begin(), events.end());
  const EventLog part = sub_log(log, events);

  Realignment out;
  try {
    const auto prod = build_sync_product(net, part);
    SearchOptions o = options;
    o.allowed_cases = std::vector<Name>(cases.begin(), cases.end());
    std::vector<Name> pool;
    for (Name c : cases)
      if (!m_a.mentions(c)) pool.push_back(c);
    o.fresh_pool = pool;
    o.order = OrderStyle::kCausal;
    auto res = optimal_alignment(prod, m_a, m_b, o);
    for (auto& mv : res.alignment.moves)
      if (mv.event) mv.event = events[*mv.event];
    out.alignment = std::move(res.alignment);
    out.cost = res.cost;
    return out;
  } catch (const SearchExhausted& e) {
    out.note = e.what();
  }

  // Every firing kept in the given order, every event observed on its own.
  out.fallback = true;
  std::vector<Move> seq;
  for (auto m : sorted_by(order, members)) {
    const auto& mv = al.moves[m];
    if (mv.kind == MoveKind::kSync) {
      seq.push_back(Move{MoveKind::kModel, std::nullopt, mv.transition, mv.mode});
      seq.push_back(Move{MoveKind::kLog, mv.event, std::nullopt, Mode{}});
    } else {
      seq.push_back(mv);
    }
  }
  out.alignment = order_moves(net, log, m_a, std::move(seq), OrderStyle::kSequential);
  out.cost = alignment_cost(net, out.alignment, options.costs);
  return out;
}

ApproxResult approximate(const RcNuNet& net, const EventLog& log, const ApproxOptions& options) {
  ApproxResult out;
  out.composed = compose(log, align_cases(net, log, options.search));
  const auto& comp = out.composed;
  const auto& moves = comp.alignment.moves;
  const std::size_t n = moves.size();

  const auto inst = build_ilp(net, comp);
  const auto ex = solve_and_extract(comp, inst, options.ilp_budget);
  out.violating = ex.reversals > 0;
  out.ilp_optimal = ex.optimal;
  out.ilp_nodes = ex.solution.nodes;
  if (!ex.optimal) out.warnings.push_back("ordering program ran out of budget; using the best order found");

  if (ex.segments.empty()) {
    out.alignment = Alignment{moves, ex.order};
    out.cost = alignment_cost(net, out.alignment, options.search.costs);
    return out;
  }

  // Linearize with every segment contiguous.
  std::vector<int> group_of(n, -1);
  for (std::size_t s = 0; s < ex.segments.size(); ++s)
    for (auto m : ex.segments[s].members) group_of[m] = int(s);
  const auto node = contracted_nodes(group_of, ex.segments.size());
  const std::size_t nodes = ex.segments.size() + std::count(group_of.begin(), group_of.end(), -1);
  std::vector<std::set<std::size_t>> succ(nodes);
  std::vector<std::size_t> indegree(nodes, 0), first_member(nodes, n);
  for (std::size_t m = 0; m < n; ++m) first_member[node[m]] = std::min(first_member[node[m]], m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (ex.order.precedes(a, b) && node[a] != node[b] && succ[node[a]].insert(node[b]).second) ++indegree[node[b]];
  std::set<std::pair<std::size_t, std::size_t>> ready;
  for (std::size_t v = 0; v < nodes; ++v)
    if (indegree[v] == 0) ready.emplace(first_member[v], v);
  std::vector<std::size_t> node_order;
  while (!ready.empty()) {
    const auto v = ready.begin()->second;
    ready.erase(ready.begin());
    node_order.push_back(v);
    for (auto w : succ[v])
      if (--indegree[w] == 0) ready.emplace(first_member[w], w);
  }
  if (node_order.size() != nodes) throw Error("segments could not be ordered");

  std::vector<std::vector<std::size_t>> before(ex.segments.size());
  std::vector<std::size_t> fired;
  for (auto v : node_order) {
    if (v < ex.segments.size()) {
      before[v] = fired;
      const auto& mem = ex.segments[v].members;
      fired.insert(fired.end(), mem.begin(), mem.end());
    } else {
      fired.push_back(first_member[v]);
    }
  }

  std::vector<Realignment> redone(ex.segments.size());
  parallel_for(ex.segments.size(), [&](std::size_t s) {
    redone[s] = realign_segment(net, log, comp, ex.order, before[s], ex.segments[s].members, options.search);
  });

  // Final moves in linear order, each tagged with its source.
  struct Item {
    Move move;
    std::size_t node;
    std::size_t local;  // composed index for untouched moves, index in the realignment otherwise
  };
  std::vector<Item> items;
  for (auto v : node_order) {
    if (v < ex.segments.size()) {
      RealignedSegment rs;
      rs.segment = ex.segments[v];
      for (auto m : rs.segment.members) rs.original_cost += move_cost(net, moves[m], options.search.costs);
      const auto& ra = redone[v].alignment;
      for (auto k : ra.order.topological_order()) {
        rs.moves.push_back(items.size());
        items.push_back({ra.moves[k], v, k});
      }
      rs.cost = redone[v].cost;
      rs.fallback = redone[v].fallback;
      rs.note = redone[v].note;
      if (rs.fallback) out.warnings.push_back("segment realignment fell back to split moves: " + rs.note);
      out.segments.push_back(std::move(rs));
    } else {
      items.push_back({moves[first_member[v]], v, first_member[v]});
    }
  }

  std::vector<std::vector<std::size_t>> node_members(nodes);
  for (std::size_t m = 0; m < n; ++m) node_members[node[m]].push_back(m);
  std::map<std::pair<std::size_t, std::size_t>, bool> related;
  const auto nodes_related = [&](std::size_t u, std::size_t v) {
    auto [it, fresh] = related.try_emplace({u, v}, false);
    if (fresh)
      for (auto a : node_members[u])
        for (auto b : node_members[v])
          if (ex.order.precedes(a, b)) it->second = true;
    return it->second;
  };

  std::vector<Footprint> prints;
  for (const auto& it : items) prints.push_back(footprint(net, log, it.move));
  const std::size_t total = items.size();
  Poset order(total);
  for (std::size_t p = 0; p < total; ++p)
    for (std::size_t q = p + 1; q < total; ++q) {
      const auto& a = items[p];
      const auto& b = items[q];
      bool edge;
      if (a.node == b.node)
        edge = redone[a.node].alignment.order.precedes(a.local, b.local);
      else if (a.node >= ex.segments.size() && b.node >= ex.segments.size())
        edge = ex.order.precedes(a.local, b.local);
      else
        edge = nodes_related(a.node, b.node) || prints[p].overlaps(prints[q]) ||
               (a.move.event && b.move.event && log.order().precedes(*a.move.event, *b.move.event));
      if (edge) order.add(p, q);
    }
  out.alignment.moves.reserve(total);
  for (auto& it : items) out.alignment.moves.push_back(std::move(it.move));
  out.alignment.order = order.closure();
  out.cost = alignment_cost(net, out.alignment, options.search.costs);
  return out;
}

Alignment approximate_alignment(const RcNuNet& net, const EventLog& log, const ApproxOptions& options) {
  return approximate(net, log, options).alignment;
}

}  // namespace rcnu
