#include <doctest.h>


#include "rcnu/approx.hpp"
#include "oracles.hpp"
#include "rcnu/simulate.hpp"
#include "support.hpp"

using namespace rcnu;
using namespace testing;

namespace {

ComposedAlignment composed_for(const RcNuNet& net, const EventLog& log) { return compose(log, align_cases(net, log)); }

std::size_t free_vars(const BinaryProgram& p) {
  std::size_t n = 0;
  for (std::size_t v = 0; v < p.n_vars; ++v)
    if (p.fixings.empty() || !p.fixings[v]) ++n;
  return n;
}

Mode binding(const char* c, const char* r) { return Mode{{Name(c)}, {Name(r)}}; }

}  // namespace

TEST_CASE("composition keeps each case's order and adds the log order") {
  const auto net = testing::fixture_net("hospital.json");
  const auto log = testing::fixture_log("hospital_log.csv");
  const auto per = align_cases(net, log);
  const auto comp = compose(log, per);
  const auto& moves = comp.alignment.moves;
  std::size_t expected = 0;
  for (const auto& [c, al] : per) expected += al.moves.size();
  REQUIRE(moves.size() == expected);
  CHECK(comp.alignment.order.is_transitively_closed());
  CHECK(comp.alignment.order.is_acyclic());
  for (std::size_t a = 0; a < moves.size(); ++a)
    for (std::size_t b = 0; b < moves.size(); ++b) {
      if (comp.case_of[a] == comp.case_of[b])
        CHECK(comp.alignment.order.precedes(a, b) ==
              per.at(comp.case_of[a]).order.precedes(comp.position[a], comp.position[b]));
      if (moves[a].event && moves[b].event && log.order().precedes(*moves[a].event, *moves[b].event))
        CHECK(comp.alignment.order.precedes(a, b));
    }
  for (std::size_t a = 0; a < moves.size(); ++a)
    if (moves[a].event) CHECK(log.event(*moves[a].event).case_id == comp.case_of[a]);

  const auto one = project_case(log, Name("c1"));
  const auto single = compose(one, align_cases(net, one));
  const auto direct = per.at(Name("c1"));
  CHECK(single.alignment.moves == direct.moves);
  CHECK(single.alignment.order.pairs() == direct.order.pairs());

  auto missing = per;
  missing.erase(Name("c2"));
  CHECK_THROWS_AS(compose(log, missing), ValidationError);
}

TEST_CASE("two incomparable claims of one instance") {
  const auto net = testing::fixture_net("contention.json");
  const auto a = net.transition_index("a");
  const auto b = net.transition_index("b");
  Alignment al;
  al.moves = {Move{MoveKind::kModel, {}, a, binding("c1", "x")}, Move{MoveKind::kModel, {}, b, binding("c1", "x")},
              Move{MoveKind::kModel, {}, a, binding("c2", "x")}, Move{MoveKind::kModel, {}, b, binding("c2", "x")}};
  al.order = Poset(4);
  al.order.add(0, 1);
  al.order.add(2, 3);
  CHECK(violating_antichain(net, al, {0, 2}));
  CHECK(violating_antichain(net, al, {1, 2}));
  CHECK_FALSE(violating_antichain(net, al, {1, 3}));
  const auto roomy = testing::fixture_net("contention_cap2.json");
  CHECK_FALSE(violating_antichain(roomy, al, {0, 2}));
  for (const auto& g : maximal_antichains(al.order)) {
    CHECK(violating_antichain(net, al, g) == short_of_capacity(net, al.moves, al.order, g));
    CHECK(violating_antichain(roomy, al, g) == short_of_capacity(roomy, al.moves, al.order, g));
  }
}

TEST_CASE("violation decided by the ordering program matches enumeration") {
  std::size_t violating = 0, checked = 0;
  for (const auto* net_file : {"contention.json", "contention_cap2.json"}) {
    const auto net = testing::fixture_net(net_file);
    for (const auto& [name, log] : small_machine_logs()) {
      CAPTURE(net_file);
      CAPTURE(name);
      const auto comp = composed_for(net, log);
      if (comp.alignment.moves.size() > 8) continue;
      const bool expected = violating_by_enumeration(net, comp.alignment.moves, comp.alignment.order);
      const auto inst = build_ilp(net, comp);
      const auto ex = solve_and_extract(comp, inst);
      CHECK(is_violating(net, comp) == expected);
      CHECK((ex.solution.objective >= inst.reversal_weight) == expected);
      CHECK(check_feasible(inst.program, ex.solution.assignment).ok);
      ++checked;
      if (!expected) continue;
      ++violating;
      // No interleaving of the composed firings gets through.
      for_each_linearization(comp.alignment.order, [&](const std::vector<std::size_t>& seq) {
        const auto end = replay(net, net.initial(), comp.alignment.moves, seq);
        CHECK((!end || !(*end == net.final_marking())));
        return true;
      });
    }
  }
  CHECK(checked >= 20);
  CHECK(violating >= 3);
}

TEST_CASE("antichain markings are reachable exactly when their prefix is not violating") {
  const auto net = testing::fixture_net("contention.json");
  std::size_t compared = 0;
  for (const auto& [name, log] : small_machine_logs()) {
    CAPTURE(name);
    const auto comp = composed_for(net, log);
    const auto& al = comp.alignment;
    for (const auto& g : all_antichains(al.order)) {
      if (g.empty()) continue;
      const auto below = prefix_open(al.order, g);
      if (below.members.size() > 8) continue;
      std::vector<Move> sub_moves;
      for (auto m : below.members) sub_moves.push_back(al.moves[m]);
      const bool bad = violating_by_enumeration(net, sub_moves, below.order);
      const auto marking = antichain_marking(net, al, g, Side::kPre);
      // Reached by the prefix's own firings in an order it allows.
      bool fires = false;
      for_each_linearization(below.order, [&](const std::vector<std::size_t>& seq) {
        const auto end = replay(net, net.initial(), sub_moves, seq);
        fires = end && *end == marking;
        return !fires;
      });
      CHECK(fires == !bad);
      if (!bad) CHECK(reachable(net, marking, log.cases()));
      ++compared;
    }
  }
  CHECK(compared > 50);
}

TEST_CASE("ordering program shape") {
  const auto net = testing::fixture_net("contention.json");
  const auto one = testing::log_from_csv("c1,a,1,machine:x\nc1,b,2,machine:x\n");
  const auto single = build_ilp(net, composed_for(net, one));
  CHECK(single.program.n_vars == 2);
  CHECK(free_vars(single.program) == 0);

  const auto comp = composed_for(net, testing::fixture_log("contention_reorderable.csv"));
  const auto inst = build_ilp(net, comp);
  REQUIRE(inst.n == 4);
  CHECK(free_vars(inst.program) == 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j && inst.case_index[i] != inst.case_index[j])
        CHECK_FALSE(inst.program.fixings[inst.x(i, j)].has_value());
  REQUIRE(inst.instances.size() == 1);
  CHECK(inst.instances[0].capacity == 1);
  CHECK(inst.claim[0][0] == 1);
  CHECK(inst.release[1][0] == 1);
  CHECK(inst.release[0][0] == 0);
  CHECK(check_feasible(inst.program, inst.block_triangular()).ok);

  const auto hnet = testing::fixture_net("hospital.json");
  for (const auto* f : {"hospital_log.csv", "hospital_three.csv"}) {
    const auto h = build_ilp(hnet, composed_for(hnet, testing::fixture_log(f)));
    CHECK(check_feasible(h.program, h.block_triangular()).ok);
  }
}

TEST_CASE("segments around reversed pairs") {
  const auto net = testing::fixture_net("contention.json");
  const auto extract = [&](const char* f) {
    const auto comp = composed_for(net, testing::fixture_log(f));
    return solve_and_extract(comp, build_ilp(net, comp));
  };
  const auto calm = extract("contention_reorderable.csv");
  CHECK(calm.reversals == 0);
  CHECK(calm.segments.empty());

  const auto clash = extract("contention_interleaved.csv");
  CHECK(clash.reversals == 1);
  REQUIRE(clash.segments.size() == 1);
  // c1's release and c2's claim swap places.
  CHECK(clash.segments[0].members == std::vector<std::size_t>{1, 2});
  CHECK(clash.segments[0].lower == Antichain{1});
  CHECK(clash.segments[0].upper == Antichain{2});

  const auto twice = extract("contention_separated.csv");
  REQUIRE(twice.segments.size() == 2);
  for (auto m : twice.segments[0].members)
    CHECK(std::find(twice.segments[1].members.begin(), twice.segments[1].members.end(), m) ==
          twice.segments[1].members.end());

  const auto hnet = testing::fixture_net("hospital.json");
  const auto hcomp = composed_for(hnet, testing::fixture_log("hospital_three.csv"));
  CHECK(solve_and_extract(hcomp, build_ilp(hnet, hcomp)).segments.size() == 3);
}

TEST_CASE("realignment falls back to split moves when the search gives up") {
  const auto net = testing::fixture_net("contention.json");
  const auto log = testing::fixture_log("contention_interleaved.csv");
  const auto comp = composed_for(net, log);
  const auto ex = solve_and_extract(comp, build_ilp(net, comp));
  REQUIRE(ex.segments.size() == 1);
  const std::vector<std::size_t> before{0};
  const auto& members = ex.segments[0].members;

  const auto searched = realign_segment(net, log, comp, ex.order, before, members, {});
  CHECK_FALSE(searched.fallback);
  CHECK(searched.cost == 20000);

  SearchOptions tight;
  tight.node_budget = 1;
  const auto split = realign_segment(net, log, comp, ex.order, before, members, tight);
  CHECK(split.fallback);
  CHECK_FALSE(split.note.empty());
  REQUIRE(split.alignment.moves.size() == 4);
  CHECK(split.cost == 40000);
  const auto m_a = pseudo_fire(net, net.initial(), comp.alignment, before);
  std::vector<std::size_t> seq(split.alignment.moves.size());
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = i;
  const auto end = replay(net, m_a, split.alignment.moves, seq);
  REQUIRE(end);
  CHECK(*end == pseudo_fire(net, m_a, comp.alignment, members));
}

TEST_CASE("approximation on the fixtures") {
  struct Case {
    const char* net;
    const char* log;
    std::size_t segments;
  };
  for (const auto& c : {Case{"hospital.json", "hospital_log.csv", 0}, Case{"contention.json", "contention_reorderable.csv", 0},
                        Case{"contention.json", "contention_interleaved.csv", 1},
                        Case{"contention_cap2.json", "contention_interleaved.csv", 0},
                        Case{"contention.json", "contention_separated.csv", 2},
                        Case{"hospital.json", "hospital_three.csv", 3}}) {
    CAPTURE(c.net);
    CAPTURE(c.log);
    const auto net = testing::fixture_net(c.net);
    const auto log = testing::fixture_log(c.log);
    const auto res = approximate(net, log);
    CHECK(res.segments.size() == c.segments);
    CHECK(res.violating == (c.segments > 0));
    const auto report = is_valid_alignment(net, log, res.alignment);
    CHECK_MESSAGE(report.valid, report.witness);
    const auto exact = optimal_alignment(net, log);
    CHECK(res.cost >= exact.cost);
    if (!res.violating) CHECK(res.cost == exact.cost);
    for (const auto& s : res.segments) CHECK_FALSE(s.fallback);
  }
}

TEST_CASE("approximation on simulated hospital logs") {
  const auto net = testing::fixture_net("hospital.json");
  std::size_t violating = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    DeviationConfig dev;
    dev.overlaps = seed % 3;
    dev.drop_events = seed % 5 == 0 ? 1 : 0;
    const auto log = simulate(net, 3, seed, dev);
    const auto res = approximate(net, log);
    const auto report = is_valid_alignment(net, log, res.alignment);
    CHECK_MESSAGE(report.valid, report.witness);
    const auto exact = optimal_alignment(net, log);
    CHECK(res.cost >= exact.cost);
    if (!res.violating) CHECK(res.cost == exact.cost);
    violating += res.violating ? 1 : 0;
  }
  CHECK(violating >= 3);
}

TEST_CASE("solving independent stretches separately keeps the optimum") {
  std::size_t violating = 0;
  for (const auto* net_file : {"contention.json", "contention_cap2.json", "hospital.json"}) {
    const auto net = testing::fixture_net(net_file);
    std::vector<std::pair<std::string, EventLog>> logs = small_machine_logs();
    logs.emplace_back("separated", testing::fixture_log("contention_separated.csv"));
    for (const auto& [name, log] : logs) {
      CAPTURE(net_file);
      CAPTURE(name);
      const auto comp = composed_for(net, log);
      if (comp.alignment.moves.size() > 14) continue;
      const auto inst = build_ilp(net, comp);
      const auto ex = solve_and_extract(comp, inst);
      REQUIRE(ex.optimal);
      CHECK(check_feasible(inst.program, ex.solution.assignment).ok);
      SolveOptions whole;
      whole.incumbent = inst.block_triangular();
      CHECK(ex.solution.objective == solve(inst.program, whole).objective);
      violating += ex.reversals > 0 ? 1 : 0;
    }
  }
  CHECK(violating >= 3);
}
