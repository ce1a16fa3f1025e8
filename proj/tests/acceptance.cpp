// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rcnu/approx.hpp"
#include "rcnu/cli.hpp"
#include "rcnu/errors.hpp"
#include "rcnu/net.hpp"
#include "rcnu/simulate.hpp"
#include "support.hpp"
#include "surgery.hpp"

using namespace rcnu;
using namespace testing;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kPerformanceSeed = 3;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

Outcome fail(const std::string& why) { return {false, why}; }

std::vector<SeededFixture> seeded_fixtures() {
  std::vector<SeededFixture> out;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) out.push_back(seeded_fixture(seed));
  return out;
}

const std::vector<SeededFixture>& fixtures200() {
  static const auto all = seeded_fixtures();
  return all;
}

struct ComposedCase {
  std::string name;
  const RcNuNet* net;
  EventLog log;
  ComposedAlignment comp;
};

// Composed alignments with at most eight moves.
const std::vector<ComposedCase>& small_composed() {
  static const auto all = [] {
    static const RcNuNet contention = fixture_net("contention.json");
    static const RcNuNet cap2 = fixture_net("contention_cap2.json");
    std::vector<ComposedCase> out;
    const auto add = [&](const std::string& name, const RcNuNet& net, const EventLog& log) {
      auto comp = compose(log, align_cases(net, log));
      if (comp.alignment.moves.size() <= 8) out.push_back({name, &net, log, std::move(comp)});
    };
    for (const auto& [name, log] : small_machine_logs()) {
      add(name + " contention", contention, log);
      add(name + " cap2", cap2, log);
    }
    for (const auto& f : fixtures200()) add(f.name, f.net, f.log);
    return out;
  }();
  return all;
}

std::set<LabelSequence> tag(const std::set<LabelSequence>& lang, const std::string& c) {
  std::set<LabelSequence> out;
  for (auto w : lang) {
    for (auto& a : w) a += "@" + c;
    out.insert(w);
  }
  return out;
}

Outcome language_facts() {
  const std::set<LabelSequence> four{{"o_p", "o_a", "o_sc"},
                                     {"o_p", "o_sc", "o_a"},
                                     {"o_p", "o_a", "o_so", "o_c"},
                                     {"o_p", "o_so", "o_a", "o_c"}};
  if (language(surgery_system(1), 12) != four) return fail("one-case language differs");
  const LabelSequence mixed{"o_p", "o_a", "o_sc", "o_p", "o_a", "o_so", "o_c"};
  if (language(surgery_system(2), 12).count(mixed) != 1) return fail("classical net lacks the mixed run");
  if (colored_language(fixture_net("surgery_one_case.json"), {}, 12) != four)
    return fail("colored one-case language differs");
  // Every colored two-case word projects onto single-case words per case.
  const auto two = colored_language(fixture_net("surgery_two_cases.json"), {}, 14, true);
  const auto c = tag(four, "c"), cbar = tag(four, "cbar");
  for (const auto& w : two) {
    LabelSequence a, b;
    for (const auto& x : w) (x.ends_with("@c") ? a : b).push_back(x);
    if (!c.count(a) || !cbar.count(b)) return fail("colored word mixes cases");
  }
  const LabelSequence mixed_tagged{"o_p@c", "o_a@c", "o_sc@c", "o_p@cbar", "o_a@cbar", "o_so@cbar", "o_c@c"};
  if (two.count(mixed_tagged)) return fail("colored net accepts the mixed run");
  return {true, std::to_string(two.size()) + " colored two-case words"};
}

Outcome durability() {
  const auto net = fixture_net("hospital.json");
  const std::vector<Name> pool{Name("c1"), Name("c2"), Name("c3")};
  std::size_t markings = 0;
  for (std::uint64_t walk = 0; walk < 200; ++walk) {
    std::mt19937_64 rng(walk);
    auto m = net.initial();
    for (int step = 0; step < 40; ++step) {
      std::vector<std::pair<std::size_t, Mode>> choices;
      for (std::size_t t = 0; t < net.transitions().size(); ++t)
        for (auto& mode : enabled_modes(net, m, t, pool)) choices.emplace_back(t, mode);
      if (choices.empty()) break;
      const auto& [t, mode] = choices[rng() % choices.size()];
      m = fire_mode(net, m, t, mode);
      ++markings;
      for (const auto& role : net.roles()) {
        Multiset<Name> held;
        for (const auto* p : {&m.places[*role.available_place], &m.places[*role.busy_place]})
          for (const auto& [tok, n] : *p) held.add(tok.resource, n);
        if (!(held == role.instances)) return fail("walk " + std::to_string(walk) + " loses role " + role.name);
      }
    }
  }
  const auto basis = place_invariants(net.skeleton());
  for (const auto& role : net.roles()) {
    RationalVector y(net.places().size(), 0);
    y[*role.available_place] = 1;
    y[*role.busy_place] = 1;
    if (!in_span(basis, y)) return fail("no invariant for role " + role.name);
  }
  return {true, std::to_string(markings) + " markings"};
}

Outcome exact_optimality() {
  std::vector<std::pair<std::string, std::pair<const RcNuNet*, EventLog>>> cases;
  static const RcNuNet hospital = fixture_net("hospital.json");
  static const RcNuNet contention = fixture_net("contention.json");
  for (const char* csv : {
           "c1,i_s,1,gp:g\nc1,i_p,2,gp:g\nc1,o_p,3,surgeon:s\nc1,o_s,4,surgeon:s\nc1,o_c,5,surgeon:s\n",
           "c1,i_s,1,gp:g\nc1,i_p,2,gp:g\nc1,o_s,4,surgeon:s\nc1,o_c,5,surgeon:s\n",
           "c1,i_s,1,gp:g\n",
           "c1,o_p,1,surgeon:s\nc1,o_c,2,surgeon:s\n",
           "c1,i_s,1,gp:g\nc1,i_p,2,gp:g\nc2,i_s,3,gp:g\nc2,i_p,4,gp:g\n",
           "c1,i_s,1,gp:g\nc2,i_s,2,gp:g\nc1,i_p,3,gp:g\nc2,i_p,4,gp:g\n",
           "c1,o_p,1,surgeon:s\nc1,o_s,2,surgeon:s\nc1,o_c,3,surgeon:s\nc2,o_p,3,surgeon:s\n",
           "c1,i_p,1,gp:g\nc1,i_s,2,gp:g\n"})
    cases.push_back({csv, {&hospital, log_from_csv(csv)}});
  for (const auto* f : {"contention_interleaved.csv", "contention_reorderable.csv", "contention_separated.csv"})
    cases.push_back({f, {&contention, fixture_log(f)}});
  for (const auto& f : fixtures200())
    if (f.log.size() <= 6 && f.net.transitions().size() <= 8) cases.push_back({f.name, {&f.net, f.log}});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DeviationConfig dev;
    dev.drop_events = seed % 2;
    dev.swap_resources = seed % 3 == 0 ? 1 : 0;
    auto log = simulate(hospital, 1, seed, dev);
    if (log.size() <= 6) cases.push_back({"hospital one case seed " + std::to_string(seed), {&hospital, log}});
  }
  std::size_t checked = 0;
  for (const auto& [name, c] : cases) {
    const auto& [net, log] = c;
    if (log.size() > 6) continue;
    const auto exact = optimal_alignment(*net, log).cost;
    const auto brute = brute_force_alignment_cost(*net, log, {}, 6, 2'000'000);
    if (exact != brute)
      return fail(name + ": exact " + std::to_string(exact) + " vs enumeration " + std::to_string(brute));
    ++checked;
  }
  if (checked < 20) return fail("only " + std::to_string(checked) + " fixtures");
  return {true, std::to_string(checked) + " fixtures"};
}

Outcome no_replay_when_violating() {
  std::size_t flagged = 0;
  for (const auto& c : small_composed()) {
    if (!is_violating(*c.net, c.comp)) continue;
    ++flagged;
    std::size_t reaching = 0;
    for_each_linearization(c.comp.alignment.order, [&](const std::vector<std::size_t>& seq) {
      const auto end = replay(*c.net, c.net->initial(), c.comp.alignment.moves, seq);
      if (end && *end == c.net->final_marking()) ++reaching;
      return true;
    });
    if (reaching) return fail(c.name + ": " + std::to_string(reaching) + " linearizations reach the final marking");
  }
  if (flagged < 3) return fail("only " + std::to_string(flagged) + " violating fixtures");
  return {true, std::to_string(flagged) + " violating of " + std::to_string(small_composed().size())};
}

Outcome prefix_reachability() {
  std::size_t compared = 0, unreachable = 0;
  for (const auto& c : small_composed()) {
    const auto& al = c.comp.alignment;
    for (const auto& g : all_antichains(al.order)) {
      if (g.empty()) continue;
      const auto below = prefix_open(al.order, g);
      std::vector<Move> sub_moves;
      for (auto m : below.members) sub_moves.push_back(al.moves[m]);
      const bool bad = violating_by_enumeration(*c.net, sub_moves, below.order);
      const auto marking = antichain_marking(*c.net, al, g, Side::kPre);
      bool fires = false;
      for_each_linearization(below.order, [&](const std::vector<std::size_t>& seq) {
        const auto end = replay(*c.net, c.net->initial(), sub_moves, seq);
        fires = end && *end == marking;
        return !fires;
      });
      if (fires == bad) return fail(c.name + ": prefix replay disagrees with the oracle");
      if (!bad && !reachable(*c.net, marking, c.log.cases()))
        return fail(c.name + ": non-violating prefix marking not reachable");
      unreachable += bad ? 1 : 0;
      ++compared;
    }
  }
  return {true, std::to_string(compared) + " antichains, " + std::to_string(unreachable) + " violating prefixes"};
}

Outcome reversal_free_equivalence() {
  std::size_t zero = 0;
  for (const auto& c : small_composed()) {
    const auto inst = build_ilp(*c.net, c.comp);
    const auto ex = solve_and_extract(c.comp, inst);
    if (!ex.optimal) return fail(c.name + ": program not solved to optimality");
    const bool free_of_reversals = ex.reversals == 0;
    if (free_of_reversals != (ex.solution.objective < inst.reversal_weight))
      return fail(c.name + ": objective disagrees with the reversal count");
    const bool oracle = violating_by_enumeration(*c.net, c.comp.alignment.moves, c.comp.alignment.order);
    if (free_of_reversals == oracle) return fail(c.name + ": program and enumeration disagree");
    zero += free_of_reversals ? 1 : 0;
  }
  return {true, std::to_string(zero) + " reversal-free of " + std::to_string(small_composed().size())};
}

Outcome block_triangular() {
  std::size_t vars = 0;
  for (const auto& f : fixtures200()) {
    const auto comp = compose(f.log, align_cases(f.net, f.log));
    const auto inst = build_ilp(f.net, comp);
    const auto check = check_feasible(inst.program, inst.block_triangular());
    if (!check.ok) return fail(f.name + ": block order infeasible");
    vars += inst.program.n_vars;
  }
  return {true, "200 programs, " + std::to_string(vars) + " variables"};
}

struct ApproxRun {
  std::string name;
  ApproxResult approx;
  std::optional<std::int64_t> exact;
};

const std::vector<ApproxRun>& approx_runs() {
  static const auto all = [] {
    std::vector<ApproxRun> out;
    for (const auto& f : fixtures200()) {
      ApproxRun r{f.name, approximate(f.net, f.log), std::nullopt};
      try {
        r.exact = optimal_alignment(f.net, f.log).cost;
      } catch (const BudgetError&) {
      }
      out.push_back(std::move(r));
    }
    return out;
  }();
  return all;
}

Outcome approx_valid() {
  std::size_t violating = 0, fallback = 0;
  const auto& runs = approx_runs();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& f = fixtures200()[k];
    const auto report = is_valid_alignment(f.net, f.log, runs[k].approx.alignment);
    if (!report.valid) return fail(f.name + ": " + report.witness);
    violating += runs[k].approx.violating ? 1 : 0;
    for (const auto& s : runs[k].approx.segments) fallback += s.fallback ? 1 : 0;
  }
  if (violating < 10) return fail("only " + std::to_string(violating) + " fixtures with violations");
  return {true, std::to_string(violating) + " with violations, " + std::to_string(fallback) + " fallback segments"};
}

Outcome dominance() {
  std::size_t compared = 0, equal = 0;
  for (const auto& r : approx_runs()) {
    if (!r.exact) continue;
    ++compared;
    if (r.approx.cost < *r.exact) return fail(r.name + ": approx below exact");
    if (!r.approx.violating && r.approx.cost != *r.exact) return fail(r.name + ": violation-free but costs differ");
    equal += r.approx.cost == *r.exact ? 1 : 0;
  }
  if (compared < 150) return fail("exact search completed on only " + std::to_string(compared));
  return {true, std::to_string(compared) + " compared, " + std::to_string(equal) + " equal"};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome speedup() {
  const auto net = fixture_net("clinic.json");
  DeviationConfig dev;
  dev.overlaps = 1;
  const auto log = simulate(net, 10, kPerformanceSeed, dev);
  const std::size_t budget = 2'000'000;

  ApproxOptions opts;
  opts.search.node_budget = budget;
  opts.ilp_budget = budget;
  auto t0 = std::chrono::steady_clock::now();
  const auto approx = approximate(net, log, opts);
  const double approx_s = seconds_since(t0);
  if (approx.segments.size() != 1)
    return fail("expected one contention region, got " + std::to_string(approx.segments.size()));

  SearchOptions sopts;
  sopts.node_budget = budget;
  t0 = std::chrono::steady_clock::now();
  bool exhausted = false;
  try {
    optimal_alignment(net, log, sopts);
  } catch (const BudgetError&) {
    exhausted = true;
  }
  const double exact_s = seconds_since(t0);
  std::ostringstream d;
  d << std::fixed << std::setprecision(2) << log.size() << " events, approx " << approx_s << "s, exact " << exact_s
    << "s" << (exhausted ? " (budget hit)" : "") << ", ratio " << exact_s / approx_s;
  if (exhausted || exact_s >= 5 * approx_s) return {true, d.str()};
  return fail(d.str());
}

std::string run_to_string(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = run_cli(args, out, err);
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto hospital = fixture_path("hospital.json");
  const auto contention = fixture_path("contention.json");
  const auto dir = fs::temp_directory_path() / "rcalign_acceptance";
  fs::create_directories(dir);
  const auto report = (dir / "report.json").string();
  {
    int code = 0;
    std::ofstream(report, std::ios::binary)
        << run_to_string({"align", contention, fixture_path("contention_interleaved.csv"), "--mode", "approx"}, code);
  }
  struct Command {
    std::vector<std::string> args;
    const char* golden;
  };
  const std::vector<Command> commands = {
      {{"validate", hospital}, nullptr},
      {{"validate", fixture_path("hospital_no_release.json")}, "validate_no_release.txt"},
      {{"align", hospital, fixture_path("hospital_three.csv")}, "hospital_exact.json"},
      {{"align", hospital, fixture_path("hospital_three.csv"), "--mode", "approx"}, "hospital_approx.json"},
      {{"align", contention, fixture_path("contention_interleaved.csv"), "--mode", "approx"}, "contention_approx.json"},
      {{"align", hospital, fixture_path("hospital_log.csv")}, nullptr},
      {{"simulate", hospital, "--cases", "4", "--seed", "7"}, "hospital_sim.csv"},
      {{"dot", hospital}, "hospital_net.dot"},
      {{"dot", fixture_path("hospital_log.csv")}, "hospital_log.dot"},
      {{"dot", report}, nullptr},
  };
  std::size_t goldens = 0;
  for (const auto& c : commands) {
    std::string joined;
    for (const auto& a : c.args) joined += fs::path(a).filename().string() + " ";
    int code1 = 0, code2 = 0;
    const auto first = run_to_string(c.args, code1);
    const auto second = run_to_string(c.args, code2);
    if (first != second || code1 != code2) return fail("output differs between runs: " + joined);
    if (c.golden) {
      if (first != slurp(fs::path(RCNU_GOLDEN_DIR) / c.golden)) return fail("golden mismatch: " + joined);
      ++goldens;
    }
  }
  // Files written with --out and --dot match stdout.
  const auto out_a = dir / "a.json", dot_a = dir / "a.dot", out_b = dir / "b.json", dot_b = dir / "b.dot";
  int code = 0;
  const auto args = [&](const fs::path& o, const fs::path& d) {
    return std::vector<std::string>{"align", hospital, fixture_path("hospital_three.csv"), "--mode", "approx",
                                    "--out", o.string(), "--dot", d.string()};
  };
  run_to_string(args(out_a, dot_a), code);
  run_to_string(args(out_b, dot_b), code);
  if (slurp(out_a) != slurp(out_b) || slurp(dot_a) != slurp(dot_b)) return fail("written files differ");
  if (slurp(out_a) != slurp(fs::path(RCNU_GOLDEN_DIR) / "hospital_approx.json")) return fail("--out differs");
  return {true, std::to_string(commands.size()) + " commands, " + std::to_string(goldens) + " goldens"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "language of the surgery net", 1, language_facts},
      {2, "resource durability", 5, durability},
      {3, "exact cost equals enumeration", 60, exact_optimality},
      {4, "violating compositions never replay", 30, no_replay_when_violating},
      {5, "prefix markings reachable iff not violating", 60, prefix_reachability},
      {6, "reversal-free optimum iff not violating", 60, reversal_free_equivalence},
      {7, "block order is feasible", 10, block_triangular},
      {8, "approximations are valid", 300, approx_valid},
      {9, "approximation dominates exact cost", 300, dominance},
      {10, "approximation speedup", 600, speedup},
      {11, "cli determinism", 60, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double s = seconds_since(t0);
    if (o.pass && s > c.limit_s) o = fail(o.detail + "; over the " + std::to_string(int(c.limit_s)) + "s limit");
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  " << c.title << "  ["
              << std::fixed << std::setprecision(2) << s << "s]  " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
