#include "rcnu/simulate.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "rcnu/errors.hpp"

namespace rcnu {
namespace {

std::vector<Name> case_names(std::size_t n) {
  const std::size_t width = std::to_string(std::max<std::size_t>(n, 1)).size();
  std::vector<Name> out;
  for (std::size_t i = 1; i <= n; ++i) {
    std::ostringstream os;
    os << 'c' << std::setw(static_cast<int>(width)) << std::setfill('0') << i;
    out.emplace_back(os.str());
  }
  return out;
}

std::string time_text(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

// One attempt; returns false on deadlock or step exhaustion.
bool run_once(const RcNuNet& net, const std::vector<Name>& names, std::mt19937_64& rng, std::size_t max_steps,
              std::vector<Event>& events) {
  events.clear();
  ColoredMarking m = net.initial();
  std::set<Name> used;
  for (std::size_t step = 0; step < max_steps; ++step) {
    std::vector<Name> pool;
    for (Name n : names)
      if (!used.count(n)) pool.push_back(n);
    if (pool.empty() && m == net.final_marking()) return true;
    std::vector<std::pair<std::size_t, Mode>> choices;
    for (std::size_t t = 0; t < net.transitions().size(); ++t)
      for (auto& mode : enabled_modes(net, m, t, pool)) choices.emplace_back(t, std::move(mode));
    if (choices.empty()) return false;
    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
    const auto& [t, mode] = choices[pick(rng)];
    m = fire_mode(net, m, t, mode);
    for (Name c : mode.case_values) used.insert(c);
    const auto& tr = net.transition(t);
    const auto c = firing_case(net, t, mode);
    if (tr.label && c) {
      Event e;
      e.activity = *tr.label;
      e.case_id = *c;
      e.resources = resource_demand(net, t, mode);
      e.timestamp = static_cast<double>(events.size() + 1);
      e.time_text = time_text(e.timestamp);
      events.push_back(std::move(e));
    }
  }
  return false;
}

std::map<Name, std::string> role_map(const RcNuNet& net) {
  std::map<Name, std::string> roles;
  for (const auto& r : net.roles())
    for (const auto& [inst, cap] : r.instances) roles[inst] = r.name;
  return roles;
}

}  // namespace

EventLog simulate(const RcNuNet& net, std::size_t n_cases, std::uint64_t seed, const DeviationConfig& deviations,
                  const SimulationOptions& options) {
  if (!validate_structure(net).empty()) throw ValidationError("net violates the structural restrictions");
  const auto names = case_names(n_cases);
  std::mt19937_64 rng(seed);
  std::vector<Event> events;
  bool done = false;
  for (std::size_t attempt = 0; attempt <= options.retries && !done; ++attempt)
    done = run_once(net, names, rng, options.max_steps_per_case * std::max<std::size_t>(n_cases, 1), events);
  if (!done) throw Error("simulation did not complete after " + std::to_string(options.retries + 1) + " attempts");
  EventLog log = build_order(std::move(events), role_map(net));
  if (deviations.drop_events == 0 && deviations.swap_resources == 0 && deviations.overlaps == 0) return log;
  return apply_deviations(net, log, rng(), deviations);
}

EventLog apply_deviations(const RcNuNet& net, const EventLog& log, std::uint64_t seed,
                          const DeviationConfig& deviations) {
  std::mt19937_64 rng(seed);
  std::vector<Event> events = log.events();

  for (std::size_t k = 0; k < deviations.swap_resources; ++k) {
    std::vector<std::pair<std::size_t, Name>> candidates;
    for (std::size_t i = 0; i < events.size(); ++i)
      for (const auto& [inst, n] : events[i].resources) {
        const auto role = net.role_of_instance(inst);
        if (role && net.roles()[*role].instances.counts().size() > 1) candidates.emplace_back(i, inst);
      }
    if (candidates.empty()) break;
    const auto [i, inst] = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    std::vector<Name> others;
    for (const auto& [other, cap] : net.roles()[*net.role_of_instance(inst)].instances)
      if (other != inst) others.push_back(other);
    const Name repl = others[std::uniform_int_distribution<std::size_t>(0, others.size() - 1)(rng)];
    const auto n = events[i].resources.count(inst);
    events[i].resources.add(inst, -n);
    events[i].resources.add(repl, n);
  }

  for (std::size_t k = 0; k < deviations.overlaps; ++k) {
    std::vector<Name> cases;
    for (const auto& e : events)
      if (std::find(cases.begin(), cases.end(), e.case_id) == cases.end()) cases.push_back(e.case_id);
    if (cases.size() < 2) break;
    const std::size_t later = std::uniform_int_distribution<std::size_t>(1, cases.size() - 1)(rng);
    const std::size_t earlier = std::uniform_int_distribution<std::size_t>(0, later - 1)(rng);
    std::vector<double> anchor;
    for (const auto& e : events)
      if (e.case_id == cases[earlier]) anchor.push_back(e.timestamp);
    std::size_t pos = 0;
    for (auto& e : events) {
      if (e.case_id != cases[later]) continue;
      e.timestamp = pos < anchor.size() ? anchor[pos] + 0.5 : anchor.back() + 0.5 + static_cast<double>(pos);
      e.time_text = time_text(e.timestamp);
      ++pos;
    }
  }

  for (std::size_t k = 0; k < deviations.drop_events && !events.empty(); ++k)
    events.erase(events.begin() +
                 static_cast<std::ptrdiff_t>(std::uniform_int_distribution<std::size_t>(0, events.size() - 1)(rng)));

  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  return build_order(std::move(events), log.roles());
}

}  // namespace rcnu
