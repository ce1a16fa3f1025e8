#include "support.hpp"

#include <functional>
#include <limits>
#include <sstream>

#include "rcnu/errors.hpp"

namespace testing {

std::string fixture_path(const std::string& name) { return std::string(RCNU_FIXTURE_DIR) + "/" + name; }

rcnu::RcNuNet fixture_net(const std::string& name) { return rcnu::load_net_file(fixture_path(name)); }

rcnu::EventLog fixture_log(const std::string& name) { return rcnu::parse_log_file(fixture_path(name)); }

rcnu::EventLog log_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  return rcnu::parse_log(in);
}

std::int64_t brute_force_alignment_cost(const rcnu::RcNuNet& net, const rcnu::EventLog& log,
                                        const rcnu::CostTable& costs, std::size_t max_model_moves,
                                        std::size_t node_cap) {
  using namespace rcnu;
  const std::size_t n = log.size();
  const std::vector<Name> pool = log.cases();
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::size_t nodes = 0;
  std::vector<bool> done(n, false);
  auto ready = [&](std::size_t e) {
    if (done[e]) return false;
    for (std::size_t p = 0; p < n; ++p)
      if (log.order().precedes(p, e) && !done[p]) return false;
    return true;
  };
  std::function<void(const ColoredMarking&, std::int64_t, std::size_t, std::size_t)> dfs =
      [&](const ColoredMarking& m, std::int64_t cost, std::size_t fired, std::size_t model_moves) {
        if (++nodes > node_cap) throw SizeError("brute-force oracle exceeded its node cap");
        if (cost >= best) return;
        if (fired == n && m == net.final_marking()) {
          best = cost;
          return;
        }
        for (std::size_t e = 0; e < n; ++e) {
          if (!ready(e)) continue;
          done[e] = true;
          dfs(m, cost + costs.visible, fired + 1, model_moves);
          const auto& ev = log.event(e);
          for (std::size_t t = 0; t < net.transitions().size(); ++t) {
            if (net.transition(t).label != ev.activity) continue;
            for (const auto& mode : enabled_modes(net, m, t, pool)) {
              // Independent check of the synchronisation rule.
              bool same_case = !mode.case_values.empty();
              for (auto c : mode.case_values) same_case = same_case && c == ev.case_id;
              if (!same_case || resource_demand(net, t, mode) != ev.resources) continue;
              dfs(fire_mode(net, m, t, mode), cost + costs.sync, fired + 1, model_moves);
            }
          }
          done[e] = false;
        }
        if (model_moves == max_model_moves) return;
        for (std::size_t t = 0; t < net.transitions().size(); ++t)
          for (const auto& mode : enabled_modes(net, m, t, pool))
            dfs(fire_mode(net, m, t, mode), cost + (net.transition(t).label ? costs.visible : costs.tau), fired,
                model_moves + 1);
      };
  dfs(net.initial(), 0, 0, 0);
  return best;
}

}  // namespace testing
