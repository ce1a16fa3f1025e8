#include "rcnu/lognet.hpp"

namespace rcnu {

std::string event_name(std::size_t event) { return "e" + std::to_string(event); }

LogNet build_log_net(const EventLog& log) {
  LogNet out;
  auto& net = out.net;
  const std::size_t n = log.size();
  for (std::size_t e = 0; e < n; ++e) {
    out.transition_of.push_back(net.add_transition("t_" + event_name(e), log.event(e).activity));
    out.event_of.push_back(e);
  }
  for (Name c : log.cases()) {
    const auto trace = log.trace(c);
    const auto src = net.add_place("src_" + c.str());
    net.add_input(src, out.transition_of[trace.front()], "c", std::string(kEpsilonText));
    net.add_initial(src, {c, Name()});
    const auto snk = net.add_place("snk_" + c.str());
    net.add_output(out.transition_of[trace.back()], snk, "c", std::string(kEpsilonText));
    net.add_final(snk, {c, Name()});
  }
  // Consecutive events of a case are always linked so that the case color
  // flows along the trace, even where the reduction routes through another case.
  Poset links = log.order().reduction();
  for (Name c : log.cases()) {
    const auto trace = log.trace(c);
    for (std::size_t k = 1; k < trace.size(); ++k) links.add(trace[k - 1], trace[k]);
  }
  for (const auto& [a, b] : links.pairs()) {
    const auto p = net.add_place("ord_" + event_name(a) + "_" + event_name(b));
    const std::string color = log.event(a).case_id == log.event(b).case_id ? "c" : std::string(kEpsilonText);
    net.add_output(out.transition_of[a], p, color, std::string(kEpsilonText));
    net.add_input(p, out.transition_of[b], color, std::string(kEpsilonText));
  }
  for (std::size_t e = 0; e < n; ++e) {
    std::size_t k = 0;
    for (const auto& [inst, count] : log.event(e).resources) {
      const auto p = net.add_place("res_" + event_name(e) + "_" + inst.str());
      net.add_input(p, out.transition_of[e], std::string(kEpsilonText), "r" + std::to_string(++k), count);
      net.add_initial(p, {Name(), inst}, count);
    }
  }
  return out;
}

}  // namespace rcnu
