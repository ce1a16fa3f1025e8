#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rcnu/eventlog.hpp"
#include "rcnu/rcnet.hpp"

namespace rcnu {

// Net whose complete executions are exactly the linearizations of a log.
struct LogNet {
  RcNuNet net;
  std::vector<std::size_t> event_of;       // transition -> event index
  std::vector<std::size_t> transition_of;  // event index -> transition
};

// Event i is named "e<i>". Places: src_<case> before the first event of each
// case, snk_<case> after its last, ord_<a>_<b> for each pair of the transitive
// reduction of the log order and for consecutive events of a case (colored by
// the case when both events share it), res_<e>_<r> holding the resource
// tokens event e consumes.
LogNet build_log_net(const EventLog& log);

std::string event_name(std::size_t event);

}  // namespace rcnu
