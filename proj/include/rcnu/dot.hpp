#pragma once

#include <string>

#include "rcnu/eventlog.hpp"
#include "rcnu/rcnet.hpp"
#include "rcnu/report.hpp"

namespace rcnu {

// GraphViz text. Output depends only on the input, never on addresses or
// interning order.

// Places as circles (resource places filled with a per-role color),
// transitions as boxes (silent ones filled black), arcs labeled with their
// inscriptions.
std::string net_to_dot(const RcNuNet& net);
// Events as nodes, edges from the transitive reduction of the log order.
std::string log_to_dot(const EventLog& log);
// Moves colored by kind (sync green, model purple, log yellow), edges from the
// transitive reduction of the order; realigned intervals become clusters.
std::string report_to_dot(const AlignmentReport& r);

}  // namespace rcnu
