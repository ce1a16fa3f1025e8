#pragma once

#include <string>

#include "rcnu/rcnet.hpp"

namespace rcnu {

// Reads a net description (JSON). Throws ParseError on malformed input. The
// structural restrictions are not checked here (see validate_structure).
// Availability places missing from the initial or final marking are stocked
// with their role's instances.
RcNuNet parse_net(const std::string& json_text);
RcNuNet load_net_file(const std::string& path);

std::string net_to_json(const RcNuNet& net);

}  // namespace rcnu
