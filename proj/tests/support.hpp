#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcnu/align.hpp"
#include "rcnu/eventlog.hpp"
#include "rcnu/netfile.hpp"
#include "rcnu/rcnet.hpp"

namespace testing {

std::string fixture_path(const std::string& name);
rcnu::RcNuNet fixture_net(const std::string& name);
rcnu::EventLog fixture_log(const std::string& name);
rcnu::EventLog log_from_csv(const std::string& csv);

// Minimum alignment cost by exhaustive depth-first enumeration of product
// firing sequences (no state merging). At most `max_model_moves` model moves
// are tried; throws SizeError after `node_cap` nodes.
std::int64_t brute_force_alignment_cost(const rcnu::RcNuNet& net, const rcnu::EventLog& log,
                                        const rcnu::CostTable& costs = {}, std::size_t max_model_moves = 6,
                                        std::size_t node_cap = 100'000);

}  // namespace testing
