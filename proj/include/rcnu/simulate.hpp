#pragma once

#include <cstddef>
#include <cstdint>

#include "rcnu/eventlog.hpp"
#include "rcnu/rcnet.hpp"

namespace rcnu {

struct DeviationConfig {
  std::size_t drop_events = 0;     // delete this many random events
  std::size_t swap_resources = 0;  // replace the recorded instance by another of the same role
  std::size_t overlaps = 0;        // retime a case to interleave with an earlier case
};

struct SimulationOptions {
  std::size_t max_steps_per_case = 200;
  std::size_t retries = 50;
};

// Plays the token game with uniformly random choices among enabled
// (transition, mode) pairs until n_cases cases have been created and the final
// marking is reached. Case identifiers are c1..cn (zero padded). Every visible
// firing with a case binding becomes an event; timestamps count events.
EventLog simulate(const RcNuNet& net, std::size_t n_cases, std::uint64_t seed, const DeviationConfig& deviations = {},
                  const SimulationOptions& options = {});

// Deviations alone, applied to an existing log.
EventLog apply_deviations(const RcNuNet& net, const EventLog& log, std::uint64_t seed,
                          const DeviationConfig& deviations);

}  // namespace rcnu
