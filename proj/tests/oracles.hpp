#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rcnu/align.hpp"
#include "rcnu/eventlog.hpp"
#include "rcnu/poset.hpp"
#include "rcnu/rcnet.hpp"

namespace testing {

// Every closed, acyclic order containing `base`.
std::vector<rcnu::Poset> extensions(const rcnu::Poset& base, std::size_t cap = 200'000);

// Free resource tokens before g against what g claims, counted from scratch.
bool short_of_capacity(const rcnu::RcNuNet& net, const std::vector<rcnu::Move>& moves, const rcnu::Poset& order,
                       const rcnu::Antichain& g);

// Every extension of the order meets some maximal antichain that is short.
bool violating_by_enumeration(const rcnu::RcNuNet& net, const std::vector<rcnu::Move>& moves,
                              const rcnu::Poset& order);

// Breadth-first search over colored markings with cases drawn from `pool`.
bool reachable(const rcnu::RcNuNet& net, const rcnu::ColoredMarking& target, const std::vector<rcnu::Name>& pool,
               std::size_t cap = 200'000);

// Small logs on the machine nets: fixtures plus simulated ones with overlaps.
std::vector<std::pair<std::string, rcnu::EventLog>> small_machine_logs();

struct SeededFixture {
  std::string name;
  std::string net_file;
  rcnu::RcNuNet net;
  rcnu::EventLog log;
};

// Deterministic net, case count and deviations picked from the seed.
SeededFixture seeded_fixture(std::uint64_t seed);

}  // namespace testing
