#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rcnu/multiset.hpp"
#include "rcnu/poset.hpp"
#include "rcnu/symbol.hpp"

namespace rcnu {

struct Event {
  std::string activity;
  double timestamp = 0;
  std::string time_text;  // as written in the source, reused when serializing
  Name case_id;
  Multiset<Name> resources;
  std::size_t row = 0;  // 1-based source line, 0 if generated
};

// Events with a chronology-respecting strict order. Events keep their input
// positions; the order is transitively closed.
class EventLog {
 public:
  EventLog() = default;
  EventLog(std::vector<Event> events, Poset order, std::map<Name, std::string> roles = {});

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const std::vector<Event>& events() const { return events_; }
  const Event& event(std::size_t i) const { return events_.at(i); }
  const Poset& order() const { return order_; }
  // Role written next to each resource instance in the source.
  const std::map<Name, std::string>& roles() const { return roles_; }

  // Case identifiers in name order.
  std::vector<Name> cases() const;
  // Events of one case, in trace order.
  std::vector<std::size_t> trace(Name c) const;

  std::vector<std::string> warnings;

 private:
  std::vector<Event> events_;
  Poset order_;
  std::map<Name, std::string> roles_;
};

// Within a case: total order by (timestamp, input position). Across cases:
// strictly earlier timestamp precedes.
EventLog build_order(std::vector<Event> events, std::map<Name, std::string> roles = {});

// CSV with columns case, activity, timestamp, resources; an optional header
// row is skipped. Timestamps are integers, decimals or ISO-8601 date-times.
// Resources: "role:instance" entries separated by ';' with optional "*count".
EventLog parse_log(std::istream& in);
EventLog parse_log_file(const std::string& path);
void serialize_log(const EventLog& log, std::ostream& out);

// Seconds since the Unix epoch; throws ParseError (without line) on bad input.
double parse_timestamp(const std::string& text);

// Events of case c with the order restricted to same-case pairs.
EventLog project_case(const EventLog& log, Name c);

// Event indices sorted by (case id, position within the trace).
std::vector<std::size_t> case_major_order(const EventLog& log);

}  // namespace rcnu
