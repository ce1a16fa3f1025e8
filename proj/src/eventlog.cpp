#include "rcnu/eventlog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "rcnu/errors.hpp"

namespace rcnu {

EventLog::EventLog(std::vector<Event> events, Poset order, std::map<Name, std::string> roles)
    : events_(std::move(events)), order_(std::move(order)), roles_(std::move(roles)) {
  if (order_.size() != events_.size()) throw ValidationError("order size does not match event count");
}

std::vector<Name> EventLog::cases() const {
  std::set<Name> s;
  for (const auto& e : events_) s.insert(e.case_id);
  return {s.begin(), s.end()};
}

std::vector<std::size_t> EventLog::trace(Name c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < events_.size(); ++i)
    if (events_[i].case_id == c) out.push_back(i);
  // Rank by number of same-case predecessors.
  std::vector<std::pair<std::size_t, std::size_t>> ranked;
  for (auto i : out) {
    std::size_t r = 0;
    for (auto j : out) r += order_.precedes(j, i);
    ranked.emplace_back(r, i);
  }
  std::sort(ranked.begin(), ranked.end());
  for (std::size_t k = 0; k < ranked.size(); ++k) out[k] = ranked[k].second;
  return out;
}

EventLog build_order(std::vector<Event> events, std::map<Name, std::string> roles) {
  const std::size_t n = events.size();
  Poset order(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto& x = events[a];
      const auto& y = events[b];
      if (x.case_id == y.case_id) {
        if (std::tie(x.timestamp, a) < std::tie(y.timestamp, b)) order.add(a, b);
      } else if (x.timestamp < y.timestamp) {
        order.add(a, b);
      }
    }
  return EventLog(std::move(events), order.closure(), std::move(roles));
}

namespace {

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits = true;
    } else if (s[i] == '.' && !dot) {
      dot = true;
    } else {
      return false;
    }
  }
  if (!digits) return false;
  out = std::stod(std::string(s));
  return true;
}

}  // namespace

double parse_timestamp(const std::string& text) {
  double v = 0;
  if (parse_number(text, v)) return v;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, consumed = 0;
  double sec = 0;
  // Date with optional time part separated by 'T' or a space.
  if (std::sscanf(text.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) != 3 || consumed != 10)
    throw ParseError("invalid timestamp '" + text + "'");
  std::string_view rest(text);
  rest.remove_prefix(10);
  double offset = 0;
  if (!rest.empty()) {
    if (rest[0] != 'T' && rest[0] != ' ') throw ParseError("invalid timestamp '" + text + "'");
    rest.remove_prefix(1);
    std::string tail(rest);
    int n = 0;
    if (std::sscanf(tail.c_str(), "%2d:%2d%n", &h, &mi, &n) != 2 || n != 5)
      throw ParseError("invalid timestamp '" + text + "'");
    std::size_t pos = 5;
    if (pos < tail.size() && tail[pos] == ':') {
      std::size_t end = pos + 1;
      while (end < tail.size() && (std::isdigit(static_cast<unsigned char>(tail[end])) || tail[end] == '.')) ++end;
      if (!parse_number(std::string_view(tail).substr(pos + 1, end - pos - 1), sec))
        throw ParseError("invalid timestamp '" + text + "'");
      pos = end;
    }
    std::string_view zone = std::string_view(tail).substr(pos);
    if (zone == "Z" || zone.empty()) {
    } else if ((zone[0] == '+' || zone[0] == '-') && zone.size() == 6 && zone[3] == ':') {
      const int zh = std::stoi(std::string(zone.substr(1, 2)));
      const int zm = std::stoi(std::string(zone.substr(4, 2)));
      offset = (zone[0] == '+' ? 1 : -1) * (zh * 3600.0 + zm * 60.0);
    } else {
      throw ParseError("invalid timestamp '" + text + "'");
    }
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec >= 61)
    throw ParseError("timestamp out of range '" + text + "'");
  return static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 + mi * 60.0 + sec - offset;
}

namespace {

// Reads one RFC-4180 record; returns false at end of input. `line` tracks the
// physical line where the record started.
bool read_record(std::istream& in, std::vector<std::string>& fields, int& line, int& next_line) {
  fields.clear();
  line = next_line;
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false, was_quoted = false;
  char ch;
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++next_line;
        field += ch;
      }
    } else if (ch == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (ch == '\n') {
      ++next_line;
      break;
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line);
  fields.push_back(std::move(field));
  return true;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

void parse_resources(const std::string& text, Event& e, std::map<Name, std::string>& roles, int line) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
      throw ParseError("resource entry '" + item + "' is not role:instance", line);
    const std::string role = trim(item.substr(0, colon));
    std::string inst = trim(item.substr(colon + 1));
    std::int64_t count = 1;
    if (const auto star = inst.find('*'); star != std::string::npos) {
      const std::string num = trim(inst.substr(star + 1));
      auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
      if (ec != std::errc() || p != num.data() + num.size() || count < 1)
        throw ParseError("bad multiplicity in resource entry '" + item + "'", line);
      inst = trim(inst.substr(0, star));
    }
    if (inst.empty() || inst == kEpsilonText) throw ParseError("empty resource instance in '" + item + "'", line);
    const Name n(inst);
    if (auto it = roles.find(n); it != roles.end() && it->second != role)
      throw ParseError("instance '" + inst + "' listed under roles '" + it->second + "' and '" + role + "'", line);
    roles[n] = role;
    e.resources.add(n, count);
  }
}

}  // namespace

EventLog parse_log(std::istream& in) {
  std::vector<Event> events;
  std::map<Name, std::string> roles;
  std::vector<std::string> fields;
  int line = 0, next_line = 1;
  bool first = true;
  while (read_record(in, fields, line, next_line)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    for (auto& f : fields) f = trim(f);
    if (first) {
      first = false;
      if (fields.size() >= 3 && fields[0] == "case" && fields[1] == "activity") continue;
    }
    if (fields.size() < 3 || fields.size() > 4)
      throw ParseError("expected 3 or 4 fields, found " + std::to_string(fields.size()), line);
    Event e;
    if (fields[0].empty() || fields[0] == kEpsilonText) throw ParseError("empty case identifier", line);
    if (fields[1].empty()) throw ParseError("empty activity", line);
    e.case_id = Name(fields[0]);
    e.activity = fields[1];
    e.time_text = fields[2];
    try {
      e.timestamp = parse_timestamp(fields[2]);
    } catch (const ParseError& err) {
      throw ParseError(err.what(), line);
    }
    if (fields.size() == 4) parse_resources(fields[3], e, roles, line);
    e.row = static_cast<std::size_t>(line);
    events.push_back(std::move(e));
  }
  std::vector<std::string> warnings;
  std::map<std::tuple<std::string, std::string, double>, std::size_t> seen;
  for (const auto& e : events) {
    auto [it, fresh] = seen.emplace(std::tuple(e.case_id.str(), e.activity, e.timestamp), e.row);
    if (!fresh)
      warnings.push_back("line " + std::to_string(e.row) + ": duplicate of line " + std::to_string(it->second) +
                         " (case " + e.case_id.str() + ", " + e.activity + ", " + e.time_text + "); both kept");
  }
  EventLog log = build_order(std::move(events), std::move(roles));
  log.warnings = std::move(warnings);
  return log;
}

EventLog parse_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open log file '" + path + "'");
  return parse_log(in);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && s == trim(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_time(const Event& e) {
  if (!e.time_text.empty()) return e.time_text;
  if (e.timestamp == std::floor(e.timestamp) && std::abs(e.timestamp) < 1e15)
    return std::to_string(static_cast<std::int64_t>(e.timestamp));
  std::ostringstream os;
  os.precision(17);
  os << e.timestamp;
  return os.str();
}

}  // namespace

void serialize_log(const EventLog& log, std::ostream& out) {
  out << "case,activity,timestamp,resources\n";
  for (const auto& e : log.events()) {
    std::string res;
    for (const auto& [inst, n] : e.resources) {
      if (!res.empty()) res += ';';
      auto it = log.roles().find(inst);
      res += (it == log.roles().end() ? std::string("resource") : it->second) + ":" + inst.str();
      if (n != 1) res += "*" + std::to_string(n);
    }
    out << quote(e.case_id.str()) << ',' << quote(e.activity) << ',' << quote(format_time(e)) << ','
        << quote(res) << '\n';
  }
}

EventLog project_case(const EventLog& log, Name c) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < log.size(); ++i)
    if (log.event(i).case_id == c) keep.push_back(i);
  std::vector<Event> events;
  for (auto i : keep) events.push_back(log.event(i));
  Poset order(keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b)
      if (log.order().precedes(keep[a], keep[b])) order.add(a, b);
  std::map<Name, std::string> roles;
  for (const auto& e : events)
    for (const auto& [inst, n] : e.resources)
      if (auto it = log.roles().find(inst); it != log.roles().end()) roles.insert(*it);
  return EventLog(std::move(events), std::move(order), std::move(roles));
}

std::vector<std::size_t> case_major_order(const EventLog& log) {
  std::vector<std::size_t> out;
  for (Name c : log.cases()) {
    auto t = log.trace(c);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

}  // namespace rcnu
