#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcnu/align.hpp"
#include "rcnu/approx.hpp"

namespace rcnu {

inline constexpr int kReportMajor = 1;
inline constexpr int kReportMinor = 0;

struct ReportMove {
  std::size_t index = 0;
  MoveKind kind = MoveKind::kLog;
  std::optional<std::string> activity;  // nullopt for silent model moves
  std::optional<std::string> case_id;
  std::optional<std::string> transition;
  std::optional<std::size_t> event;
  std::map<std::string, std::string> case_bindings;
  std::map<std::string, std::string> resource_bindings;
  std::int64_t cost = 0;

  friend bool operator==(const ReportMove&, const ReportMove&) = default;
};

struct ReportInterval {
  std::vector<std::size_t> lower;    // composed-move indices
  std::vector<std::size_t> upper;
  std::vector<std::size_t> members;  // composed-move indices
  std::vector<std::size_t> moves;    // indices into the report's moves
  std::int64_t original_cost = 0;
  std::int64_t cost = 0;
  bool fallback = false;

  friend bool operator==(const ReportInterval&, const ReportInterval&) = default;
};

struct AlignmentReport {
  int major = kReportMajor;
  int minor = kReportMinor;
  std::string mode = "exact";
  CostTable costs;
  std::vector<ReportMove> moves;
  std::vector<OrderPair> order;  // transitively closed
  std::int64_t total = 0;
  std::map<std::string, std::int64_t> per_case;
  bool violating = false;
  std::vector<ReportInterval> intervals;
  std::vector<std::string> warnings;
};

AlignmentReport make_report(const RcNuNet& net, const EventLog& log, const Alignment& al, const CostTable& costs = {},
                            const std::string& mode = "exact");
// Adds the violation flag, segments and warnings of an approximation run.
AlignmentReport make_report(const RcNuNet& net, const EventLog& log, const ApproxResult& res,
                            const CostTable& costs = {});

std::string report_to_json(const AlignmentReport& r);
// Throws ParseError on malformed input or an unknown major version.
AlignmentReport parse_report(const std::string& json_text);

// Moves and order back in terms of the net's transitions and variables.
Alignment report_alignment(const AlignmentReport& r, const RcNuNet& net);

}  // namespace rcnu
