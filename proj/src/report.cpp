#include "rcnu/report.hpp"

#include <json.hpp>

namespace rcnu {
namespace {

using Json = nlohmann::ordered_json;

MoveKind kind_from(const std::string& s) {
  if (s == "sync") return MoveKind::kSync;
  if (s == "model") return MoveKind::kModel;
  if (s == "log") return MoveKind::kLog;
  throw ParseError("unknown move kind '" + s + "'");
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

AlignmentReport make_report(const RcNuNet& net, const EventLog& log, const Alignment& al, const CostTable& costs,
                            const std::string& mode) {
  AlignmentReport r;
  r.mode = mode;
  r.costs = costs;
  for (std::size_t i = 0; i < al.moves.size(); ++i) {
    const auto& mv = al.moves[i];
    ReportMove m;
    m.index = i;
    m.kind = mv.kind;
    m.event = mv.event;
    m.cost = move_cost(net, mv, costs);
    if (mv.event) {
      const auto& e = log.event(*mv.event);
      m.activity = e.activity;
      m.case_id = e.case_id.str();
    }
    if (mv.transition) {
      const auto& t = net.transition(*mv.transition);
      m.transition = t.name;
      if (!m.activity) m.activity = t.label;
      for (std::size_t v = 0; v < t.case_vars.size(); ++v)
        m.case_bindings[t.case_vars[v].name] = display(mv.mode.case_values.at(v));
      for (std::size_t v = 0; v < t.resource_vars.size(); ++v)
        m.resource_bindings[t.resource_vars[v].name] = display(mv.mode.resource_values.at(v));
      if (!m.case_id)
        if (auto c = firing_case(net, *mv.transition, mv.mode)) m.case_id = c->str();
    }
    r.total += m.cost;
    if (m.case_id) r.per_case[*m.case_id] += m.cost;
    r.moves.push_back(std::move(m));
  }
  r.order = al.order.pairs();
  return r;
}

AlignmentReport make_report(const RcNuNet& net, const EventLog& log, const ApproxResult& res, const CostTable& costs) {
  auto r = make_report(net, log, res.alignment, costs, "approx");
  r.violating = res.violating;
  r.warnings = res.warnings;
  for (const auto& s : res.segments)
    r.intervals.push_back(
        {s.segment.lower, s.segment.upper, s.segment.members, s.moves, s.original_cost, s.cost, s.fallback});
  return r;
}

std::string report_to_json(const AlignmentReport& r) {
  Json j;
  j["version"] = std::to_string(r.major) + "." + std::to_string(r.minor);
  j["mode"] = r.mode;
  j["costs"] = {{"sync", r.costs.sync}, {"tau", r.costs.tau}, {"visible", r.costs.visible}};
  j["total_cost"] = r.total;
  Json cases = Json::object();
  for (const auto& [c, v] : r.per_case) cases[c] = v;
  j["case_costs"] = cases;
  j["violating"] = r.violating;
  Json moves = Json::array();
  for (const auto& m : r.moves) {
    Json jm;
    jm["index"] = m.index;
    jm["kind"] = to_string(m.kind);
    jm["activity"] = optional_json(m.activity);
    jm["case"] = optional_json(m.case_id);
    jm["transition"] = optional_json(m.transition);
    jm["event"] = optional_json(m.event);
    jm["case_bindings"] = m.case_bindings;
    jm["resource_bindings"] = m.resource_bindings;
    jm["cost"] = m.cost;
    moves.push_back(std::move(jm));
  }
  j["moves"] = std::move(moves);
  Json order = Json::array();
  for (const auto& [a, b] : r.order) order.push_back({a, b});
  j["order"] = std::move(order);
  Json intervals = Json::array();
  for (const auto& iv : r.intervals)
    intervals.push_back({{"lower", iv.lower},
                         {"upper", iv.upper},
                         {"members", iv.members},
                         {"moves", iv.moves},
                         {"original_cost", iv.original_cost},
                         {"cost", iv.cost},
                         {"fallback", iv.fallback}});
  j["intervals"] = std::move(intervals);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

AlignmentReport parse_report(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    AlignmentReport r;
    const auto version = j.at("version").get<std::string>();
    const auto dot = version.find('.');
    if (dot == std::string::npos) throw ParseError("bad report version '" + version + "'");
    r.major = std::stoi(version.substr(0, dot));
    r.minor = std::stoi(version.substr(dot + 1));
    if (r.major != kReportMajor)
      throw ParseError("unsupported report version " + version + " (expected " + std::to_string(kReportMajor) + ".x)");
    r.mode = j.at("mode").get<std::string>();
    const auto& costs = j.at("costs");
    r.costs = {costs.at("sync").get<std::int64_t>(), costs.at("tau").get<std::int64_t>(),
               costs.at("visible").get<std::int64_t>()};
    r.total = j.at("total_cost").get<std::int64_t>();
    for (const auto& [c, v] : j.at("case_costs").items()) r.per_case[c] = v.get<std::int64_t>();
    r.violating = j.at("violating").get<bool>();
    for (const auto& jm : j.at("moves")) {
      ReportMove m;
      m.index = jm.at("index").get<std::size_t>();
      m.kind = kind_from(jm.at("kind").get<std::string>());
      m.activity = optional_from<std::string>(jm, "activity");
      m.case_id = optional_from<std::string>(jm, "case");
      m.transition = optional_from<std::string>(jm, "transition");
      m.event = optional_from<std::size_t>(jm, "event");
      m.case_bindings = jm.at("case_bindings").get<std::map<std::string, std::string>>();
      m.resource_bindings = jm.at("resource_bindings").get<std::map<std::string, std::string>>();
      m.cost = jm.at("cost").get<std::int64_t>();
      r.moves.push_back(std::move(m));
    }
    for (const auto& p : j.at("order")) r.order.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
    for (const auto& iv : j.at("intervals"))
      r.intervals.push_back({iv.at("lower").get<std::vector<std::size_t>>(),
                             iv.at("upper").get<std::vector<std::size_t>>(),
                             iv.at("members").get<std::vector<std::size_t>>(),
                             iv.at("moves").get<std::vector<std::size_t>>(), iv.at("original_cost").get<std::int64_t>(),
                             iv.at("cost").get<std::int64_t>(), iv.at("fallback").get<bool>()});
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

Alignment report_alignment(const AlignmentReport& r, const RcNuNet& net) {
  Alignment al;
  for (const auto& m : r.moves) {
    Move mv;
    mv.kind = m.kind;
    mv.event = m.event;
    if (m.transition) {
      const auto t = net.transition_index(*m.transition);
      mv.transition = t;
      const auto& tr = net.transition(t);
      const auto value = [](const std::map<std::string, std::string>& b, const std::string& var) {
        auto it = b.find(var);
        if (it == b.end()) throw ParseError("move binds no value for variable '" + var + "'");
        return it->second == kEpsilonText ? Name() : Name(it->second);
      };
      for (const auto& v : tr.case_vars) mv.mode.case_values.push_back(value(m.case_bindings, v.name));
      for (const auto& v : tr.resource_vars) mv.mode.resource_values.push_back(value(m.resource_bindings, v.name));
    }
    al.moves.push_back(std::move(mv));
  }
  al.order = Poset(al.moves.size());
  for (const auto& [a, b] : r.order) {
    if (a >= al.moves.size() || b >= al.moves.size()) throw ParseError("order pair refers to a missing move");
    al.order.add(a, b);
  }
  return al;
}

}  // namespace rcnu
