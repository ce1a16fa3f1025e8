#include "rcnu/dot.hpp"

#include <array>
#include <sstream>

namespace rcnu {
namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

constexpr std::array<const char*, 6> kRoleColors = {"#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#bde0fe"};

std::string inscription(const Transition& t, const std::vector<ArcEntry>& entries) {
  const auto var = [](const std::vector<Variable>& vars, int slot) {
    return slot < 0 ? std::string(kEpsilonText) : vars.at(slot).name;
  };
  std::string s;
  for (const auto& e : entries) {
    if (!s.empty()) s += " + ";
    if (e.count != 1) s += std::to_string(e.count) + "*";
    s += "(" + var(t.case_vars, e.vars.case_slot) + "," + var(t.resource_vars, e.vars.resource_slot) + ")";
  }
  return s;
}

std::string marking_text(const TokenBag& bag) {
  std::string s;
  for (const auto& [t, k] : bag) {
    if (!s.empty()) s += "\\n";
    if (k != 1) s += std::to_string(k) + "*";
    s += to_string(t);
  }
  return s;
}

void reduced_edges(std::ostream& out, const Poset& order, const std::string& prefix) {
  for (const auto& [a, b] : order.reduction().pairs())
    out << "  " << prefix << a << " -> " << prefix << b << ";\n";
}

}  // namespace

std::string net_to_dot(const RcNuNet& net) {
  std::ostringstream out;
  out << "digraph net {\n  rankdir=LR;\n";
  for (std::size_t p = 0; p < net.places().size(); ++p) {
    const auto& pl = net.place(p);
    std::string label = pl.name;
    const auto tokens = marking_text(net.initial().places[p]);
    if (!tokens.empty()) label += "\\n" + tokens;
    out << "  p" << p << " [shape=circle, label=" << quoted(label);
    if (pl.kind != PlaceKind::kProduction)
      out << ", style=filled, fillcolor=" << quoted(kRoleColors[pl.role % kRoleColors.size()])
          << (pl.kind == PlaceKind::kResourceBusy ? ", peripheries=2" : "");
    out << "];\n";
  }
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    const auto& tr = net.transition(t);
    out << "  t" << t << " [shape=box, label=" << quoted(tr.label ? tr.name : tr.name + " (tau)");
    if (!tr.label) out << ", style=filled, fillcolor=black, fontcolor=white";
    out << "];\n";
  }
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    const auto& tr = net.transition(t);
    for (const auto& a : tr.inputs)
      out << "  p" << a.place << " -> t" << t << " [label=" << quoted(inscription(tr, a.inscription)) << "];\n";
    for (const auto& a : tr.outputs)
      out << "  t" << t << " -> p" << a.place << " [label=" << quoted(inscription(tr, a.inscription)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string log_to_dot(const EventLog& log) {
  std::ostringstream out;
  out << "digraph log {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& e = log.event(i);
    out << "  e" << i << " [shape=box, label=" << quoted(e.activity + "\\n" + e.case_id.str() + " @ " + e.time_text)
        << "];\n";
  }
  reduced_edges(out, log.order(), "e");
  out << "}\n";
  return out.str();
}

std::string report_to_dot(const AlignmentReport& r) {
  std::ostringstream out;
  out << "digraph alignment {\n  rankdir=LR;\n  node [shape=box, style=filled];\n";
  for (std::size_t k = 0; k < r.intervals.size(); ++k) {
    out << "  subgraph cluster_" << k << " {\n    color=red;\n    label=" << quoted("interval " + std::to_string(k))
        << ";\n";
    for (auto m : r.intervals[k].moves) out << "    m" << m << ";\n";
    out << "  }\n";
  }
  for (const auto& m : r.moves) {
    const char* color = m.kind == MoveKind::kSync ? "#9be39b" : m.kind == MoveKind::kModel ? "#c9a0dc" : "#fff3a0";
    std::string label = m.activity ? *m.activity : "tau";
    if (m.case_id) label += "\\n" + *m.case_id;
    for (const auto& [v, x] : m.resource_bindings) label += "\\n" + v + "=" + x;
    out << "  m" << m.index << " [label=" << quoted(label) << ", fillcolor=" << quoted(color) << "];\n";
  }
  Poset order(r.moves.size());
  for (const auto& [a, b] : r.order) order.add(a, b);
  reduced_edges(out, order, "m");
  out << "}\n";
  return out.str();
}

}  // namespace rcnu
