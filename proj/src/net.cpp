#include "rcnu/net.hpp"

#include <algorithm>
#include <functional>

#include "rcnu/errors.hpp"

namespace rcnu {

std::size_t LabeledNet::add_place(std::string name) {
  places_.push_back(std::move(name));
  return places_.size() - 1;
}

std::size_t LabeledNet::add_transition(std::string name, Label label) {
  transitions_.push_back(std::move(name));
  labels_.push_back(std::move(label));
  pre_.emplace_back();
  post_.emplace_back();
  return transitions_.size() - 1;
}

void LabeledNet::add_input(std::size_t place, std::size_t transition, std::int64_t weight) {
  if (place >= places_.size() || transition >= transitions_.size()) throw Error("arc endpoint not in net");
  pre_[transition].add(place, weight);
}

void LabeledNet::add_output(std::size_t transition, std::size_t place, std::int64_t weight) {
  if (place >= places_.size() || transition >= transitions_.size()) throw Error("arc endpoint not in net");
  post_[transition].add(place, weight);
}

std::size_t LabeledNet::place(const std::string& name) const {
  auto it = std::find(places_.begin(), places_.end(), name);
  if (it == places_.end()) throw Error("unknown place '" + name + "'");
  return static_cast<std::size_t>(it - places_.begin());
}

std::size_t LabeledNet::transition(const std::string& name) const {
  auto it = std::find(transitions_.begin(), transitions_.end(), name);
  if (it == transitions_.end()) throw Error("unknown transition '" + name + "'");
  return static_cast<std::size_t>(it - transitions_.begin());
}

bool enabled(const LabeledNet& net, const Marking& m, std::size_t t) {
  if (t >= net.transition_count()) throw Error("unknown transition index " + std::to_string(t));
  return leq(net.preset(t), m);
}

Marking fire(const LabeledNet& net, const Marking& m, std::size_t t) {
  if (t >= net.transition_count()) throw Error("unknown transition index " + std::to_string(t));
  for (const auto& [p, n] : net.preset(t))
    if (m.count(p) < n)
      throw FiringError("transition '" + net.transition_name(t) + "' not enabled: place '" + net.place_name(p) +
                        "' holds " + std::to_string(m.count(p)) + " of " + std::to_string(n) + " tokens");
  return m - net.preset(t) + net.postset(t);
}

Marking fire_sequence(const LabeledNet& net, Marking m, const std::vector<std::size_t>& sequence) {
  for (auto t : sequence) m = fire(net, m, t);
  return m;
}

std::set<LabelSequence> language(const NetSystem& sys, std::size_t max_len, std::size_t state_cap) {
  std::set<LabelSequence> out;
  LabelSequence labels;
  std::size_t visited = 0;
  std::function<void(const Marking&, std::size_t)> rec = [&](const Marking& m, std::size_t depth) {
    if (++visited > state_cap) throw SizeError("language enumeration exceeded state cap");
    if (m == sys.final) out.insert(labels);
    if (depth == max_len) return;
    for (std::size_t t = 0; t < sys.net.transition_count(); ++t) {
      if (!enabled(sys.net, m, t)) continue;
      const auto& l = sys.net.label(t);
      if (l) labels.push_back(*l);
      rec(fire(sys.net, m, t), depth + 1);
      if (l) labels.pop_back();
    }
  };
  rec(sys.initial, 0);
  return out;
}

std::vector<std::size_t> row_reduce(std::vector<RationalVector>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c].numerator() == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const Rational lead = rows[r][c];
    for (auto& v : rows[r]) v /= lead;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].numerator() == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t k = 0; k < cols; ++k) rows[i][k] -= f * rows[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

std::vector<RationalVector> place_invariants(const LabeledNet& net) {
  const std::size_t np = net.place_count(), nt = net.transition_count();
  // I . C = 0  <=>  C^T I^T = 0, with C[p][t] = post(t)(p) - pre(t)(p).
  std::vector<RationalVector> a(nt, RationalVector(np, 0));
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t p = 0; p < np; ++p) a[t][p] = net.postset(t).count(p) - net.preset(t).count(p);
  const auto pivots = row_reduce(a);
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < np; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    RationalVector v(np, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
    basis.push_back(std::move(v));
  }
  row_reduce(basis);
  return basis;
}

bool in_span(const std::vector<RationalVector>& basis, const RationalVector& v) {
  auto rows = basis;
  const auto before = row_reduce(rows).size();
  rows.push_back(v);
  return row_reduce(rows).size() == before;
}

}  // namespace rcnu
