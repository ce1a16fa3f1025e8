#include "rcnu/ilp.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace rcnu {

std::size_t BinaryProgram::add_var(std::string name, std::int64_t cost) {
  names.push_back(std::move(name));
  objective.push_back(cost);
  if (!fixings.empty()) fixings.emplace_back();
  return n_vars++;
}

void BinaryProgram::fix(std::size_t var, int value) {
  if (fixings.size() < n_vars) fixings.resize(n_vars);
  fixings[var] = value;
}

namespace {

std::int64_t activity(const LinearRow& row, const std::vector<int>& x) {
  std::int64_t s = 0;
  for (const auto& [v, a] : row.terms) s += a * x[v];
  return s;
}

bool satisfied(const LinearRow& row, std::int64_t act) {
  switch (row.cmp) {
    case Comparator::kLe: return act <= row.bound;
    case Comparator::kEq: return act == row.bound;
    case Comparator::kGe: return act >= row.bound;
  }
  return false;
}

// Rows rewritten as sum a_v x_v <= b.
struct Normal {
  std::vector<std::pair<std::size_t, std::int64_t>> terms;
  std::int64_t bound;
};

class Search {
 public:
  Search(const BinaryProgram& p, const SolveOptions& o) : p_(p), o_(o), value_(p.n_vars, -1), uses_(p.n_vars) {
    for (const auto& r : p.rows) {
      auto add = [&](std::int64_t sign) {
        Normal n{{}, sign * r.bound};
        for (const auto& [v, a] : r.terms)
          if (a != 0) n.terms.emplace_back(v, sign * a);
        rows_.push_back(std::move(n));
      };
      if (r.cmp != Comparator::kGe) add(1);
      if (r.cmp != Comparator::kLe) add(-1);
    }
    min_act_.assign(rows_.size(), 0);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [v, a] : rows_[r].terms) {
        min_act_[r] += std::min<std::int64_t>(a, 0);
        uses_[v].emplace_back(r, a);
      }
    lb_ = p.constant;
    for (std::size_t v = 0; v < p.n_vars; ++v) lb_ += std::min<std::int64_t>(p.objective[v], 0);
    std::vector<bool> placed(p.n_vars, false);
    for (auto v : o.branch_priority)
      if (v < p.n_vars && !placed[v]) {
        order_.push_back(v);
        placed[v] = true;
      }
    for (std::size_t v = 0; v < p.n_vars; ++v)
      if (!placed[v]) order_.push_back(v);
    if (o.incumbent && check_feasible(p, *o.incumbent).ok) {
      best_.feasible = true;
      best_.assignment = *o.incumbent;
      best_.objective = evaluate(p, *o.incumbent);
    }
  }

  Solution run() {
    bool ok = true;
    for (std::size_t v = 0; v < p_.fixings.size() && ok; ++v)
      if (p_.fixings[v]) ok = assign(v, *p_.fixings[v]);
    for (std::size_t r = 0; r < rows_.size() && ok; ++r) ok = min_act_[r] <= rows_[r].bound && propagate_row(r);
    if (ok) ok = drain();
    if (ok) dfs(0);
    best_.nodes = nodes_;
    return best_;
  }

 private:
  bool assign(std::size_t v, int val) {
    if (value_[v] >= 0) return value_[v] == val;
    value_[v] = val;
    trail_.push_back(v);
    const auto c = p_.objective[v];
    lb_ += (val ? c : 0) - std::min<std::int64_t>(c, 0);
    bool ok = true;
    for (const auto& [r, a] : uses_[v]) {
      min_act_[r] += (val ? a : 0) - std::min<std::int64_t>(a, 0);
      ok = ok && min_act_[r] <= rows_[r].bound;
      pending_.push_back(r);
    }
    return ok;
  }

  // Fix every free variable whose other value would break row r.
  bool propagate_row(std::size_t r) {
    const auto slack = rows_[r].bound - min_act_[r];
    for (const auto& [v, a] : rows_[r].terms) {
      if (value_[v] >= 0) continue;
      if (a > 0 && a > slack) {
        if (!assign(v, 0)) return false;
      } else if (a < 0 && -a > slack) {
        if (!assign(v, 1)) return false;
      }
    }
    return true;
  }

  bool drain() {
    while (!pending_.empty()) {
      const auto r = pending_.back();
      pending_.pop_back();
      if (!propagate_row(r)) {
        pending_.clear();
        return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto v = trail_.back();
      trail_.pop_back();
      const int val = value_[v];
      const auto c = p_.objective[v];
      lb_ -= (val ? c : 0) - std::min<std::int64_t>(c, 0);
      for (const auto& [r, a] : uses_[v]) min_act_[r] -= (val ? a : 0) - std::min<std::int64_t>(a, 0);
      value_[v] = -1;
    }
  }

  void dfs(std::size_t cursor) {
    if (++nodes_ > o_.node_budget)
      throw IlpBudgetExhausted("0/1 program search exhausted its budget of " + std::to_string(o_.node_budget) +
                                   " nodes",
                               best_.feasible ? std::optional<Solution>(best_) : std::nullopt);
    if (best_.feasible && lb_ >= best_.objective) return;
    while (cursor < order_.size() && value_[order_[cursor]] >= 0) ++cursor;
    if (cursor == order_.size()) {
      best_.feasible = true;
      best_.assignment.assign(value_.begin(), value_.end());
      best_.objective = lb_;
      return;
    }
    const auto v = order_[cursor];
    const int first = v < o_.value_hint.size() ? o_.value_hint[v] : 0;
    for (int val : {first, 1 - first}) {
      const auto mark = trail_.size();
      if (assign(v, val) && drain()) dfs(cursor + 1);
      pending_.clear();
      undo(mark);
      if (best_.feasible && lb_ >= best_.objective) return;
    }
  }

  const BinaryProgram& p_;
  const SolveOptions& o_;
  std::vector<Normal> rows_;
  std::vector<int> value_;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> uses_;
  std::vector<std::int64_t> min_act_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> pending_;
  std::vector<std::size_t> order_;
  std::int64_t lb_ = 0;
  std::size_t nodes_ = 0;
  Solution best_;
};

}  // namespace

Solution solve(const BinaryProgram& p, const SolveOptions& options) { return Search(p, options).run(); }

std::int64_t evaluate(const BinaryProgram& p, const std::vector<int>& x) {
  std::int64_t s = p.constant;
  for (std::size_t v = 0; v < p.n_vars; ++v) s += p.objective[v] * x[v];
  return s;
}

Feasibility check_feasible(const BinaryProgram& p, const std::vector<int>& x) {
  if (x.size() != p.n_vars) return {false, std::nullopt, "assignment has the wrong length"};
  for (std::size_t v = 0; v < p.n_vars; ++v)
    if (x[v] != 0 && x[v] != 1) return {false, std::nullopt, "variable " + std::to_string(v) + " is not binary"};
  for (std::size_t v = 0; v < p.fixings.size(); ++v)
    if (p.fixings[v] && x[v] != *p.fixings[v])
      return {false, std::nullopt, "variable " + (v < p.names.size() ? p.names[v] : std::to_string(v)) +
                                       " differs from its fixing"};
  for (std::size_t r = 0; r < p.rows.size(); ++r)
    if (!satisfied(p.rows[r], activity(p.rows[r], x)))
      return {false, r, "row " + (p.rows[r].name.empty() ? std::to_string(r) : p.rows[r].name) + " is violated"};
  return {};
}

std::string to_lp(const BinaryProgram& p) {
  auto name = [&](std::size_t v) { return v < p.names.size() && !p.names[v].empty() ? p.names[v] : "x" + std::to_string(v); };
  auto terms = [&](const std::vector<std::pair<std::size_t, std::int64_t>>& ts) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, a] : ts) {
      if (a == 0) continue;
      if (!first) os << (a < 0 ? " - " : " + ");
      else if (a < 0) os << "-";
      first = false;
      const auto m = a < 0 ? -a : a;
      if (m != 1) os << m << " ";
      os << name(v);
    }
    if (first) os << "0";
    return os.str();
  };
  std::ostringstream os;
  std::vector<std::pair<std::size_t, std::int64_t>> obj;
  for (std::size_t v = 0; v < p.n_vars; ++v) obj.emplace_back(v, p.objective[v]);
  os << "min: " << terms(obj);
  if (p.constant != 0) os << (p.constant < 0 ? " - " : " + ") << (p.constant < 0 ? -p.constant : p.constant);
  os << "\n";
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r];
    os << (row.name.empty() ? "r" + std::to_string(r) : row.name) << ": " << terms(row.terms)
       << (row.cmp == Comparator::kLe ? " <= " : row.cmp == Comparator::kEq ? " = " : " >= ") << row.bound << "\n";
  }
  for (std::size_t v = 0; v < p.fixings.size(); ++v)
    if (p.fixings[v]) os << "fix: " << name(v) << " = " << *p.fixings[v] << "\n";
  return os.str();
}

}  // namespace rcnu
