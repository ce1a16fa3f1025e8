#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rcnu/errors.hpp"

namespace rcnu {

enum class Comparator { kLe, kEq, kGe };

struct LinearRow {
  std::vector<std::pair<std::size_t, std::int64_t>> terms;  // (variable, coefficient)
  Comparator cmp = Comparator::kLe;
  std::int64_t bound = 0;
  std::string name;
};

// Minimize constant + sum objective[v] * x_v over x in {0,1}^n.
struct BinaryProgram {
  std::size_t n_vars = 0;
  std::vector<std::int64_t> objective;
  std::int64_t constant = 0;
  std::vector<LinearRow> rows;
  std::vector<std::optional<int>> fixings;  // empty or one entry per variable
  std::vector<std::string> names;           // optional, for dumps

  std::size_t add_var(std::string name, std::int64_t cost = 0);
  void fix(std::size_t var, int value);
};

struct SolveOptions {
  std::size_t node_budget = 1'000'000;
  // Value tried first for each variable (default 0).
  std::vector<int> value_hint;
  // Variables branched on first, in this order; the rest follow by index.
  std::vector<std::size_t> branch_priority;
  // A known feasible assignment to start from.
  std::optional<std::vector<int>> incumbent;
};

struct Solution {
  bool feasible = false;
  std::vector<int> assignment;
  std::int64_t objective = 0;
  std::size_t nodes = 0;
};

// Budget ran out before optimality was proven; carries the best assignment found.
struct IlpBudgetExhausted : BudgetError {
  IlpBudgetExhausted(const std::string& what, std::optional<Solution> best)
      : BudgetError(what), incumbent(std::move(best)) {}
  std::optional<Solution> incumbent;
};

// Depth-first branch and bound with bound propagation on every row.
Solution solve(const BinaryProgram& p, const SolveOptions& options = {});

struct Feasibility {
  bool ok = true;
  std::optional<std::size_t> row;  // first violated row; nullopt for fixings or arity
  std::string message;
};

Feasibility check_feasible(const BinaryProgram& p, const std::vector<int>& assignment);
std::int64_t evaluate(const BinaryProgram& p, const std::vector<int>& assignment);

// Line format: "min: ..." then one "name: terms <= bound" per row and
// "fix: x = v" per fixing.
std::string to_lp(const BinaryProgram& p);

}  // namespace rcnu
