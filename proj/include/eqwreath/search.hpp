#pragma once

// Shared backtracking core: lexicographically least satisfying assignment
// over mixed-size domains. Values are tried in ascending order per depth, so
// the first full assignment found is the least one.

#include <cstdint>
#include <optional>
#include <vector>

#include "eqwreath/error.hpp"

namespace eqw {

// `ok_after_assign(depth, partial)` is called right after partial[depth] is
// set (entries 0..depth valid) and prunes the branch when it returns false.
// Every value push counts one node against `node_budget`; exhausting the
// budget raises BudgetError.
template <class OnAssign>
std::optional<std::vector<std::uint64_t>> first_satisfying_lex(
    const std::vector<std::uint64_t>& domain_sizes, OnAssign&& ok_after_assign,
    std::uint64_t node_budget, std::uint64_t* nodes_used) {
  const int n = static_cast<int>(domain_sizes.size());
  std::vector<std::uint64_t> assignment(n, 0);
  std::uint64_t nodes = nodes_used ? *nodes_used : 0;

  // depth = next variable to assign
  int depth = 0;
  std::vector<std::uint64_t> next(n, 0);
  while (true) {
    if (depth == n) {
      if (nodes_used) *nodes_used = nodes;
      return assignment;
    }
    bool descended = false;
    while (next[depth] < domain_sizes[depth]) {
      assignment[depth] = next[depth]++;
      if (++nodes > node_budget)
        throw BudgetError("search node budget exceeded (" +
                          std::to_string(node_budget) + " nodes)");
      if (ok_after_assign(depth, assignment)) {
        ++depth;
        if (depth < n) next[depth] = 0;
        descended = true;
        break;
      }
    }
    if (descended) continue;
    if (next[depth] >= domain_sizes[depth]) {
      if (depth == 0) {
        if (nodes_used) *nodes_used = nodes;
        return std::nullopt;
      }
      --depth;
    }
  }
}

}  // namespace eqw
