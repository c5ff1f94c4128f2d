#pragma once

// Level-N universal candidate sets ("xn sets"): the tuples at a tower level
// whose projections solve the wreath-valued system at every coarser-or-equal
// level for every choice of constant function tables, together with the
// universal-tuple construction and a materialized cross-check at micro scale.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eqwreath/group.hpp"
#include "eqwreath/tower.hpp"
#include "eqwreath/word.hpp"

namespace eqw {

struct UniversalProblem {
  FiniteGroup values;  // H
  QuotientTower tower;
  EquationSystem system;
  std::vector<long long> constants;  // ambient, one per a<i>
};

struct UniversalOptions {
  // Per-level budget bound on |H|^((k+n)*|L|); levels above it are refused
  // with an explicit error before any search starts.
  std::uint64_t level_budget_cap = 100'000'000;
  std::uint64_t node_budget = 100'000'000;
  bool keep_witnesses = false;
  int threads = 1;
};

struct XnWitness {
  int level = 0;
  std::uint64_t f_index = 0;            // encoded constant-table tuple
  std::vector<std::uint64_t> phi;       // encoded solving tables, one per variable
};

struct XnSet {
  int level = 0;
  // ascending in the tuple order (first coordinate most significant)
  std::vector<std::vector<int>> members;
  std::map<std::vector<int>, std::vector<XnWitness>> witnesses;
};

// budgets[j-1] = |H|^((k+n)*|L_j|), saturated at 2^62.
std::vector<std::uint64_t> level_budgets(const UniversalProblem& problem);

// Exact member set by exhaustive quantification. The group-component check
// w(a_M, u_M) = 1 runs first at every level M <= N; it is independent of the
// function tables and rejecting on it skips the table search entirely.
XnSet compute_xn(const UniversalProblem& problem, int level,
                 const UniversalOptions& options = {});

// Verifies that the tower map sends every member at the fine level into the
// set at the coarse level; a violator is an implementation bug.
std::optional<std::vector<int>> check_compatibility(const UniversalProblem& problem,
                                                    int fine, int coarse,
                                                    const UniversalOptions& options = {});

// A tuple over the product of (H^L)^m blocks, m = |H|^(k*|L|) per level,
// whose level-M coordinate projections run over all of (H^L)^k exactly once.
struct UniversalTuple {
  int constant_count = 0;
  std::vector<int> level_orders;                 // |L_M| per block
  std::vector<std::uint64_t> per_level_count;    // m per block
  // blocks[j][level_index][c] = encoded function table for coordinate c
  std::vector<std::vector<std::vector<std::uint64_t>>> blocks;
};

UniversalTuple build_universal_tuple(const FiniteGroup& values, int constant_count,
                                     const std::vector<FiniteGroup>& levels,
                                     std::uint64_t coordinate_cap = 4096);

struct MicroCheckResult {
  bool ok = false;
  std::vector<std::vector<int>> projected;  // from the materialized product
  std::vector<std::vector<int>> computed;   // from compute_xn
  std::uint64_t product_order = 0;
  std::string detail;
};

// Materializes the semidirect product of the universal-tuple carrier with the
// finest level, solves the single instance with the universal constants by
// plain enumeration, projects the solutions to their group parts, and
// compares with compute_xn. The two routes share no search code.
MicroCheckResult micro_projection_check(const UniversalProblem& problem,
                                        std::uint64_t order_cap = 1'000'000,
                                        const UniversalOptions& options = {});

struct DeepestMember {
  // (level, member) at the finest level when every set is nonempty
  std::optional<std::pair<int, std::vector<int>>> member;
  int empty_level = 0;  // first level with an empty set, 0 if none
  std::uint64_t refutation_order = 0;
  std::string hint;
  std::vector<std::size_t> level_sizes;
};

// Walks the tower coarse-to-fine; an empty set stops the walk and reports the
// order of the finite product group in which a solvability scan can look for
// an unsolvability certificate.
DeepestMember deepest_nonempty_member(const UniversalProblem& problem,
                                      const UniversalOptions& options = {});

// Least encoded solving table tuple for one level and one choice of constant
// tables, or nullopt when none exists. `const_tables` holds k decoded
// function tables over L_level.
std::optional<std::vector<std::uint64_t>> find_level_solution(
    const UniversalProblem& problem, int level,
    const std::vector<std::vector<std::uint16_t>>& const_tables,
    const std::vector<int>& u_level, std::uint64_t node_budget = 100'000'000);

}  // namespace eqw
