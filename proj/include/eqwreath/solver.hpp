#pragma once

// Solvability of equation systems in finite groups: lexicographically least
// solution search with partial-assignment pruning, the for-all-constants
// check, and a catalog scan for systems that fail in some small group.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqwreath/group.hpp"
#include "eqwreath/word.hpp"

namespace eqw {

struct SolveOptions {
  std::uint64_t node_budget = 100'000'000;
  int threads = 1;
  // solvable_in only: quotient the constant-tuple space by simultaneous
  // conjugation before searching. Verdicts and certificates are unchanged;
  // disable for paranoid full scans.
  bool symmetry_reduction = true;
};

enum class SolveStatus { Solved, NoSolution, SolvableInGroup, NotSolvable };

struct SolveReport {
  SolveStatus status;
  std::vector<int> solution;  // x-bar when Solved
  std::vector<int> witness;   // a-bar when NotSolvable
  std::string group_name;
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

// Least solution under the ordering (value of x1, then x2, ...) by element
// index, or NoSolution after an exhaustive pruned search. Every Solved result
// is re-validated through evaluate_system before it is returned.
SolveReport solve(const FiniteGroup& group, const EquationSystem& system,
                  const std::vector<int>& consts, const SolveOptions& options = {});

// Checks "for all constants there exist variables". The witness on failure is
// the lexicographically least refuting constant tuple.
SolveReport solvable_in(const FiniteGroup& group, const EquationSystem& system,
                        const SolveOptions& options = {});

struct SysFinCounterexample {
  FiniteGroup group;
  std::vector<int> witness;
  SolveReport certificate;
};

struct SysFinVerdict {
  // Empty when no counterexample was found up to max_order. Absence of a
  // counterexample is one-sided evidence, not a solvability proof.
  std::optional<SysFinCounterexample> counterexample;
  int max_order = 0;
};

// Runs solvable_in over catalog(max_order), ascending by order, and stops at
// the first refuting group.
SysFinVerdict scan_sys_fin(const EquationSystem& system, int max_order,
                           const SolveOptions& options = {});

// Plain nested-loop enumeration with no pruning; reference oracle for solve.
// Requires |G|^n <= 10^6.
SolveReport brute_oracle(const FiniteGroup& group, const EquationSystem& system,
                         const std::vector<int>& consts);

// schedule[j] = indices of words whose variables all have index <= j;
// schedule[0] holds the constant-only words.
std::vector<std::vector<int>> words_by_max_variable(const EquationSystem& system);

}  // namespace eqw
