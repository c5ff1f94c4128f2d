#pragma once

// Finite-window assembly: take a member of the deepest xn set, solve the
// system at the deepest level, transport the solution onto the deepest
// section, and verify the window condition pointwise, with an optional
// cross-check against the materialized wreath product.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqwreath/group.hpp"
#include "eqwreath/solver.hpp"
#include "eqwreath/tower.hpp"
#include "eqwreath/universal.hpp"
#include "eqwreath/word.hpp"

namespace eqw {

// f<coordinate> takes `value` at the ambient `point`; unlisted points carry
// the identity. Supports must lie inside the deepest section.
struct SupportPoint {
  int coordinate = 0;  // 1-based
  long long point = 0;
  int value = 0;
};

struct AssemblyOptions {
  // 0 = default: the second-finest section (the finest when depth is 1).
  int probe_level = 0;
  int scan_max_order = 8;
  std::uint64_t crosscheck_order_cap = 10'000;
  UniversalOptions universal;
};

struct AssembledSolution {
  // Solving tables at the source level, one per variable; phi on the deepest
  // section is the transport phi(x) = psi[x projected].
  std::vector<std::vector<std::uint16_t>> psi;
  std::vector<int> u;     // member of the deepest xn set
  int source_level = 0;   // level the tables were solved at (the deepest)
};

// Constant tables at a level: the support read through that level's section.
std::vector<std::vector<std::uint16_t>> pull_back_support(
    const UniversalProblem& problem, const SectionFamily& sections,
    const std::vector<SupportPoint>& support, int level);

// Least solving tables for one level; nullopt only when `u` does not come
// from an xn set at a level at least as fine as `level`.
std::optional<std::vector<std::vector<std::uint16_t>>> solve_level(
    const UniversalProblem& problem, int level,
    const std::vector<std::vector<std::uint16_t>>& const_tables,
    const std::vector<int>& u, const AssemblyOptions& options = {});

AssembledSolution assemble(const UniversalProblem& problem,
                           const SectionFamily& sections,
                           const std::vector<SupportPoint>& support,
                           const std::vector<int>& u,
                           const AssemblyOptions& options = {});

enum class WindowOutcome { InWindow, OutOfWindow };

struct WindowEntry {
  long long x = 0;
  WindowOutcome outcome = WindowOutcome::OutOfWindow;
  std::vector<int> delta;  // one H-element per word when InWindow
  bool identity() const;
};

enum class CrosscheckStatus { Ok, Skipped };

struct WindowReport {
  int probe_level = 0;
  std::vector<WindowEntry> entries;
  bool group_levels_ok = false;
  bool all_identity = false;  // over InWindow entries
  CrosscheckStatus crosscheck = CrosscheckStatus::Skipped;
};

// For each probe point x: when x * (prefix values of the system at the
// ambient assignments) lies inside the deepest section, the H-component of
// the system at x is read off the level-d evaluation and recorded; otherwise
// the point is reported OutOfWindow. Group components are checked at every
// level. When the wreath product at the deepest level fits under the cap the
// H-components are additionally cross-checked against direct evaluation in
// the materialized group; a mismatch raises Error.
WindowReport verify_window(const UniversalProblem& problem,
                           const SectionFamily& sections,
                           const std::vector<SupportPoint>& support,
                           const AssembledSolution& assembled,
                           const AssemblyOptions& options = {});

struct PipelineResult {
  SysFinVerdict scan;
  std::vector<std::uint64_t> budgets;
  std::vector<std::size_t> xn_sizes;
  int empty_level = 0;
  bool compat_ok = true;
  std::vector<int> u;
  std::optional<WindowReport> window;
  bool pass = false;
  int exit_code = 1;
  std::string report;  // full line-oriented report, stable field order
};

// scan (advisory) -> xn per level -> compatibility -> deepest member ->
// assemble -> verify window. Exit code 0 exactly when every InWindow entry is
// the identity and all group-level checks pass.
PipelineResult run_pipeline(const UniversalProblem& problem,
                            const SectionFamily& sections,
                            const std::vector<SupportPoint>& support,
                            const AssemblyOptions& options = {});

}  // namespace eqw
