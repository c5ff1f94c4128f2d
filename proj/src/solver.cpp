#include "eqwreath/solver.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "eqwreath/search.hpp"

namespace eqw {

namespace {

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void check_constants(const FiniteGroup& group, const EquationSystem& system,
                     const std::vector<int>& consts) {
  if (static_cast<int>(consts.size()) < system.constant_count())
    throw Error("expected " + std::to_string(system.constant_count()) +
                " constant assignments, got " + std::to_string(consts.size()));
  for (int v : consts)
    if (v < 0 || v >= group.order())
      throw Error("constant assignment " + std::to_string(v) +
                  " is outside the group");
}

// Word evaluation against a partial variable assignment; valid only for
// words whose variables are all assigned.
int eval_partial(const Word& w, const FiniteGroup& g, const std::vector<int>& consts,
                 const std::vector<std::uint64_t>& vars) {
  int acc = 0;
  for (const Letter& l : w.letters()) {
    int value = l.kind == SymbolKind::Constant
                    ? consts[l.index - 1]
                    : static_cast<int>(vars[l.index - 1]);
    if (l.sign < 0) value = g.inv(value);
    acc = g.mul(acc, value);
  }
  return acc;
}

std::optional<std::vector<std::uint64_t>> search_tail(
    const FiniteGroup& group, const EquationSystem& system,
    const std::vector<int>& consts, const std::vector<std::vector<int>>& schedule,
    const std::vector<std::uint64_t>& prefix, std::uint64_t node_budget,
    std::uint64_t* nodes) {
  const int n = system.variable_count();
  const int fixed = static_cast<int>(prefix.size());
  std::vector<std::uint64_t> domains(n - fixed, group.order());
  std::vector<std::uint64_t> full(prefix);
  full.resize(n);
  auto ok = [&](int depth, const std::vector<std::uint64_t>& partial) {
    full[fixed + depth] = partial[depth];
    for (int wi : schedule[fixed + depth + 1])
      if (eval_partial(system.words()[wi], group, consts, full) != 0) return false;
    return true;
  };
  auto tail = first_satisfying_lex(domains, ok, node_budget, nodes);
  if (!tail) return std::nullopt;
  std::vector<std::uint64_t> out(prefix);
  out.insert(out.end(), tail->begin(), tail->end());
  return out;
}

}  // namespace

std::vector<std::vector<int>> words_by_max_variable(const EquationSystem& system) {
  std::vector<std::vector<int>> schedule(system.variable_count() + 1);
  for (int i = 0; i < system.equation_count(); ++i)
    schedule[system.words()[i].max_variable_index()].push_back(i);
  return schedule;
}

SolveReport solve(const FiniteGroup& group, const EquationSystem& system,
                  const std::vector<int>& consts, const SolveOptions& options) {
  Clock clock;
  check_constants(group, system, consts);
  const int n = system.variable_count();

  if (saturating_pow(group.order(), n) > options.node_budget)
    throw BudgetError("search space |" + group.name() + "|^" + std::to_string(n) +
                      " exceeds the node budget of " +
                      std::to_string(options.node_budget));

  SolveReport report;
  report.group_name = group.name();
  report.nodes = 0;

  const auto schedule = words_by_max_variable(system);
  std::vector<std::uint64_t> empty_vars;
  for (int wi : schedule[0]) {
    if (eval_partial(system.words()[wi], group, consts, empty_vars) != 0) {
      report.status = SolveStatus::NoSolution;
      report.seconds = clock.seconds();
      return report;
    }
  }

  std::optional<std::vector<std::uint64_t>> found;
  if (options.threads > 1 && n >= 1) {
    // fan out over the first variable in contiguous chunks; each chunk scans
    // its values in ascending order, so the first chunk with a solution holds
    // the least one
    const int workers = std::min(options.threads, group.order());
    std::vector<std::optional<std::vector<std::uint64_t>>> chunk_best(workers);
    std::vector<std::uint64_t> chunk_nodes(workers, 0);
    std::vector<std::exception_ptr> chunk_error(workers);
    std::vector<std::thread> pool;
    for (int c = 0; c < workers; ++c) {
      pool.emplace_back([&, c] {
        try {
          const int lo = static_cast<int>(
              static_cast<long long>(group.order()) * c / workers);
          const int hi = static_cast<int>(
              static_cast<long long>(group.order()) * (c + 1) / workers);
          for (int v0 = lo; v0 < hi && !chunk_best[c]; ++v0) {
            std::vector<std::uint64_t> prefix{static_cast<std::uint64_t>(v0)};
            ++chunk_nodes[c];
            bool ok = true;
            for (int wi : schedule[1])
              if (eval_partial(system.words()[wi], group, consts, prefix) != 0) {
                ok = false;
                break;
              }
            if (!ok) continue;
            chunk_best[c] = search_tail(group, system, consts, schedule, prefix,
                                        options.node_budget, &chunk_nodes[c]);
          }
        } catch (...) {
          chunk_error[c] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (int c = 0; c < workers; ++c) {
      if (chunk_error[c]) std::rethrow_exception(chunk_error[c]);
      report.nodes += chunk_nodes[c];
      if (chunk_best[c] && !found) found = std::move(chunk_best[c]);
    }
  } else {
    found = search_tail(group, system, consts, schedule, {}, options.node_budget,
                        &report.nodes);
  }

  if (!found) {
    report.status = SolveStatus::NoSolution;
    report.seconds = clock.seconds();
    return report;
  }
  report.solution.assign(found->begin(), found->end());
  // soundness gate: a returned solution always re-validates
  for (int value : evaluate_system(system, group, consts, report.solution))
    if (value != 0)
      throw Error("internal error: solver returned a non-solution");
  report.status = SolveStatus::Solved;
  report.seconds = clock.seconds();
  return report;
}

namespace {

// Orbit representatives of constant tuples under simultaneous conjugation.
// Tuples are scanned in ascending order (first coordinate most significant),
// so each representative is the least member of its orbit and the first
// failing representative is also the least failing tuple overall.
std::vector<std::vector<int>> constant_tuples(const FiniteGroup& group, int k,
                                              bool symmetry_reduction) {
  const std::uint64_t total = saturating_pow(group.order(), k);
  std::vector<std::vector<int>> out;
  auto tuple_of = [&](std::uint64_t index) {
    std::vector<int> t(k);
    for (int i = k - 1; i >= 0; --i) {
      t[i] = static_cast<int>(index % group.order());
      index /= group.order();
    }
    return t;
  };
  if (!symmetry_reduction || k == 0 || total > (std::uint64_t{1} << 24)) {
    for (std::uint64_t i = 0; i < total; ++i) out.push_back(tuple_of(i));
    return out;
  }
  std::vector<char> visited(total, 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    if (visited[i]) continue;
    std::vector<int> rep = tuple_of(i);
    out.push_back(rep);
    for (int g = 0; g < group.order(); ++g) {
      std::uint64_t conj = 0;
      for (int j = 0; j < k; ++j)
        conj = conj * group.order() + group.conjugate(rep[j], g);
      visited[conj] = 1;
    }
  }
  return out;
}

}  // namespace

SolveReport solvable_in(const FiniteGroup& group, const EquationSystem& system,
                        const SolveOptions& options) {
  Clock clock;
  SolveReport report;
  report.group_name = group.name();
  for (const std::vector<int>& consts :
       constant_tuples(group, system.constant_count(), options.symmetry_reduction)) {
    SolveReport inner = solve(group, system, consts, options);
    report.nodes += inner.nodes;
    if (inner.status == SolveStatus::NoSolution) {
      report.status = SolveStatus::NotSolvable;
      report.witness = consts;
      report.seconds = clock.seconds();
      return report;
    }
  }
  report.status = SolveStatus::SolvableInGroup;
  report.seconds = clock.seconds();
  return report;
}

SysFinVerdict scan_sys_fin(const EquationSystem& system, int max_order,
                           const SolveOptions& options) {
  SysFinVerdict verdict;
  verdict.max_order = max_order;
  for (const FiniteGroup& group : catalog(max_order)) {
    SolveReport report = solvable_in(group, system, options);
    if (report.status == SolveStatus::NotSolvable) {
      verdict.counterexample =
          SysFinCounterexample{group, report.witness, std::move(report)};
      return verdict;
    }
  }
  return verdict;
}

SolveReport brute_oracle(const FiniteGroup& group, const EquationSystem& system,
                         const std::vector<int>& consts) {
  Clock clock;
  check_constants(group, system, consts);
  const int n = system.variable_count();
  const std::uint64_t total = saturating_pow(group.order(), n);
  if (total > 1'000'000)
    throw SizeError("brute oracle requires |G|^n <= 10^6");

  SolveReport report;
  report.group_name = group.name();
  std::vector<int> vars(n, 0);
  for (std::uint64_t index = 0; index < total; ++index) {
    std::uint64_t rest = index;
    for (int i = n - 1; i >= 0; --i) {
      vars[i] = static_cast<int>(rest % group.order());
      rest /= group.order();
    }
    ++report.nodes;
    bool ok = true;
    for (const Word& w : system.words())
      if (evaluate(w, group, consts, vars) != 0) {
        ok = false;
        break;
      }
    if (ok) {
      report.status = SolveStatus::Solved;
      report.solution = vars;
      report.seconds = clock.seconds();
      return report;
    }
  }
  report.status = SolveStatus::NoSolution;
  report.seconds = clock.seconds();
  return report;
}

}  // namespace eqw
