#include "eqwreath/assembly.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace eqw {

namespace {

std::map<std::pair<int, long long>, int> support_map(
    const EquationSystem& system, const FiniteGroup& values,
    const std::vector<SupportPoint>& support) {
  std::map<std::pair<int, long long>, int> out;
  for (const SupportPoint& s : support) {
    if (s.coordinate < 1 || s.coordinate > system.constant_count())
      throw Error("support coordinate f" + std::to_string(s.coordinate) +
                  " has no matching constant");
    if (s.value < 0 || s.value >= values.order())
      throw Error("support value " + std::to_string(s.value) +
                  " is outside the value group");
    if (!out.emplace(std::make_pair(s.coordinate, s.point), s.value).second)
      throw Error("duplicate support point f" + std::to_string(s.coordinate) + "@" +
                  std::to_string(s.point));
  }
  return out;
}

void check_support_in_deepest_section(const QuotientTower& tower,
                                      const SectionFamily& sections,
                                      const std::vector<SupportPoint>& support) {
  for (const SupportPoint& s : support)
    if (!sections.contains(tower.depth(), s.point))
      throw Error("support point " + std::to_string(s.point) +
                  " lies outside the deepest section");
}

std::vector<int> project_constants(const UniversalProblem& problem, int level) {
  std::vector<int> out;
  for (long long a : problem.constants)
    out.push_back(problem.tower.project_ambient(level, a));
  return out;
}

// Ambient values of all word prefixes at the assignments, deduplicated.
std::vector<long long> prefix_value_set(const UniversalProblem& problem,
                                        const std::vector<long long>& consts,
                                        const std::vector<long long>& vars) {
  std::set<long long> values;
  for (const Word& w : problem.system.words())
    for (const Word& q : prefix_set(w))
      values.insert(problem.tower.ambient_evaluate(q, consts, vars));
  return {values.begin(), values.end()};
}

}  // namespace

std::vector<std::vector<std::uint16_t>> pull_back_support(
    const UniversalProblem& problem, const SectionFamily& sections,
    const std::vector<SupportPoint>& support, int level) {
  const auto map = support_map(problem.system, problem.values, support);
  const int k = problem.system.constant_count();
  const FiniteGroup& lm = problem.tower.level(level);
  std::vector<std::vector<std::uint16_t>> tables(
      k, std::vector<std::uint16_t>(lm.order(), 0));
  for (long long t : sections.section(level)) {
    int e = problem.tower.project_ambient(level, t);
    for (int j = 1; j <= k; ++j) {
      auto it = map.find({j, t});
      if (it != map.end())
        tables[j - 1][e] = static_cast<std::uint16_t>(it->second);
    }
  }
  return tables;
}

std::optional<std::vector<std::vector<std::uint16_t>>> solve_level(
    const UniversalProblem& problem, int level,
    const std::vector<std::vector<std::uint16_t>>& const_tables,
    const std::vector<int>& u, const AssemblyOptions& options) {
  std::vector<int> u_level;
  u_level.reserve(u.size());
  for (int e : u)
    u_level.push_back(problem.tower.project(problem.tower.depth(), level, e));
  auto phi = find_level_solution(problem, level, const_tables, u_level,
                                 options.universal.node_budget);
  if (!phi) return std::nullopt;
  const FiniteGroup& lm = problem.tower.level(level);
  std::vector<std::vector<std::uint16_t>> tables;
  for (std::uint64_t index : *phi) {
    std::vector<std::uint16_t> table(lm.order());
    for (int x = 0; x < lm.order(); ++x) {
      table[x] = static_cast<std::uint16_t>(index % problem.values.order());
      index /= problem.values.order();
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

AssembledSolution assemble(const UniversalProblem& problem,
                           const SectionFamily& sections,
                           const std::vector<SupportPoint>& support,
                           const std::vector<int>& u,
                           const AssemblyOptions& options) {
  check_support_in_deepest_section(problem.tower, sections, support);
  const int d = problem.tower.depth();
  auto psi = solve_level(problem, d, pull_back_support(problem, sections, support, d),
                         u, options);
  if (!psi)
    throw Error("assemble: no solving tables at the deepest level; the tuple is "
                "not a member of the deepest xn set");
  AssembledSolution out;
  out.psi = std::move(*psi);
  out.u = u;
  out.source_level = d;
  return out;
}

bool WindowEntry::identity() const {
  if (outcome != WindowOutcome::InWindow) return false;
  return std::all_of(delta.begin(), delta.end(), [](int v) { return v == 0; });
}

WindowReport verify_window(const UniversalProblem& problem,
                           const SectionFamily& sections,
                           const std::vector<SupportPoint>& support,
                           const AssembledSolution& assembled,
                           const AssemblyOptions& options) {
  check_support_in_deepest_section(problem.tower, sections, support);
  const int d = problem.tower.depth();
  if (assembled.source_level != d)
    throw Error("verify_window expects tables solved at the deepest level");
  const FiniteGroup& ld = problem.tower.level(d);
  const FiniteGroup& h = problem.values;
  const int n = problem.system.variable_count();

  WindowReport report;
  report.probe_level = options.probe_level > 0
                           ? options.probe_level
                           : (d >= 2 ? d - 1 : 1);
  if (report.probe_level < 1 || report.probe_level > d)
    throw Error("probe level out of range");

  // ambient assignments: constants as given, variables lifted through the
  // deepest section
  std::vector<long long> u_ambient;
  for (int e : assembled.u) u_ambient.push_back(sections.lift(d, e));
  const std::vector<long long> s_values =
      prefix_value_set(problem, problem.constants, u_ambient);

  const std::vector<bool> glevels =
      finite_level_check(problem.system, problem.tower, problem.constants, u_ambient);
  report.group_levels_ok =
      std::all_of(glevels.begin(), glevels.end(), [](bool b) { return b; });

  // one evaluation per word at the deepest level; window entries read its
  // H-component at their projected point
  const auto f_tables = pull_back_support(problem, sections, support, d);
  std::vector<int> a_d = project_constants(problem, d);
  std::vector<int> u_d = assembled.u;
  std::vector<WreathRef> const_refs, var_refs;
  for (int j = 0; j < problem.system.constant_count(); ++j)
    const_refs.push_back(WreathRef{f_tables[j].data(), a_d[j]});
  for (int j = 0; j < n; ++j)
    var_refs.push_back(WreathRef{assembled.psi[j].data(), u_d[j]});

  std::vector<WreathValue> word_values(problem.system.equation_count());
  for (int wi = 0; wi < problem.system.equation_count(); ++wi)
    evaluate_wreath_into(word_values[wi], problem.system.words()[wi], ld, h,
                         const_refs, var_refs);

  report.all_identity = true;
  for (long long x : sections.section(report.probe_level)) {
    WindowEntry entry;
    entry.x = x;
    bool in_window = true;
    for (long long s : s_values)
      if (!sections.contains(d, problem.tower.ambient_mul(x, s))) {
        in_window = false;
        break;
      }
    if (in_window) {
      entry.outcome = WindowOutcome::InWindow;
      const int x_d = problem.tower.project_ambient(d, x);
      for (const WreathValue& value : word_values)
        entry.delta.push_back(value.f[x_d]);
      if (!entry.identity()) report.all_identity = false;
    }
    report.entries.push_back(std::move(entry));
  }

  // cross-check against direct multiplication in the materialized wreath
  // product when it fits under the cap
  const std::uint64_t fn_count = saturating_pow(h.order(), ld.order());
  if (fn_count <= options.crosscheck_order_cap &&
      fn_count * ld.order() <= options.crosscheck_order_cap) {
    WreathGroup wg = wreath_product(h, ld,
                                    static_cast<long long>(options.crosscheck_order_cap));
    std::vector<int> consts, vars;
    for (int j = 0; j < problem.system.constant_count(); ++j) {
      std::vector<int> f(f_tables[j].begin(), f_tables[j].end());
      consts.push_back(wg.encode(f, a_d[j]));
    }
    for (int j = 0; j < n; ++j) {
      std::vector<int> f(assembled.psi[j].begin(), assembled.psi[j].end());
      vars.push_back(wg.encode(f, u_d[j]));
    }
    for (int wi = 0; wi < problem.system.equation_count(); ++wi) {
      int acc = 0;
      for (const Letter& l : problem.system.words()[wi].letters()) {
        int e = l.kind == SymbolKind::Constant ? consts[l.index - 1]
                                               : vars[l.index - 1];
        if (l.sign < 0) e = wg.group.inv(e);
        acc = wg.group.mul(acc, e);
      }
      auto [f, g] = wg.decode(acc);
      if (g != word_values[wi].g)
        throw Error("crosscheck mismatch: group components differ");
      for (int x = 0; x < ld.order(); ++x)
        if (f[x] != word_values[wi].f[x])
          throw Error("crosscheck mismatch: H-component differs at point " +
                      std::to_string(x));
    }
    report.crosscheck = CrosscheckStatus::Ok;
  } else {
    report.crosscheck = CrosscheckStatus::Skipped;
  }
  return report;
}

namespace {

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string witness_text(const std::vector<int>& witness) {
  std::string out;
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ',';
    out += "a" + std::to_string(i + 1) + "=" + std::to_string(witness[i]);
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const UniversalProblem& problem,
                            const SectionFamily& sections,
                            const std::vector<SupportPoint>& support,
                            const AssemblyOptions& options) {
  check_support_in_deepest_section(problem.tower, sections, support);
  support_map(problem.system, problem.values, support);  // validates entries

  PipelineResult result;
  std::ostringstream report;

  AssemblyOptions opts = options;
  result.scan = scan_sys_fin(problem.system, opts.scan_max_order);
  if (result.scan.counterexample) {
    report << "scan=counterexample group=" << result.scan.counterexample->group.name()
           << " witness=" << witness_text(result.scan.counterexample->witness)
           << "\n";
  } else {
    report << "scan=nocounterexample maxorder=" << result.scan.max_order << "\n";
  }

  result.budgets = level_budgets(problem);
  report << "budget=";
  for (std::size_t i = 0; i < result.budgets.size(); ++i)
    report << (i ? "," : "") << result.budgets[i];
  report << " cap=" << opts.universal.level_budget_cap << "\n";

  std::vector<XnSet> sets;
  for (int j = 1; j <= problem.tower.depth(); ++j) {
    XnSet xn = compute_xn(problem, j, opts.universal);
    result.xn_sizes.push_back(xn.members.size());
    report << "xn[" << j << "]=" << xn.members.size() << "\n";
    if (xn.members.empty()) {
      result.empty_level = j;
      DeepestMember deepest = deepest_nonempty_member(problem, opts.universal);
      report << "hint=" << deepest.hint << "\n";
      report << "verdict=FAIL\n";
      result.pass = false;
      result.exit_code = 1;
      result.report = report.str();
      return result;
    }
    sets.push_back(std::move(xn));
  }

  for (int j = problem.tower.depth(); j >= 2; --j) {
    for (const std::vector<int>& u : sets[j - 1].members) {
      std::vector<int> image;
      for (int e : u) image.push_back(problem.tower.project(j, j - 1, e));
      if (!std::binary_search(sets[j - 2].members.begin(), sets[j - 2].members.end(),
                              image)) {
        result.compat_ok = false;
        report << "compat=violation level=" << j << " u=" << join_ints(u) << "\n";
        report << "verdict=FAIL\n";
        result.pass = false;
        result.exit_code = 1;
        result.report = report.str();
        return result;
      }
    }
  }
  report << "compat=ok\n";

  result.u = sets.back().members.front();
  report << "u=" << join_ints(result.u) << "\n";

  AssembledSolution assembled = assemble(problem, sections, support, result.u, opts);
  WindowReport window = verify_window(problem, sections, support, assembled, opts);

  report << "glevels=" << (window.group_levels_ok ? "ok" : "fail") << "\n";
  for (const WindowEntry& entry : window.entries) {
    report << "window[" << window.probe_level << "] x=" << entry.x;
    if (entry.outcome == WindowOutcome::OutOfWindow) {
      report << " out-of-window\n";
    } else if (entry.identity()) {
      report << " delta=identity\n";
    } else {
      report << " delta=" << join_ints(entry.delta) << "\n";
    }
  }
  report << "crosscheck="
         << (window.crosscheck == CrosscheckStatus::Ok ? "ok" : "skipped") << "\n";

  result.window = window;
  result.pass = window.group_levels_ok && window.all_identity;
  report << "verdict=" << (result.pass ? "PASS" : "FAIL") << "\n";
  result.exit_code = result.pass ? 0 : 1;
  result.report = report.str();
  return result;
}

}  // namespace eqw
