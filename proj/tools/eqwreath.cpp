// eqwreath: exact computations with group equations over finite groups,
// wreath products, and quotient towers. See README.md for the file formats.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eqwreath/assembly.hpp"
#include "eqwreath/io.hpp"
#include "eqwreath/solver.hpp"
#include "eqwreath/tower.hpp"
#include "eqwreath/universal.hpp"

namespace {

std::string witness_text(const std::vector<int>& witness) {
  std::string out;
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ',';
    out += "a" + std::to_string(i + 1) + "=" + std::to_string(witness[i]);
  }
  return out;
}

std::vector<int> group_assignments(const std::string& text, int count,
                                   const eqw::FiniteGroup& group) {
  std::vector<long long> raw = eqw::parse_assignments(text, count);
  std::vector<int> out;
  for (long long v : raw) {
    if (v < 0 || v >= group.order())
      throw eqw::Error("assignment " + std::to_string(v) +
                       " is outside the group (order " +
                       std::to_string(group.order()) + ")");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

int run_solve(const std::string& group_path, const std::string& system_path,
              const std::string& assign, std::uint64_t budget, int threads) {
  eqw::FiniteGroup group = eqw::load_group(group_path);
  eqw::EquationSystem system = eqw::load_system(system_path);
  eqw::SolveOptions options;
  options.node_budget = budget;
  options.threads = threads;
  eqw::SolveReport report = eqw::solve(
      group, system, group_assignments(assign, system.constant_count(), group),
      options);
  if (report.status == eqw::SolveStatus::Solved) {
    std::cout << "status=solved\n";
    for (std::size_t i = 0; i < report.solution.size(); ++i)
      std::cout << "x" << i + 1 << "=" << report.solution[i] << "\n";
    return 0;
  }
  std::cout << "status=nosolution\n";
  return 1;
}

int run_solvable(const std::string& group_path, const std::string& system_path,
                 bool no_symmetry, std::uint64_t budget) {
  eqw::FiniteGroup group = eqw::load_group(group_path);
  eqw::EquationSystem system = eqw::load_system(system_path);
  eqw::SolveOptions options;
  options.node_budget = budget;
  options.symmetry_reduction = !no_symmetry;
  eqw::SolveReport report = eqw::solvable_in(group, system, options);
  if (report.status == eqw::SolveStatus::SolvableInGroup) {
    std::cout << "status=solvable\n";
    return 0;
  }
  std::cout << "status=notsolvable\n";
  std::cout << "witness=" << witness_text(report.witness) << "\n";
  return 1;
}

int run_scan(const std::string& system_path, int max_order, std::uint64_t budget) {
  eqw::EquationSystem system = eqw::load_system(system_path);
  eqw::SolveOptions options;
  options.node_budget = budget;
  eqw::SysFinVerdict verdict = eqw::scan_sys_fin(system, max_order, options);
  if (verdict.counterexample) {
    std::cout << "status=counterexample\n";
    std::cout << "group=" << verdict.counterexample->group.name() << "\n";
    std::cout << "witness=" << witness_text(verdict.counterexample->witness) << "\n";
    return 1;
  }
  std::cout << "status=nocounterexample\n";
  std::cout << "maxorder=" << verdict.max_order << "\n";
  return 0;
}

int run_locality(std::uint64_t trials, std::uint64_t seed, const std::string& tower_path,
                 int threads) {
  eqw::LocalityTrialOptions options;
  options.trials = trials;
  options.seed = seed;
  options.threads = threads;
  eqw::QuotientTower tower;
  eqw::SectionFamily sections;
  if (!tower_path.empty()) {
    auto loaded = eqw::load_tower(tower_path);
    tower = std::move(loaded.first);
    sections = std::move(loaded.second);
    options.tower = &tower;
    options.sections = &sections;
  }
  eqw::LocalityTrialStats stats = eqw::run_locality_trials(options);
  std::cout << "trials=" << trials << "\n";
  std::cout << "seed=" << seed << "\n";
  std::cout << "verified=" << stats.verified << "\n";
  std::cout << "premisefails=" << stats.premise_fails << "\n";
  std::cout << "violations=" << stats.violations << "\n";
  std::cout << "divergent=" << stats.divergent_premise_fails << "\n";
  if (stats.first_divergent_trial)
    std::cout << "first_divergent_trial=" << *stats.first_divergent_trial << "\n";
  return stats.violations == 0 ? 0 : 1;
}

int run_xn(const std::string& system_path, const std::string& tower_path,
           const std::string& h_path, const std::string& assign, int level,
           bool witnesses, int threads, std::uint64_t budget_cap) {
  eqw::EquationSystem system = eqw::load_system(system_path);
  auto loaded = eqw::load_tower(tower_path);
  std::vector<long long> constants =
      eqw::parse_assignments(assign, system.constant_count());
  eqw::UniversalProblem problem{eqw::load_group(h_path), std::move(loaded.first),
                                std::move(system), std::move(constants)};

  eqw::UniversalOptions options;
  options.keep_witnesses = witnesses;
  options.threads = threads;
  options.level_budget_cap = budget_cap;

  const auto budgets = eqw::level_budgets(problem);
  std::cout << "budget=";
  for (std::size_t i = 0; i < budgets.size(); ++i)
    std::cout << (i ? "," : "") << budgets[i];
  std::cout << " cap=" << options.level_budget_cap << "\n";

  const int lo = level > 0 ? level : 1;
  const int hi = level > 0 ? level : problem.tower.depth();
  for (int j = lo; j <= hi; ++j) {
    eqw::XnSet xn = eqw::compute_xn(problem, j, options);
    std::cout << "level=" << j << " size=" << xn.members.size() << "\n";
    for (const std::vector<int>& member : xn.members) {
      for (std::size_t i = 0; i < member.size(); ++i)
        std::cout << (i ? "," : "") << member[i];
      std::cout << "\n";
      if (witnesses) {
        auto it = xn.witnesses.find(member);
        if (it != xn.witnesses.end())
          for (const eqw::XnWitness& w : it->second) {
            std::cout << "  witness level=" << w.level << " f=" << w.f_index
                      << " phi=";
            for (std::size_t i = 0; i < w.phi.size(); ++i)
              std::cout << (i ? "," : "") << w.phi[i];
            std::cout << "\n";
          }
      }
    }
  }
  return 0;
}

int run_pipeline_cmd(const std::string& system_path, const std::string& tower_path,
                     const std::string& h_path, const std::string& assign,
                     const std::string& support, int probe, int scan_max,
                     int threads) {
  eqw::EquationSystem system = eqw::load_system(system_path);
  auto loaded = eqw::load_tower(tower_path);
  eqw::SectionFamily sections = std::move(loaded.second);
  std::vector<long long> constants =
      eqw::parse_assignments(assign, system.constant_count());
  eqw::UniversalProblem problem{eqw::load_group(h_path), std::move(loaded.first),
                                std::move(system), std::move(constants)};

  eqw::AssemblyOptions options;
  options.probe_level = probe;
  options.scan_max_order = scan_max;
  options.universal.threads = threads;

  eqw::PipelineResult result = eqw::run_pipeline(
      problem, sections, eqw::parse_support(support), options);
  std::cout << result.report;
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact group-equation computations over finite groups, wreath "
               "products, and quotient towers"};
  app.require_subcommand(1);

  std::string group_path, system_path, tower_path, h_path;
  std::string assign, support;
  std::uint64_t budget = 100'000'000;
  std::uint64_t trials = 10000, seed = 1;
  int max_order = 8, level = 0, threads = 1, probe = 0, scan_max = 8;
  bool no_symmetry = false, witnesses = false;

  CLI::App* solve = app.add_subcommand("solve", "solve one instance in a group");
  solve->add_option("--group", group_path, "group file")->required();
  solve->add_option("--system", system_path, "equation system file")->required();
  solve->add_option("--assign", assign, "constant assignment a1=..,a2=..");
  solve->add_option("--budget", budget, "search node budget");
  solve->add_option("--threads", threads, "worker threads");

  CLI::App* solvable =
      app.add_subcommand("solvable", "check solvability for every assignment");
  solvable->add_option("--group", group_path, "group file")->required();
  solvable->add_option("--system", system_path, "equation system file")->required();
  solvable->add_flag("--no-symmetry", no_symmetry,
                     "disable conjugation symmetry reduction");
  solvable->add_option("--budget", budget, "search node budget");

  CLI::App* scan =
      app.add_subcommand("scan", "scan the catalog for a refuting group");
  scan->add_option("--system", system_path, "equation system file")->required();
  scan->add_option("--max-order", max_order, "largest group order to try");
  scan->add_option("--budget", budget, "search node budget");

  CLI::App* locality =
      app.add_subcommand("locality", "randomized pullback locality trials");
  locality->add_option("--trials", trials, "number of trials");
  locality->add_option("--seed", seed, "root seed");
  locality->add_option("--tower", tower_path, "draw instances from a tower file");
  locality->add_option("--threads", threads, "worker threads");

  CLI::App* xn = app.add_subcommand("xn", "universal candidate sets per level");
  xn->add_option("--system", system_path, "equation system file")->required();
  xn->add_option("--tower", tower_path, "tower file")->required();
  xn->add_option("--H", h_path, "value group file")->required();
  xn->add_option("--assign", assign, "ambient constant assignment");
  xn->add_option("--level", level, "restrict to one level");
  xn->add_flag("--witnesses", witnesses, "print solving tables per member");
  xn->add_option("--threads", threads, "worker threads");
  xn->add_option("--budget", budget, "per-level budget cap");

  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "scan, candidate sets, assembly, and window verification");
  pipeline->add_option("--system", system_path, "equation system file")->required();
  pipeline->add_option("--tower", tower_path, "tower file")->required();
  pipeline->add_option("--H", h_path, "value group file")->required();
  pipeline->add_option("--assign", assign, "ambient constant assignment");
  pipeline->add_option("--support", support, "support list f1@0=1,...");
  pipeline->add_option("--probe", probe, "probe section level (default second finest)");
  pipeline->add_option("--scan-max", scan_max, "catalog scan bound");
  pipeline->add_option("--threads", threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed())
      return run_solve(group_path, system_path, assign, budget, threads);
    if (solvable->parsed())
      return run_solvable(group_path, system_path, no_symmetry, budget);
    if (scan->parsed()) return run_scan(system_path, max_order, budget);
    if (locality->parsed())
      return run_locality(trials, seed, tower_path, threads);
    if (xn->parsed())
      return run_xn(system_path, tower_path, h_path, assign, level, witnesses,
                    threads, budget);
    if (pipeline->parsed())
      return run_pipeline_cmd(system_path, tower_path, h_path, assign, support,
                              probe, scan_max, threads);
  } catch (const eqw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
