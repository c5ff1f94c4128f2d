// Acceptance suite: one checked criterion per line, exit 0 only if all pass.
// argv[1] must point at the eqwreath CLI binary (wired up by ctest).

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eqwreath/assembly.hpp"
#include "eqwreath/io.hpp"
#include "eqwreath/randgen.hpp"
#include "eqwreath/solver.hpp"
#include "eqwreath/tower.hpp"
#include "eqwreath/universal.hpp"

namespace {

namespace fs = std::filesystem;

std::string g_cli;
fs::path g_dir;
int g_failures = 0;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  RunResult result;
  std::string command = g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0)
    result.output.append(buffer, got);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void write_file(const std::string& name, const std::string& content) {
  std::ofstream out(g_dir / name, std::ios::binary);
  out << content;
}

std::string path_of(const std::string& name) { return (g_dir / name).string(); }

void criterion(int number, const std::string& label,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  auto start = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %d: %s (%.2fs) %s%s%s\n", number, ok ? "PASS" : "FAIL",
              seconds, label.c_str(), detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

// ---------------------------------------------------------------------------

bool prefix_set_example(std::string& detail) {
  using namespace eqw;
  Word p = parse_word("x1^2 a1 x1^-1");
  std::vector<Word> got = prefix_set(p);
  std::vector<Word> want{Word{},
                         parse_word("x1"),
                         parse_word("x1^2"),
                         parse_word("x1^2 a1"),
                         parse_word("x1^2 a1 x1^-1")};
  if (got != want) {
    detail = "prefix set differs from the worked example";
    return false;
  }
  return true;
}

bool solver_oracle_equivalence(std::string& detail) {
  using namespace eqw;
  Rng rng(0xACCE9752);
  std::vector<FiniteGroup> groups = catalog(8);
  long long compared = 0;
  for (int si = 0; si < 200; ++si) {
    EquationSystem system = random_system(rng, 2, 2, 6, 2);
    for (const FiniteGroup& g : groups) {
      const std::uint64_t assignments =
          saturating_pow(g.order(), system.constant_count());
      for (std::uint64_t ai = 0; ai < assignments; ++ai) {
        std::vector<int> consts(system.constant_count());
        std::uint64_t rest = ai;
        for (int i = system.constant_count() - 1; i >= 0; --i) {
          consts[i] = static_cast<int>(rest % g.order());
          rest /= g.order();
        }
        SolveReport fast = solve(g, system, consts);
        SolveReport slow = brute_oracle(g, system, consts);
        ++compared;
        if (fast.status != slow.status || fast.solution != slow.solution) {
          detail = "disagreement on " + g.name() + " system #" + std::to_string(si);
          return false;
        }
      }
    }
  }
  detail = std::to_string(compared) + " instances compared";
  return true;
}

bool locality_suite(std::string& detail) {
  using namespace eqw;
  LocalityTrialOptions options;
  options.trials = 10000;
  options.seed = 0x10CA117;
  LocalityTrialStats stats = run_locality_trials(options);
  if (stats.violations != 0) {
    detail = std::to_string(stats.violations) + " violations";
    return false;
  }
  if (stats.divergent_premise_fails == 0) {
    detail = "no premise-failing instance with diverging values was seen";
    return false;
  }
  // exhibit one divergent premise-failing instance on Z4 -> Z2
  QuotientTower t = QuotientTower::integers({2, 4});
  SectionFamily crooked = make_sections(t, {{1, {0, 1}}});
  SectionedHom sh = level_sectioned_hom(t, crooked, 2, 1);
  FiniteGroup h = cyclic_group(2);
  Rng rng(7);
  for (int trial = 0; trial < 20000; ++trial) {
    Word p = random_word(rng, 1, 1, 1 + rng.below_int(4));
    std::vector<WreathElement> tuple;
    for (int i = 0; i < 2; ++i) {
      std::vector<int> values(4);
      for (int& v : values) v = rng.below_int(2);
      tuple.push_back(WreathElement{
          make_function_table(t.level(2), h, std::move(values)), rng.below_int(4)});
    }
    int x = rng.below_int(4);
    LocalityReport r = check_locality(p, tuple, 1, sh, x);
    if (r.outcome == LocalityOutcome::Violation) {
      detail = "violation during the exhibition search";
      return false;
    }
    if (r.outcome == LocalityOutcome::PremiseFails && r.lhs != r.rhs) {
      detail = "verified=" + std::to_string(stats.verified) +
               " premisefails=" + std::to_string(stats.premise_fails) +
               "; exhibit: p=" + p.str() + " x=" + std::to_string(x) + " lhs=" +
               std::to_string(r.lhs) + " rhs=" + std::to_string(r.rhs);
      return true;
    }
  }
  detail = "no exhibit found on Z4 -> Z2";
  return false;
}

bool wreath_constructions(std::string& detail) {
  using namespace eqw;
  std::vector<FiniteGroup> groups = catalog(16);
  int built = 0;
  for (const FiniteGroup& h : groups)
    for (const FiniteGroup& g : groups) {
      const std::uint64_t fcount = saturating_pow(h.order(), g.order());
      if (fcount > 10000) continue;
      const std::uint64_t order = fcount * static_cast<std::uint64_t>(g.order());
      if (order > 10000) continue;
      WreathGroup w = wreath_product(h, g);  // fully validated inside
      if (w.group.order() != static_cast<int>(order)) {
        detail = "order formula fails for " + h.name() + " wr " + g.name();
        return false;
      }
      ++built;
    }
  FiniteGroup z2 = cyclic_group(2);
  WreathGroup direct = wreath_product(z2, z2);
  SemidirectGroup via_action = semidirect_product(
      direct_power(z2, 2).group, z2, action_by_right_translation(z2, z2));
  if (direct.group.table() != via_action.group.table()) {
    detail = "wreath and semidirect-of-power tables differ at H = G = Z2";
    return false;
  }
  detail = std::to_string(built) + " products built and validated";
  return true;
}

bool xn_correctness(std::string& detail) {
  using namespace eqw;
  UniversalProblem forced{cyclic_group(2), QuotientTower::integers({2, 4}),
                          parse_system("x1 a1^-1\n"), {2}};
  if (compute_xn(forced, 1).members != std::vector<std::vector<int>>{{0}} ||
      compute_xn(forced, 2).members != std::vector<std::vector<int>>{{2}}) {
    detail = "forced-solution sets differ from {a mod m}";
    return false;
  }
  Rng rng(0x5EED5);
  for (int trial = 0; trial < 100; ++trial) {
    EquationSystem system = random_system(rng, 2, 2, 5, 1);
    UniversalProblem prob{cyclic_group(2), QuotientTower::integers({2, 4}), system,
                          {static_cast<long long>(rng.below_int(8)) - 4,
                           static_cast<long long>(rng.below_int(8)) - 4}};
    if (check_compatibility(prob, 2, 1)) {
      detail = "compatibility violated on seeded system #" + std::to_string(trial);
      return false;
    }
  }
  return true;
}

bool micro_projection(std::string& detail) {
  using namespace eqw;
  // every reduced word of length <= 4 that uses both a1 and x1
  std::vector<std::string> pieces{"a1", "a1^-1", "x1", "x1^-1"};
  std::set<std::string> seen;
  std::vector<Word> words;
  std::function<void(const Word&, int)> extend = [&](const Word& w, int left) {
    if (!w.empty() && w.max_constant_index() == 1 && w.max_variable_index() == 1 &&
        seen.insert(w.str()).second)
      words.push_back(w);
    if (left == 0) return;
    for (const std::string& piece : pieces)
      extend(w * parse_word(piece), left - 1);
  };
  extend(Word{}, 4);
  int checked = 0;
  for (const Word& w : words) {
    UniversalProblem prob{cyclic_group(2), QuotientTower::integers({2}),
                          EquationSystem({w}), {1}};
    MicroCheckResult r = micro_projection_check(prob);
    if (!r.ok) {
      detail = "projection mismatch for \"" + w.str() + "\"";
      return false;
    }
    ++checked;
  }
  if (checked < 20) {
    detail = "only " + std::to_string(checked) + " systems checked";
    return false;
  }
  detail = std::to_string(checked) + " systems, exact set equality";
  return true;
}

bool negative_control(std::string& detail) {
  using namespace eqw;
  SysFinVerdict verdict = scan_sys_fin(parse_system("x1^2 a1\n"), 8);
  if (!verdict.counterexample || verdict.counterexample->group.name() != "Z2") {
    detail = "scan did not refute in Z2";
    return false;
  }
  RunResult run = run_cli("pipeline --system " + path_of("square.eq") + " --tower " +
                          path_of("t24.twr") + " --H " + path_of("z2.grp") +
                          " --assign a1=1");
  if (run.exit_code != 1) {
    detail = "pipeline exit code " + std::to_string(run.exit_code) + ", expected 1";
    return false;
  }
  for (const char* line : {"scan=counterexample group=Z2 witness=a1=1", "xn[1]=0",
                           "verdict=FAIL"})
    if (run.output.find(line) == std::string::npos) {
      detail = std::string("missing report line: ") + line;
      return false;
    }
  return true;
}

bool end_to_end_window(std::string& detail) {
  const std::string args = "pipeline --system " + path_of("comm.eq") + " --tower " +
                           path_of("t248.twr") + " --H " + path_of("z2.grp") +
                           " --assign a1=2 --support f1@0=1,f1@-1=0";
  RunResult first = run_cli(args);
  if (first.exit_code != 0) {
    detail = "exit code " + std::to_string(first.exit_code);
    return false;
  }
  int in_window = 0;
  std::istringstream lines(first.output);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("window[", 0) != 0) continue;
    if (line.find("out-of-window") != std::string::npos) continue;
    if (line.find("delta=identity") == std::string::npos) {
      detail = "non-identity window line: " + line;
      return false;
    }
    ++in_window;
  }
  if (in_window != 4) {
    detail = "expected 4 in-window probe points, saw " + std::to_string(in_window);
    return false;
  }
  if (first.output.find("crosscheck=ok") == std::string::npos) {
    detail = "H wr Z8 cross-validation did not run";
    return false;
  }
  RunResult again = run_cli(args);
  if (again.output != first.output) {
    detail = "report differs between two identical runs";
    return false;
  }
  for (int threads : {2, 4}) {
    RunResult threaded = run_cli(args + " --threads " + std::to_string(threads));
    if (threaded.output != first.output) {
      detail = "report differs at --threads " + std::to_string(threads);
      return false;
    }
  }
  return true;
}

bool cli_determinism(std::string& detail) {
  struct Case {
    std::string label;
    std::vector<std::string> variants;  // must all print identical bytes
  };
  std::vector<Case> cases{
      {"locality",
       {"locality --trials 4000 --seed 99",
        "locality --trials 4000 --seed 99 --threads 2",
        "locality --trials 4000 --seed 99 --threads 4"}},
      {"xn",
       {"xn --system " + path_of("comm.eq") + " --tower " + path_of("t248.twr") +
            " --H " + path_of("z2.grp") + " --assign a1=2",
        "xn --system " + path_of("comm.eq") + " --tower " + path_of("t248.twr") +
            " --H " + path_of("z2.grp") + " --assign a1=2 --threads 4"}},
      {"solve",
       {"solve --group " + path_of("z2.grp") + " --system " + path_of("square.eq") +
            " --assign a1=0",
        "solve --group " + path_of("z2.grp") + " --system " + path_of("square.eq") +
            " --assign a1=0 --threads 3"}},
      {"scan",
       {"scan --system " + path_of("square.eq") + " --max-order 8",
        "scan --system " + path_of("square.eq") + " --max-order 8"}},
      {"solvable",
       {"solvable --group " + path_of("z2.grp") + " --system " + path_of("square.eq"),
        "solvable --group " + path_of("z2.grp") + " --system " + path_of("square.eq") +
            " --no-symmetry"}},
  };
  for (const Case& c : cases) {
    RunResult base = run_cli(c.variants[0]);
    RunResult repeat = run_cli(c.variants[0]);
    if (base.output != repeat.output || base.exit_code != repeat.exit_code) {
      detail = c.label + " differs across identical runs";
      return false;
    }
    for (std::size_t i = 1; i < c.variants.size(); ++i) {
      RunResult other = run_cli(c.variants[i]);
      if (other.output != base.output) {
        detail = c.label + " differs across parallelism levels";
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: eqwreath_acceptance <path-to-eqwreath-cli>\n";
    return 2;
  }
  g_cli = argv[1];
  g_dir = fs::temp_directory_path() /
          ("eqwreath_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_dir);

  write_file("comm.eq", "x1 a1 x1^-1 a1^-1\n");
  write_file("square.eq", "x1^2 a1\n");
  write_file("forced.eq", "x1 a1^-1\n");
  write_file("t24.twr", "ztower 2 4\n");
  write_file("t248.twr", "ztower 2 4 8\n");
  write_file("z2.grp", "cayley 2\n0 1\n1 0\n");

  criterion(1, "prefix set reproduces the worked example", prefix_set_example);
  criterion(2, "solver agrees with the brute oracle on the full small grid",
            solver_oracle_equivalence);
  criterion(3, "locality holds on 10^4 seeded trials; premise shown nonvacuous",
            locality_suite);
  criterion(4, "wreath order formula and axioms; equals semidirect of the power",
            wreath_constructions);
  criterion(5, "xn sets exact for the forced system; projections compatible",
            xn_correctness);
  criterion(6, "xn equals the materialized product projection at micro scale",
            micro_projection);
  criterion(7, "square system refuted in Z2 and empty in the pipeline",
            negative_control);
  criterion(8, "end-to-end window verification with materialized cross-check",
            end_to_end_window);
  criterion(9, "CLI output byte-identical across runs and thread counts",
            cli_determinism);

  std::error_code ec;
  fs::remove_all(g_dir, ec);

  if (g_failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
