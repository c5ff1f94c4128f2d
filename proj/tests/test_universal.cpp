#include "doctest.h"

#include <algorithm>
#include <set>

#include "eqwreath/randgen.hpp"
#include "eqwreath/universal.hpp"

using namespace eqw;

namespace {

UniversalProblem make_problem(const std::string& system_text,
                              std::vector<long long> moduli, int h_order,
                              std::vector<long long> constants) {
  return UniversalProblem{cyclic_group(h_order),
                          QuotientTower::integers(std::move(moduli)),
                          parse_system(system_text), std::move(constants)};
}

// Independent recomputation of the member condition: plain quantifier nest
// with no pruning, no group-part shortcut, no shared search code. Tables are
// enumerated directly and words evaluated through pointwise wreath algebra.
bool naive_member(const UniversalProblem& prob, int level, const std::vector<int>& u) {
  const FiniteGroup& h = prob.values;
  const int k = prob.system.constant_count();
  const int n = prob.system.variable_count();
  for (int m = 1; m <= level; ++m) {
    const FiniteGroup& lm = prob.tower.level(m);
    const int lo = lm.order();
    std::vector<int> a_m, u_m;
    for (long long a : prob.constants) a_m.push_back(prob.tower.project_ambient(m, a));
    for (int e : u) u_m.push_back(prob.tower.project(level, m, e));

    const std::uint64_t fn = saturating_pow(h.order(), lo);
    const std::uint64_t f_total = saturating_pow(fn, k);
    const std::uint64_t phi_total = saturating_pow(fn, n);

    auto decode = [&](std::uint64_t idx, int count) {
      std::vector<std::vector<int>> tables(count, std::vector<int>(lo));
      for (int j = 0; j < count; ++j) {
        std::uint64_t digit = idx % fn;
        idx /= fn;
        for (int x = 0; x < lo; ++x) {
          tables[j][x] = static_cast<int>(digit % h.order());
          digit /= h.order();
        }
      }
      return tables;
    };

    for (std::uint64_t fi = 0; fi < f_total; ++fi) {
      auto f_tables = decode(fi, k);
      bool exists = false;
      for (std::uint64_t pi = 0; pi < phi_total && !exists; ++pi) {
        auto phi_tables = decode(pi, n);
        bool all_identity = true;
        for (const Word& w : prob.system.words()) {
          // multiply (table, element) pairs left to right
          std::vector<int> acc_f(lo, 0);
          int acc_g = 0;
          for (const Letter& l : w.letters()) {
            const auto& table =
                l.kind == SymbolKind::Constant ? f_tables[l.index - 1]
                                               : phi_tables[l.index - 1];
            int g = l.kind == SymbolKind::Constant ? a_m[l.index - 1]
                                                   : u_m[l.index - 1];
            if (l.sign > 0) {
              for (int t = 0; t < lo; ++t)
                acc_f[t] = h.mul(acc_f[t], table[lm.mul(t, acc_g)]);
              acc_g = lm.mul(acc_g, g);
            } else {
              int ginv = lm.inv(g);
              for (int t = 0; t < lo; ++t)
                acc_f[t] =
                    h.mul(acc_f[t], h.inv(table[lm.mul(lm.mul(t, acc_g), ginv)]));
              acc_g = lm.mul(acc_g, ginv);
            }
          }
          if (acc_g != 0 ||
              !std::all_of(acc_f.begin(), acc_f.end(), [](int v) { return v == 0; })) {
            all_identity = false;
            break;
          }
        }
        if (all_identity) exists = true;
      }
      if (!exists) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("compute_xn: forced-solution system pins the constant") {
  UniversalProblem prob = make_problem("x1 a1^-1\n", {2, 4}, 2, {2});
  XnSet x1 = compute_xn(prob, 1);
  CHECK(x1.members == std::vector<std::vector<int>>{{0}});  // 2 mod 2
  XnSet x2 = compute_xn(prob, 2);
  CHECK(x2.members == std::vector<std::vector<int>>{{2}});  // 2 mod 4
}

TEST_CASE("compute_xn: trivial value group reduces to the group equation") {
  // commutator with |H| = 1 over abelian levels: every tuple passes
  UniversalProblem prob = make_problem("x1 a1 x1^-1 a1^-1\n", {2, 4}, 1, {3});
  XnSet x2 = compute_xn(prob, 2);
  CHECK(x2.members.size() == 4);
}

TEST_CASE("compute_xn: unsolvable square system is empty, odd constant") {
  UniversalProblem prob = make_problem("x1^2 a1\n", {2}, 2, {1});
  CHECK(compute_xn(prob, 1).members.empty());
}

TEST_CASE("compute_xn: joins the commutator cyclic-subgroup structure") {
  // u is a member iff each projection lies in the subgroup generated by the
  // projected constant (worked out by hand over Z/2, Z/4, Z/8 with H = Z2)
  UniversalProblem prob = make_problem("x1 a1 x1^-1 a1^-1\n", {2, 4, 8}, 2, {2});
  CHECK(compute_xn(prob, 1).members == std::vector<std::vector<int>>{{0}});
  CHECK(compute_xn(prob, 2).members == std::vector<std::vector<int>>{{0}, {2}});
  CHECK(compute_xn(prob, 3).members ==
        std::vector<std::vector<int>>{{0}, {2}, {4}, {6}});
}

TEST_CASE("compute_xn: agrees with the naive quantifier nest") {
  Rng rng(1203);
  for (int trial = 0; trial < 25; ++trial) {
    EquationSystem system = random_system(rng, 1, 1, 4, 1);
    UniversalProblem prob{cyclic_group(2), QuotientTower::integers({2, 4}), system,
                          {static_cast<long long>(rng.below_int(8)) - 4}};
    for (int level = 1; level <= 2; ++level) {
      XnSet xn = compute_xn(prob, level);
      const FiniteGroup& ln = prob.tower.level(level);
      std::vector<std::vector<int>> expected;
      if (system.variable_count() == 0) {
        if (naive_member(prob, level, {})) expected.push_back({});
      } else {
        for (int u = 0; u < ln.order(); ++u)
          if (naive_member(prob, level, {u})) expected.push_back({u});
      }
      CHECK(xn.members == expected);
    }
  }
}

TEST_CASE("compute_xn: members re-verify and witnesses solve") {
  UniversalProblem prob = make_problem("x1 a1 x1^-1 a1^-1\n", {2, 4}, 2, {2});
  UniversalOptions options;
  options.keep_witnesses = true;
  XnSet x2 = compute_xn(prob, 2, options);
  REQUIRE_FALSE(x2.members.empty());
  for (const auto& member : x2.members) {
    CHECK(naive_member(prob, 2, member));
    const auto& witnesses = x2.witnesses.at(member);
    // one witness per (level, constant-table choice)
    std::uint64_t expect = 0;
    for (int m = 1; m <= 2; ++m)
      expect += saturating_pow(2, prob.tower.level(m).order());
    CHECK(witnesses.size() == expect);
  }
}

TEST_CASE("compute_xn: deterministic across thread counts") {
  UniversalProblem prob = make_problem("x1 a1 x1^-1 a1^-1\n", {2, 4, 8}, 2, {2});
  UniversalOptions seq, par;
  par.threads = 4;
  CHECK(compute_xn(prob, 3, seq).members == compute_xn(prob, 3, par).members);
}

TEST_CASE("check_compatibility: definitional inclusion holds") {
  UniversalProblem forced = make_problem("x1 a1^-1\n", {2, 4}, 2, {2});
  CHECK_FALSE(check_compatibility(forced, 2, 1));

  // vacuous when the fine level is empty
  UniversalProblem empty = make_problem("x1^2 a1\n", {2, 4}, 2, {1});
  CHECK_FALSE(check_compatibility(empty, 2, 1));

  Rng rng(77);
  int nonempty = 0;
  for (int trial = 0; trial < 30; ++trial) {
    EquationSystem system = random_system(rng, 1, 1, 4, 1);
    UniversalProblem prob{cyclic_group(2), QuotientTower::integers({2, 4}), system,
                          {static_cast<long long>(rng.below_int(8)) - 4}};
    CHECK_FALSE(check_compatibility(prob, 2, 1));
    if (!compute_xn(prob, 2).members.empty()) ++nonempty;
  }
  CHECK(nonempty > 0);  // the property was not tested on empty sets alone
}

TEST_CASE("level budgets and their cap") {
  UniversalProblem prob = make_problem("x1 a1^-1\n", {2, 4}, 2, {2});
  CHECK(level_budgets(prob) == std::vector<std::uint64_t>{16, 256});

  UniversalOptions tight;
  tight.level_budget_cap = 100;
  CHECK_THROWS_AS(compute_xn(prob, 2, tight), BudgetError);
  CHECK(compute_xn(prob, 1, tight).members.size() == 1);  // level 1 fits
}

TEST_CASE("build_universal_tuple: enumerating blocks") {
  FiniteGroup z2 = cyclic_group(2);

  // trivial value group: one coordinate per level, trivially complete
  UniversalTuple trivial = build_universal_tuple(trivial_group(), 1, {z2});
  CHECK(trivial.per_level_count == std::vector<std::uint64_t>{1});

  // |H| = 2, k = 1, level Z2: m = 2^(1*2) = 4 coordinates, all four tables
  UniversalTuple t = build_universal_tuple(z2, 1, {z2});
  REQUIRE(t.per_level_count == std::vector<std::uint64_t>{4});
  std::vector<std::uint64_t> seen = t.blocks[0][0];
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<std::uint64_t>{0, 1, 2, 3});

  // k = 2 squares the coordinate count
  UniversalTuple t2 = build_universal_tuple(z2, 2, {z2});
  CHECK(t2.per_level_count == std::vector<std::uint64_t>{16});

  CHECK_THROWS_AS(build_universal_tuple(z2, 3, {cyclic_group(8)}), BudgetError);
}

TEST_CASE("micro_projection_check: forced, square, trivial") {
  // forced solution: projection is exactly the pinned constant
  UniversalProblem forced = make_problem("x1 a1^-1\n", {2}, 2, {1});
  MicroCheckResult r = micro_projection_check(forced);
  CHECK(r.ok);
  CHECK(r.projected == std::vector<std::vector<int>>{{1}});
  CHECK(r.product_order == 512);  // (2^2)^(2^2) * 2

  // x1^2: both routes keep 0 and 1 (any function square-solves over u = 0)
  UniversalProblem square = make_problem("x1^2\n", {2}, 2, {});
  MicroCheckResult r2 = micro_projection_check(square);
  CHECK(r2.ok);
  CHECK(std::find(r2.projected.begin(), r2.projected.end(), std::vector<int>{0}) !=
        r2.projected.end());

  // trivial H: the product degenerates to the group equation
  UniversalProblem trivial = make_problem("x1 a1^-1\n", {2}, 1, {1});
  MicroCheckResult r3 = micro_projection_check(trivial);
  CHECK(r3.ok);
  CHECK(r3.projected == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("micro_projection_check: systematic word sweep") {
  // every reduced word of length <= 3 over a1, x1 at micro scale
  std::vector<std::string> pieces{"a1", "a1^-1", "x1", "x1^-1"};
  std::vector<EquationSystem> systems;
  std::set<std::string> seen;
  for (const std::string& a : pieces)
    for (const std::string& b : pieces)
      for (const std::string& c : pieces) {
        Word w = parse_word(a + " " + b + " " + c);
        if (w.empty()) continue;
        if (!seen.insert(w.str()).second) continue;
        systems.push_back(EquationSystem({w}));
      }
  int checked = 0;
  for (const EquationSystem& system : systems) {
    UniversalProblem prob{cyclic_group(2), QuotientTower::integers({2}), system, {1}};
    MicroCheckResult r = micro_projection_check(prob);
    CHECK(r.ok);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("deepest_nonempty_member") {
  UniversalProblem forced = make_problem("x1 a1^-1\n", {2, 4}, 2, {2});
  DeepestMember deep = deepest_nonempty_member(forced);
  REQUIRE(deep.member);
  CHECK(deep.member->first == 2);
  CHECK(deep.member->second == std::vector<int>{2});
  CHECK(deep.empty_level == 0);
  CHECK(deep.level_sizes == std::vector<std::size_t>{1, 1});

  UniversalProblem square = make_problem("x1^2 a1\n", {2, 4}, 2, {1});
  DeepestMember bad = deepest_nonempty_member(square);
  CHECK_FALSE(bad.member);
  CHECK(bad.empty_level == 1);
  CHECK(bad.refutation_order == 512);

  UniversalProblem commutator =
      make_problem("x1 a1 x1^-1 a1^-1\n", {2, 4}, 1, {3});
  DeepestMember ok = deepest_nonempty_member(commutator);
  REQUIRE(ok.member);
  CHECK(ok.member->second == std::vector<int>{0});
}
