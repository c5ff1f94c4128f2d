#include "eqwreath/universal.hpp"

#include <algorithm>
#include <thread>

#include "eqwreath/search.hpp"
#include "eqwreath/solver.hpp"

namespace eqw {

namespace {

// Search state for "does a solving table tuple exist at this level": the k
// constant tables are fixed, the n variable tables are assigned depth by
// depth with the same word schedule pruning the plain solver uses.
struct LevelSearch {
  const FiniteGroup* level_group = nullptr;
  const FiniteGroup* values = nullptr;
  const EquationSystem* system = nullptr;
  std::uint64_t function_count = 1;  // |H|^|L|

  std::vector<WreathRef> const_refs;
  std::vector<std::vector<std::uint16_t>> var_tables;
  std::vector<WreathRef> var_refs;
  std::vector<std::vector<int>> schedule;
  WreathValue scratch;

  LevelSearch(const FiniteGroup& level, const FiniteGroup& h,
              const EquationSystem& sys,
              const std::vector<std::vector<std::uint16_t>>& const_tables,
              const std::vector<int>& a_level, const std::vector<int>& u_level)
      : level_group(&level), values(&h), system(&sys) {
    function_count = saturating_pow(h.order(), level.order());
    const int k = sys.constant_count();
    const int n = sys.variable_count();
    for (int j = 0; j < k; ++j)
      const_refs.push_back(WreathRef{const_tables[j].data(), a_level[j]});
    var_tables.assign(n, std::vector<std::uint16_t>(level.order(), 0));
    for (int j = 0; j < n; ++j)
      var_refs.push_back(WreathRef{var_tables[j].data(), u_level[j]});
    schedule = words_by_max_variable(sys);
  }

  void decode_table(std::uint64_t index, std::vector<std::uint16_t>& out) const {
    for (int x = 0; x < level_group->order(); ++x) {
      out[x] = static_cast<std::uint16_t>(index % values->order());
      index /= values->order();
    }
  }

  bool word_holds(int wi) {
    evaluate_wreath_into(scratch, system->words()[wi], *level_group, *values,
                         const_refs, var_refs);
    if (scratch.g != 0) return false;
    for (std::uint16_t v : scratch.f)
      if (v != 0) return false;
    return true;
  }

  // Least solving assignment of encoded tables, given that the group
  // components already multiply to the identity for every word.
  std::optional<std::vector<std::uint64_t>> find(std::uint64_t node_budget,
                                                 std::uint64_t* nodes) {
    for (int wi : schedule[0])
      if (!word_holds(wi)) return std::nullopt;
    const int n = system->variable_count();
    std::vector<std::uint64_t> domains(n, function_count);
    auto ok = [this](int depth, const std::vector<std::uint64_t>& partial) {
      decode_table(partial[depth], var_tables[depth]);
      for (int wi : schedule[depth + 1])
        if (!word_holds(wi)) return false;
      return true;
    };
    return first_satisfying_lex(domains, ok, node_budget, nodes);
  }
};

std::vector<int> project_constants(const UniversalProblem& problem, int level) {
  std::vector<int> out;
  out.reserve(problem.constants.size());
  for (long long a : problem.constants)
    out.push_back(problem.tower.project_ambient(level, a));
  return out;
}

void check_problem(const UniversalProblem& problem) {
  if (static_cast<int>(problem.constants.size()) < problem.system.constant_count())
    throw Error("expected " + std::to_string(problem.system.constant_count()) +
                " constant assignments, got " +
                std::to_string(problem.constants.size()));
  if (problem.values.order() < 1) throw Error("value group is empty");
}

}  // namespace

std::vector<std::uint64_t> level_budgets(const UniversalProblem& problem) {
  std::vector<std::uint64_t> out;
  const int kn = problem.system.constant_count() + problem.system.variable_count();
  for (int j = 1; j <= problem.tower.depth(); ++j)
    out.push_back(saturating_pow(
        problem.values.order(),
        static_cast<std::uint64_t>(kn) * problem.tower.level(j).order()));
  return out;
}

namespace {

void check_budgets(const UniversalProblem& problem, int level,
                   const UniversalOptions& options) {
  const auto budgets = level_budgets(problem);
  for (int j = 1; j <= level; ++j)
    if (budgets[j - 1] > options.level_budget_cap)
      throw BudgetError("level " + std::to_string(j) + " needs |H|^((k+n)*|L|) = " +
                        std::to_string(budgets[j - 1]) +
                        " table combinations, over the cap of " +
                        std::to_string(options.level_budget_cap));
}

// Full universal condition for one tuple at one level; fills witnesses when
// requested.
bool member_passes(const UniversalProblem& problem, int level,
                   const std::vector<int>& u, const UniversalOptions& options,
                   std::vector<XnWitness>* witnesses) {
  const FiniteGroup& h = problem.values;
  const int k = problem.system.constant_count();
  for (int m = 1; m <= level; ++m) {
    const FiniteGroup& lm = problem.tower.level(m);
    std::vector<int> a_m = project_constants(problem, m);
    std::vector<int> u_m;
    u_m.reserve(u.size());
    for (int e : u) u_m.push_back(problem.tower.project(level, m, e));

    // group-component precheck; no table choice can repair a failure here
    bool group_ok = true;
    for (const Word& w : problem.system.words())
      if (evaluate(w, lm, a_m, u_m) != 0) {
        group_ok = false;
        break;
      }
    if (!group_ok) return false;

    const std::uint64_t fn_count = saturating_pow(h.order(), lm.order());
    const std::uint64_t f_total = saturating_pow(fn_count, k);
    std::vector<std::vector<std::uint16_t>> const_tables(
        k, std::vector<std::uint16_t>(lm.order(), 0));
    for (std::uint64_t f_index = 0; f_index < f_total; ++f_index) {
      std::uint64_t rest = f_index;
      for (int j = 0; j < k; ++j) {
        std::uint64_t digit = rest % fn_count;
        rest /= fn_count;
        for (int x = 0; x < lm.order(); ++x) {
          const_tables[j][x] = static_cast<std::uint16_t>(digit % h.order());
          digit /= h.order();
        }
      }
      LevelSearch search(lm, h, problem.system, const_tables, a_m, u_m);
      std::uint64_t nodes = 0;
      auto phi = search.find(options.node_budget, &nodes);
      if (!phi) return false;
      if (witnesses) witnesses->push_back(XnWitness{m, f_index, std::move(*phi)});
    }
  }
  return true;
}

}  // namespace

XnSet compute_xn(const UniversalProblem& problem, int level,
                 const UniversalOptions& options) {
  check_problem(problem);
  if (level < 1 || level > problem.tower.depth())
    throw Error("level " + std::to_string(level) + " is out of range");
  check_budgets(problem, level, options);

  const FiniteGroup& ln = problem.tower.level(level);
  const int n = problem.system.variable_count();
  const std::uint64_t total = saturating_pow(ln.order(), n);
  if (total > options.level_budget_cap)
    throw BudgetError("tuple space |L|^n = " + std::to_string(total) +
                      " is over the cap of " +
                      std::to_string(options.level_budget_cap));

  auto tuple_of = [&](std::uint64_t index) {
    std::vector<int> u(n);
    for (int i = n - 1; i >= 0; --i) {
      u[i] = static_cast<int>(index % ln.order());
      index /= ln.order();
    }
    return u;
  };

  XnSet out;
  out.level = level;
  std::vector<char> passed(total, 0);
  const int workers = std::max(1, std::min<int>(options.threads,
                                                static_cast<int>(total ? total : 1)));
  if (workers > 1) {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int c = 0; c < workers; ++c) {
      pool.emplace_back([&, c] {
        try {
          const std::uint64_t lo = total * c / workers;
          const std::uint64_t hi = total * (c + 1) / workers;
          for (std::uint64_t i = lo; i < hi; ++i)
            passed[i] = member_passes(problem, level, tuple_of(i), options, nullptr);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::uint64_t i = 0; i < total; ++i)
      passed[i] = member_passes(problem, level, tuple_of(i), options, nullptr);
  }

  for (std::uint64_t i = 0; i < total; ++i) {
    if (!passed[i]) continue;
    std::vector<int> u = tuple_of(i);
    if (options.keep_witnesses) {
      std::vector<XnWitness> w;
      member_passes(problem, level, u, options, &w);
      out.witnesses.emplace(u, std::move(w));
    }
    out.members.push_back(std::move(u));
  }
  return out;
}

std::optional<std::vector<int>> check_compatibility(const UniversalProblem& problem,
                                                    int fine, int coarse,
                                                    const UniversalOptions& options) {
  if (coarse >= fine) throw Error("compatibility check needs coarse < fine");
  XnSet xfine = compute_xn(problem, fine, options);
  XnSet xcoarse = compute_xn(problem, coarse, options);
  for (const std::vector<int>& u : xfine.members) {
    std::vector<int> image;
    image.reserve(u.size());
    for (int e : u) image.push_back(problem.tower.project(fine, coarse, e));
    if (!std::binary_search(xcoarse.members.begin(), xcoarse.members.end(), image))
      return u;
  }
  return std::nullopt;
}

UniversalTuple build_universal_tuple(const FiniteGroup& values, int constant_count,
                                     const std::vector<FiniteGroup>& levels,
                                     std::uint64_t coordinate_cap) {
  if (constant_count < 0) throw Error("constant count must be >= 0");
  UniversalTuple out;
  out.constant_count = constant_count;
  std::uint64_t coordinates = 0;
  for (const FiniteGroup& level : levels) {
    std::uint64_t m = saturating_pow(
        values.order(), static_cast<std::uint64_t>(constant_count) * level.order());
    coordinates += m;
    if (coordinates > coordinate_cap)
      throw BudgetError("universal tuple needs " + std::to_string(coordinates) +
                        " coordinates, over the cap of " +
                        std::to_string(coordinate_cap));
    out.level_orders.push_back(level.order());
    out.per_level_count.push_back(m);
  }

  out.blocks.assign(constant_count, {});
  for (int j = 0; j < constant_count; ++j) {
    out.blocks[j].resize(levels.size());
    for (std::size_t li = 0; li < levels.size(); ++li)
      out.blocks[j][li].resize(out.per_level_count[li]);
  }
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const std::uint64_t fn_count = saturating_pow(values.order(), levels[li].order());
    for (std::uint64_t c = 0; c < out.per_level_count[li]; ++c) {
      std::uint64_t rest = c;
      for (int j = 0; j < constant_count; ++j) {
        out.blocks[j][li][c] = rest % fn_count;
        rest /= fn_count;
      }
    }
    // projection check: the coordinates enumerate (H^L)^k without repeats
    std::vector<std::uint64_t> seen;
    seen.reserve(out.per_level_count[li]);
    for (std::uint64_t c = 0; c < out.per_level_count[li]; ++c) {
      std::uint64_t combined = 0;
      for (int j = constant_count - 1; j >= 0; --j)
        combined = combined * fn_count + out.blocks[j][li][c];
      seen.push_back(combined);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw Error("internal error: universal tuple repeats a projection");
    if (seen.size() != saturating_pow(fn_count, constant_count))
      throw Error("internal error: universal tuple misses projections");
  }
  return out;
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t cap = std::uint64_t{1} << 62;
  if (b != 0 && a > cap / b) return cap;
  return a * b;
}

struct MicroProduct {
  SemidirectGroup sd;
  std::vector<int> coordinate_level;          // block index per coordinate
  std::vector<std::uint64_t> coordinate_radix;  // |H|^|L| per coordinate
  std::uint64_t d_order = 1;
};

// The carrier group: one (H^L) coordinate per universal-tuple column, with
// the finest level acting by right translation through its projections.
MicroProduct materialize_micro_product(const UniversalProblem& problem,
                                       const UniversalTuple& tuple,
                                       std::uint64_t order_cap) {
  const FiniteGroup& h = problem.values;
  const int depth = problem.tower.depth();
  MicroProduct out;
  for (int li = 0; li < depth; ++li) {
    const std::uint64_t radix =
        saturating_pow(h.order(), problem.tower.level(li + 1).order());
    for (std::uint64_t c = 0; c < tuple.per_level_count[li]; ++c) {
      out.coordinate_level.push_back(li);
      out.coordinate_radix.push_back(radix);
      out.d_order = saturating_mul(out.d_order, radix);
      if (out.d_order > order_cap)
        throw SizeError("micro product order exceeds the cap of " +
                        std::to_string(order_cap));
    }
  }
  const FiniteGroup& top = problem.tower.level(depth);
  if (saturating_mul(out.d_order, top.order()) > order_cap)
    throw SizeError("micro product order exceeds the cap of " +
                    std::to_string(order_cap));

  const int coords = static_cast<int>(out.coordinate_level.size());
  const int d_order = static_cast<int>(out.d_order);

  auto decode_coords = [&](std::uint64_t e) {
    std::vector<std::uint64_t> digits(coords);
    for (int c = 0; c < coords; ++c) {
      digits[c] = e % out.coordinate_radix[c];
      e /= out.coordinate_radix[c];
    }
    return digits;
  };
  auto encode_coords = [&](const std::vector<std::uint64_t>& digits) {
    std::uint64_t e = 0;
    for (int c = coords - 1; c >= 0; --c)
      e = e * out.coordinate_radix[c] + digits[c];
    return e;
  };

  // pointwise product of encoded H^L tables
  auto mul_tables = [&](std::uint64_t p, std::uint64_t q, int level_order) {
    std::uint64_t res = 0, weight = 1;
    for (int x = 0; x < level_order; ++x) {
      res += static_cast<std::uint64_t>(
                 h.mul(static_cast<int>(p % h.order()),
                       static_cast<int>(q % h.order()))) *
             weight;
      p /= h.order();
      q /= h.order();
      weight *= h.order();
    }
    return res;
  };

  std::vector<std::vector<int>> d_table(d_order, std::vector<int>(d_order));
  for (int p = 0; p < d_order; ++p) {
    auto pd = decode_coords(p);
    for (int q = 0; q < d_order; ++q) {
      auto qd = decode_coords(q);
      std::vector<std::uint64_t> rd(coords);
      for (int c = 0; c < coords; ++c)
        rd[c] = mul_tables(pd[c], qd[c],
                           tuple.level_orders[out.coordinate_level[c]]);
      d_table[p][q] = static_cast<int>(encode_coords(rd));
    }
  }
  FiniteGroup d_group = from_cayley_table(d_order, d_table, "D");

  // right-translation action through the per-level projections
  std::vector<int> act(static_cast<std::size_t>(top.order()) * d_order);
  for (int g = 0; g < top.order(); ++g) {
    for (int d = 0; d < d_order; ++d) {
      auto digits = decode_coords(d);
      std::vector<std::uint64_t> moved(coords);
      for (int c = 0; c < coords; ++c) {
        const int li = out.coordinate_level[c];
        const FiniteGroup& lm = problem.tower.level(li + 1);
        const int g_m = problem.tower.project(depth, li + 1, g);
        std::uint64_t f = digits[c], res = 0, weight = 1;
        std::vector<int> vals(lm.order());
        for (int x = 0; x < lm.order(); ++x) {
          vals[x] = static_cast<int>(f % h.order());
          f /= h.order();
        }
        for (int x = 0; x < lm.order(); ++x) {
          res += static_cast<std::uint64_t>(vals[lm.mul(x, g_m)]) * weight;
          weight *= h.order();
        }
        moved[c] = res;
      }
      act[static_cast<std::size_t>(g) * d_order + d] =
          static_cast<int>(encode_coords(moved));
    }
  }
  out.sd = semidirect_product(d_group, top,
                              make_action(top, d_group, std::move(act)),
                              static_cast<long long>(order_cap));

  // stash the encoder inputs the caller needs
  return out;
}

}  // namespace

MicroCheckResult micro_projection_check(const UniversalProblem& problem,
                                        std::uint64_t order_cap,
                                        const UniversalOptions& options) {
  check_problem(problem);
  const int depth = problem.tower.depth();
  const int k = problem.system.constant_count();
  const int n = problem.system.variable_count();

  std::vector<FiniteGroup> levels;
  for (int j = 1; j <= depth; ++j) levels.push_back(problem.tower.level(j));
  UniversalTuple tuple = build_universal_tuple(problem.values, k, levels);
  MicroProduct micro = materialize_micro_product(problem, tuple, order_cap);
  const FiniteGroup& sd = micro.sd.group;

  // encode the universal constants (tuple coordinate tables, constant at top)
  std::vector<int> a_top = project_constants(problem, depth);
  std::vector<int> consts(k);
  for (int j = 0; j < k; ++j) {
    std::uint64_t d_part = 0;
    for (int c = static_cast<int>(micro.coordinate_level.size()) - 1; c >= 0; --c) {
      const int li = micro.coordinate_level[c];
      // coordinate index within its level block
      std::uint64_t offset = 0;
      for (int b = 0; b < c; ++b)
        if (micro.coordinate_level[b] == li) ++offset;
      d_part = d_part * micro.coordinate_radix[c] + tuple.blocks[j][li][offset];
    }
    consts[j] = micro.sd.encode(static_cast<int>(d_part), a_top[j]);
  }

  // enumerate every variable assignment in the product group, keep solutions
  MicroCheckResult result;
  result.product_order = sd.order();
  const std::uint64_t total = saturating_pow(sd.order(), n);
  if (total > 1'000'000)
    throw SizeError("micro check requires |product|^n <= 10^6");
  std::vector<int> vars(n, 0);
  std::vector<std::vector<int>> projected;
  for (std::uint64_t index = 0; index < total; ++index) {
    std::uint64_t rest = index;
    for (int i = n - 1; i >= 0; --i) {
      vars[i] = static_cast<int>(rest % sd.order());
      rest /= sd.order();
    }
    bool ok = true;
    for (const Word& w : problem.system.words())
      if (evaluate(w, sd, consts, vars) != 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    std::vector<int> u(n);
    for (int i = 0; i < n; ++i) u[i] = micro.sd.decode(vars[i]).second;
    projected.push_back(std::move(u));
  }
  std::sort(projected.begin(), projected.end());
  projected.erase(std::unique(projected.begin(), projected.end()), projected.end());
  result.projected = std::move(projected);

  result.computed = compute_xn(problem, depth, options).members;
  result.ok = result.projected == result.computed;
  if (!result.ok)
    result.detail = "projection of the materialized solution set differs from "
                    "the computed member set";
  return result;
}

DeepestMember deepest_nonempty_member(const UniversalProblem& problem,
                                      const UniversalOptions& options) {
  check_problem(problem);
  DeepestMember out;
  const int k = problem.system.constant_count();
  XnSet last;
  for (int j = 1; j <= problem.tower.depth(); ++j) {
    XnSet xn = compute_xn(problem, j, options);
    out.level_sizes.push_back(xn.members.size());
    if (xn.members.empty()) {
      out.empty_level = j;
      // order of the product group where a refutation scan can look
      std::uint64_t d_order = 1;
      for (int m = 1; m <= j; ++m) {
        const int lo = problem.tower.level(m).order();
        std::uint64_t radix = saturating_pow(problem.values.order(), lo);
        std::uint64_t count =
            saturating_pow(problem.values.order(), static_cast<std::uint64_t>(k) * lo);
        d_order = saturating_mul(d_order, saturating_pow(radix, count));
      }
      out.refutation_order =
          saturating_mul(d_order, problem.tower.level(j).order());
      out.hint = "xn-empty level=" + std::to_string(j) +
                 " refutation-order=" + std::to_string(out.refutation_order);
      return out;
    }
    last = std::move(xn);
  }
  out.member = std::make_pair(problem.tower.depth(), last.members.front());
  return out;
}

std::optional<std::vector<std::uint64_t>> find_level_solution(
    const UniversalProblem& problem, int level,
    const std::vector<std::vector<std::uint16_t>>& const_tables,
    const std::vector<int>& u_level, std::uint64_t node_budget) {
  check_problem(problem);
  const FiniteGroup& lm = problem.tower.level(level);
  std::vector<int> a_m = project_constants(problem, level);
  for (const Word& w : problem.system.words())
    if (evaluate(w, lm, a_m, u_level) != 0) return std::nullopt;
  LevelSearch search(lm, problem.values, problem.system, const_tables, a_m, u_level);
  std::uint64_t nodes = 0;
  return search.find(node_budget, &nodes);
}

}  // namespace eqw
