#include "eqwreath/tower.hpp"

#include <algorithm>
#include <thread>

#include "eqwreath/randgen.hpp"

namespace eqw {

namespace {

long long floor_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

QuotientTower QuotientTower::integers(std::vector<long long> moduli) {
  if (moduli.empty()) throw ValidationError("integer tower needs at least one modulus");
  QuotientTower tower;
  tower.base_ = TowerBase::Integers;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    long long m = moduli[i];
    if (m < 1) throw ValidationError("modulus must be >= 1");
    if (m > kDefaultOrderCap)
      throw SizeError("modulus " + std::to_string(m) + " exceeds the order cap");
    if (i > 0) {
      if (m <= moduli[i - 1])
        throw ValidationError("moduli must be strictly increasing");
      if (m % moduli[i - 1] != 0)
        throw ValidationError("modulus " + std::to_string(moduli[i - 1]) +
                              " does not divide " + std::to_string(m));
    }
    tower.levels_.push_back(cyclic_group(static_cast<int>(m)));
  }
  tower.moduli_ = std::move(moduli);

  const int d = tower.depth();
  tower.homs_.resize(d);
  for (int i = 1; i < d; ++i) {
    tower.homs_[i].resize(i);
    for (int j = 0; j < i; ++j) {
      std::vector<int> map(tower.levels_[i].order());
      for (int e = 0; e < tower.levels_[i].order(); ++e)
        map[e] = static_cast<int>(e % tower.moduli_[j]);
      tower.homs_[i][j] = make_hom(tower.levels_[i], tower.levels_[j], std::move(map));
      if (!tower.homs_[i][j].is_surjective())
        throw ValidationError("tower map is not surjective");
    }
  }

  // compatibility: every two-step factoring equals the direct map
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < i; ++k)
      for (int j = 0; j < k; ++j)
        for (int e = 0; e < tower.levels_[i].order(); ++e)
          if (tower.homs_[i][j].apply(e) !=
              tower.homs_[k][j].apply(tower.homs_[i][k].apply(e)))
            throw ValidationError("tower maps are not compatible");
  return tower;
}

QuotientTower QuotientTower::explicit_chain(std::vector<FiniteGroup> levels,
                                            std::vector<GroupHom> step_maps) {
  if (levels.empty()) throw ValidationError("tower needs at least one level");
  if (step_maps.size() + 1 != levels.size())
    throw ValidationError("expected one step map per adjacent level pair");
  QuotientTower tower;
  tower.base_ = TowerBase::Explicit;
  tower.levels_ = std::move(levels);
  const int d = tower.depth();
  tower.homs_.resize(d);
  for (int i = 1; i < d; ++i) tower.homs_[i].resize(i);
  for (int i = 1; i < d; ++i) {
    const GroupHom& step = step_maps[i - 1];
    if (!(step.source == tower.levels_[i]) || !(step.target == tower.levels_[i - 1]))
      throw ValidationError("step map " + std::to_string(i) +
                            " does not connect levels " + std::to_string(i + 1) +
                            " -> " + std::to_string(i));
    if (!step.is_surjective())
      throw ValidationError("step map " + std::to_string(i) + " is not surjective");
    tower.homs_[i][i - 1] = step;
    for (int j = i - 2; j >= 0; --j)
      tower.homs_[i][j] = compose_hom(tower.homs_[i - 1][j], step);
  }
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < i; ++k)
      for (int j = 0; j < k; ++j)
        for (int e = 0; e < tower.levels_[i].order(); ++e)
          if (tower.homs_[i][j].apply(e) !=
              tower.homs_[k][j].apply(tower.homs_[i][k].apply(e)))
            throw ValidationError("tower maps are not compatible");
  return tower;
}

int QuotientTower::project(int fine, int coarse, int element) const {
  if (fine == coarse) return element;
  return homs_[fine - 1][coarse - 1].apply(element);
}

const GroupHom& QuotientTower::hom(int fine, int coarse) const {
  return homs_[fine - 1][coarse - 1];
}

long long QuotientTower::ambient_mul(long long a, long long b) const {
  if (base_ == TowerBase::Integers) return a + b;
  return levels_.back().mul(static_cast<int>(a), static_cast<int>(b));
}

long long QuotientTower::ambient_inv(long long a) const {
  if (base_ == TowerBase::Integers) return -a;
  return levels_.back().inv(static_cast<int>(a));
}

int QuotientTower::project_ambient(int level, long long a) const {
  if (base_ == TowerBase::Integers)
    return static_cast<int>(floor_mod(a, moduli_[level - 1]));
  const int fine = static_cast<int>(a);
  if (fine < 0 || fine >= levels_.back().order())
    throw Error("ambient point " + std::to_string(a) +
                " is outside the finest level");
  return project(depth(), level, fine);
}

long long QuotientTower::ambient_evaluate(const Word& w,
                                          const std::vector<long long>& consts,
                                          const std::vector<long long>& vars) const {
  if (base_ == TowerBase::Integers) return evaluate_additive(w, consts, vars);
  std::vector<int> c(consts.begin(), consts.end()), v(vars.begin(), vars.end());
  return evaluate(w, levels_.back(), c, v);
}

bool SectionFamily::contains(int level, long long point) const {
  const std::vector<long long>& s = sections[level - 1];
  return std::binary_search(s.begin(), s.end(), point);
}

SectionFamily make_sections(const QuotientTower& tower,
                            const std::vector<SectionOverride>& overrides) {
  const int d = tower.depth();
  SectionFamily family;
  family.sections.resize(d);
  family.lifts.resize(d);

  std::vector<const SectionOverride*> by_level(d + 1, nullptr);
  for (const SectionOverride& o : overrides) {
    if (o.level < 1 || o.level > d)
      throw ValidationError("section override level " + std::to_string(o.level) +
                            " is out of range");
    if (by_level[o.level])
      throw ValidationError("duplicate section override for level " +
                            std::to_string(o.level));
    by_level[o.level] = &o;
  }

  // fill finest to coarsest so defaults can nest inside the next finer level
  for (int j = d; j >= 1; --j) {
    std::vector<long long> points;
    if (by_level[j]) {
      points = by_level[j]->points;
      std::sort(points.begin(), points.end());
    } else if (tower.base() == TowerBase::Integers) {
      long long m = tower.moduli()[j - 1];
      for (long long t = -(m / 2); t < m - m / 2; ++t) points.push_back(t);
    } else if (j == d) {
      for (int e = 0; e < tower.level(d).order(); ++e) points.push_back(e);
    } else {
      // least representative inside the next finer section, per element
      std::vector<long long> lift(tower.level(j).order(), -1);
      for (long long t : family.sections[j]) {  // level j+1, already built
        int e = tower.project_ambient(j, t);
        if (lift[e] < 0) lift[e] = t;
      }
      for (long long t : lift) {
        if (t < 0)
          throw ValidationError("cannot build a nested section for level " +
                                std::to_string(j));
        points.push_back(t);
      }
      std::sort(points.begin(), points.end());
    }
    family.sections[j - 1] = std::move(points);
  }

  // validate: bijectivity per level, nesting upward
  for (int j = 1; j <= d; ++j) {
    const std::vector<long long>& s = family.sections[j - 1];
    const int order = tower.level(j).order();
    if (static_cast<int>(s.size()) != order)
      throw ValidationError("section for level " + std::to_string(j) + " has " +
                            std::to_string(s.size()) + " points, expected " +
                            std::to_string(order));
    std::vector<long long> lift(order, -1);
    std::vector<char> hit(order, 0);
    for (long long t : s) {
      int e = tower.project_ambient(j, t);
      if (hit[e])
        throw ValidationError("section for level " + std::to_string(j) +
                              " hits element " + std::to_string(e) + " twice");
      hit[e] = 1;
      lift[e] = t;
    }
    family.lifts[j - 1] = std::move(lift);
  }
  for (int j = 1; j < d; ++j) {
    const std::vector<long long>& coarse = family.sections[j - 1];
    const std::vector<long long>& fine = family.sections[j];
    for (long long t : coarse)
      if (!std::binary_search(fine.begin(), fine.end(), t))
        throw ValidationError("section for level " + std::to_string(j) +
                              " is not contained in the one for level " +
                              std::to_string(j + 1) + " (point " +
                              std::to_string(t) + ")");
  }
  return family;
}

std::pair<QuotientTower, SectionFamily> integer_tower(std::vector<long long> moduli) {
  QuotientTower tower = QuotientTower::integers(std::move(moduli));
  SectionFamily sections = make_sections(tower);
  return {std::move(tower), std::move(sections)};
}

SectionedHom make_sectioned_hom(GroupHom hom, std::vector<int> section) {
  SectionedHom sh;
  std::sort(section.begin(), section.end());
  if (static_cast<int>(section.size()) != hom.target.order())
    throw ValidationError("section size " + std::to_string(section.size()) +
                          " differs from target order " +
                          std::to_string(hom.target.order()));
  sh.in_section.assign(hom.source.order(), 0);
  sh.lift.assign(hom.target.order(), -1);
  for (int t : section) {
    if (t < 0 || t >= hom.source.order())
      throw ValidationError("section point " + std::to_string(t) +
                            " is outside the source group");
    if (sh.in_section[t])
      throw ValidationError("section point " + std::to_string(t) + " repeats");
    sh.in_section[t] = 1;
    int image = hom.apply(t);
    if (sh.lift[image] != -1)
      throw ValidationError("section hits target element " + std::to_string(image) +
                            " twice");
    sh.lift[image] = t;
  }
  sh.hom = std::move(hom);
  sh.section = std::move(section);
  return sh;
}

SectionedHom level_sectioned_hom(const QuotientTower& tower,
                                 const SectionFamily& sections, int fine, int coarse) {
  std::vector<int> section;
  section.reserve(sections.section(coarse).size());
  for (long long t : sections.section(coarse))
    section.push_back(tower.project_ambient(fine, t));
  return make_sectioned_hom(tower.hom(fine, coarse), std::move(section));
}

FunctionTable section_pullback(const SectionedHom& sh, const FunctionTable& phi) {
  if (!(phi.domain == sh.hom.source))
    throw ValidationError("pullback: function domain differs from the hom source");
  std::vector<int> values(sh.hom.target.order(), 0);
  for (int t : sh.section) values[sh.hom.apply(t)] = phi.at(t);
  return make_function_table(sh.hom.target, phi.codomain, std::move(values));
}

WreathElement wreath_pushforward(const SectionedHom& sh, const WreathElement& element) {
  return WreathElement{section_pullback(sh, element.f), sh.hom.apply(element.g)};
}

LocalityReport check_locality(const Word& p, const std::vector<WreathElement>& tuple,
                              int constant_count, const SectionedHom& sh, int x) {
  const FiniteGroup& source = sh.hom.source;
  if (p.max_constant_index() > constant_count ||
      constant_count + p.max_variable_index() > static_cast<int>(tuple.size()))
    throw Error("locality check: tuple does not cover the word's symbols");
  for (const WreathElement& e : tuple)
    if (!(e.f.domain == source))
      throw ValidationError("locality check: tuple entry is not over the source group");

  std::vector<int> const_g, var_g;
  std::vector<WreathValue> const_w, var_w, const_pushed, var_pushed;
  for (int i = 0; i < static_cast<int>(tuple.size()); ++i) {
    WreathElement pushed = wreath_pushforward(sh, tuple[i]);
    WreathValue plain{tuple[i].f.values, tuple[i].g};
    WreathValue image{pushed.f.values, pushed.g};
    if (i < constant_count) {
      const_g.push_back(tuple[i].g);
      const_w.push_back(std::move(plain));
      const_pushed.push_back(std::move(image));
    } else {
      var_g.push_back(tuple[i].g);
      var_w.push_back(std::move(plain));
      var_pushed.push_back(std::move(image));
    }
  }

  const FiniteGroup& values =
      tuple.empty() ? sh.hom.source : tuple.front().f.codomain;

  bool premise = true;
  for (const Word& q : prefix_set(p)) {
    int s = evaluate(q, source, const_g, var_g);
    if (!sh.contains(source.mul(x, s))) {
      premise = false;
      break;
    }
  }

  LocalityReport report{};
  if (tuple.empty()) {
    report.lhs = report.rhs = 0;
  } else {
    WreathValue lhs = evaluate_wreath(p, source, values, const_w, var_w);
    WreathValue rhs = evaluate_wreath(p, sh.hom.target, values, const_pushed, var_pushed);
    report.lhs = lhs.f[x];
    report.rhs = rhs.f[sh.hom.apply(x)];
  }
  if (!premise)
    report.outcome = LocalityOutcome::PremiseFails;
  else
    report.outcome = report.lhs == report.rhs ? LocalityOutcome::Verified
                                              : LocalityOutcome::Violation;
  return report;
}

std::vector<bool> finite_level_check(const EquationSystem& system,
                                     const QuotientTower& tower,
                                     const std::vector<long long>& consts,
                                     const std::vector<long long>& vars) {
  std::vector<bool> out;
  out.reserve(tower.depth());
  for (int j = 1; j <= tower.depth(); ++j) {
    std::vector<int> c, v;
    c.reserve(consts.size());
    v.reserve(vars.size());
    for (long long a : consts) c.push_back(tower.project_ambient(j, a));
    for (long long u : vars) v.push_back(tower.project_ambient(j, u));
    bool ok = true;
    for (const Word& w : system.words())
      if (evaluate(w, tower.level(j), c, v) != 0) {
        ok = false;
        break;
      }
    out.push_back(ok);
  }
  return out;
}

namespace {

struct TrialContext {
  std::vector<FiniteGroup> value_groups;            // H candidates
  std::vector<std::pair<int, int>> cyclic_pairs;    // (|A|, |B|) with |B| | |A|
  std::vector<std::pair<int, int>> tower_pairs;     // (fine, coarse) level indices
};

TrialContext make_trial_context(const LocalityTrialOptions& options) {
  TrialContext ctx;
  for (int m = 2; m <= options.max_value_order; ++m)
    ctx.value_groups.push_back(cyclic_group(m));
  if (options.max_value_order >= 4)
    ctx.value_groups.push_back(
        from_permutations(4, {"(1 2)", "(3 4)"}, "Z2xZ2"));
  if (ctx.value_groups.empty()) ctx.value_groups.push_back(trivial_group());

  if (options.tower) {
    for (int fine = 2; fine <= options.tower->depth(); ++fine)
      for (int coarse = 1; coarse < fine; ++coarse)
        if (options.tower->level(fine).order() <= options.max_base_order)
          ctx.tower_pairs.emplace_back(fine, coarse);
    if (ctx.tower_pairs.empty())
      throw Error("locality trials: tower has no usable level pairs");
  } else {
    for (int a = 2; a <= options.max_base_order; ++a)
      for (int b = 1; b < a; ++b)
        if (a % b == 0) ctx.cyclic_pairs.emplace_back(a, b);
  }
  return ctx;
}

LocalityReport run_one_trial(const LocalityTrialOptions& options,
                             const TrialContext& ctx, std::uint64_t index) {
  Rng rng(derive_seed(options.seed, index));
  const FiniteGroup& values =
      ctx.value_groups[rng.below(ctx.value_groups.size())];

  SectionedHom sh;
  if (options.tower) {
    auto [fine, coarse] = ctx.tower_pairs[rng.below(ctx.tower_pairs.size())];
    sh = level_sectioned_hom(*options.tower, *options.sections, fine, coarse);
  } else {
    auto [a, b] = ctx.cyclic_pairs[rng.below(ctx.cyclic_pairs.size())];
    FiniteGroup source = cyclic_group(a);
    FiniteGroup target = cyclic_group(b);
    std::vector<int> map(a);
    for (int e = 0; e < a; ++e) map[e] = e % b;
    std::vector<int> section;
    for (int r = 0; r < b; ++r)
      section.push_back(r + b * rng.below_int(a / b));
    sh = make_sectioned_hom(make_hom(std::move(source), std::move(target), std::move(map)),
                            std::move(section));
  }
  const FiniteGroup& source = sh.hom.source;

  const int k = 2, n = 2;
  Word p = random_word(rng, k, n, 1 + rng.below_int(options.max_word_length));
  std::vector<WreathElement> tuple;
  for (int i = 0; i < k + n; ++i) {
    std::vector<int> table(source.order());
    for (int& v : table) v = rng.below_int(values.order());
    tuple.push_back(WreathElement{make_function_table(source, values, std::move(table)),
                                  rng.below_int(source.order())});
  }
  // half the draws start inside the section, where the premise has a chance
  int x = rng.coin() ? sh.section[rng.below(sh.section.size())]
                     : rng.below_int(source.order());
  return check_locality(p, tuple, k, sh, x);
}

}  // namespace

LocalityTrialStats run_locality_trials(const LocalityTrialOptions& options) {
  if ((options.tower == nullptr) != (options.sections == nullptr))
    throw Error("locality trials: tower and sections must be given together");
  const TrialContext ctx = make_trial_context(options);

  const int workers = std::max(1, options.threads);
  std::vector<LocalityTrialStats> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int c = 0; c < workers; ++c) {
    pool.emplace_back([&, c] {
      try {
        LocalityTrialStats& stats = partial[c];
        const std::uint64_t lo = options.trials * c / workers;
        const std::uint64_t hi = options.trials * (c + 1) / workers;
        for (std::uint64_t i = lo; i < hi; ++i) {
          LocalityReport report = run_one_trial(options, ctx, i);
          switch (report.outcome) {
            case LocalityOutcome::Verified:
              ++stats.verified;
              break;
            case LocalityOutcome::Violation:
              ++stats.violations;
              break;
            case LocalityOutcome::PremiseFails:
              ++stats.premise_fails;
              if (report.lhs != report.rhs) {
                ++stats.divergent_premise_fails;
                if (!stats.first_divergent_trial) stats.first_divergent_trial = i;
              }
              break;
          }
        }
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();

  LocalityTrialStats total;
  for (int c = 0; c < workers; ++c) {
    if (errors[c]) std::rethrow_exception(errors[c]);
    total.verified += partial[c].verified;
    total.premise_fails += partial[c].premise_fails;
    total.violations += partial[c].violations;
    total.divergent_premise_fails += partial[c].divergent_premise_fails;
    if (partial[c].first_divergent_trial &&
        (!total.first_divergent_trial ||
         *partial[c].first_divergent_trial < *total.first_divergent_trial))
      total.first_divergent_trial = partial[c].first_divergent_trial;
  }
  return total;
}

}  // namespace eqw
