#pragma once

// Finite chains of quotient groups with compatible surjections and nested
// sections, plus the section-pullback maps between wreath products and the
// locality check they support.
//
// A tower has levels L_1 (coarsest) .. L_d (finest) and surjections
// L_i -> L_j for i > j that commute. The ambient group behind a tower is the
// integers (for an integer tower, levels Z/m_j with reduction maps) or the
// finest level itself (for an explicit tower). Sections are subsets of the
// ambient set that project bijectively onto their level and are nested
// upward: Phi_1 within Phi_2 within ... within Phi_d.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqwreath/group.hpp"
#include "eqwreath/word.hpp"

namespace eqw {

enum class TowerBase { Integers, Explicit };

class QuotientTower {
 public:
  QuotientTower() = default;

  // Levels Z/m_1, ..., Z/m_d with each modulus dividing the next and strictly
  // increasing; maps are reduction mod m_j.
  static QuotientTower integers(std::vector<long long> moduli);

  // Explicit levels with the step surjections step_maps[j]: levels[j+1] ->
  // levels[j]; the remaining maps are their composites. Every map is
  // validated as a surjective homomorphism and the composite compatibility
  // is checked exhaustively.
  static QuotientTower explicit_chain(std::vector<FiniteGroup> levels,
                                      std::vector<GroupHom> step_maps);

  TowerBase base() const { return base_; }
  int depth() const { return static_cast<int>(levels_.size()); }
  // Levels are addressed 1-based: level(1) coarsest, level(depth()) finest.
  const FiniteGroup& level(int j) const { return levels_[j - 1]; }
  const std::vector<long long>& moduli() const { return moduli_; }

  int project(int fine, int coarse, int element) const;
  const GroupHom& hom(int fine, int coarse) const;

  // Ambient arithmetic: integers under addition, or the finest level.
  long long ambient_mul(long long a, long long b) const;
  long long ambient_inv(long long a) const;
  long long ambient_identity() const { return 0; }
  int project_ambient(int level, long long a) const;

  long long ambient_evaluate(const Word& w, const std::vector<long long>& consts,
                             const std::vector<long long>& vars) const;

 private:
  TowerBase base_ = TowerBase::Integers;
  std::vector<long long> moduli_;
  std::vector<FiniteGroup> levels_;
  // homs_[i][j] = map level i+1 -> level j+1 for i > j (0-based storage)
  std::vector<std::vector<GroupHom>> homs_;
};

struct SectionFamily {
  // sections[j-1] = Phi_j as ambient points, ascending.
  std::vector<std::vector<long long>> sections;
  // lifts[j-1][e] = the unique point of Phi_j projecting to element e of L_j.
  std::vector<std::vector<long long>> lifts;

  const std::vector<long long>& section(int level) const { return sections[level - 1]; }
  long long lift(int level, int element) const { return lifts[level - 1][element]; }
  bool contains(int level, long long point) const;
};

struct SectionOverride {
  int level = 0;
  std::vector<long long> points;
};

// Integer towers default to centered residues {-floor(m/2), ..., ceil(m/2)-1};
// explicit towers take the full finest level and fill coarser sections with
// least representatives nested inside the next finer one. Overrides replace
// whole levels before validation. Bijectivity and nesting are checked
// exhaustively; violations raise ValidationError.
SectionFamily make_sections(const QuotientTower& tower,
                            const std::vector<SectionOverride>& overrides = {});

// The tower of levels Z/m_1 <- ... <- Z/m_d with its centered sections.
std::pair<QuotientTower, SectionFamily> integer_tower(
    std::vector<long long> moduli);

// A surjection with a chosen section: hom restricted to `section` is a
// bijection onto the target.
struct SectionedHom {
  GroupHom hom;
  std::vector<int> section;      // ascending elements of the source
  std::vector<char> in_section;  // size |source|
  std::vector<int> lift;         // target element -> section point

  bool contains(int x) const { return in_section[x] != 0; }
};

SectionedHom make_sectioned_hom(GroupHom hom, std::vector<int> section);

// The sectioned surjection L_fine -> L_coarse with section the image of
// Phi_coarse at the fine level.
SectionedHom level_sectioned_hom(const QuotientTower& tower,
                                 const SectionFamily& sections, int fine,
                                 int coarse);

// Restriction to the section followed by pullback: the unique psi over the
// target with psi(hom(t)) = phi(t) for t in the section. Values of phi off
// the section are not read.
FunctionTable section_pullback(const SectionedHom& sh, const FunctionTable& phi);

// (phi, alpha) -> (pullback of phi, hom(alpha)).
WreathElement wreath_pushforward(const SectionedHom& sh, const WreathElement& element);

enum class LocalityOutcome { PremiseFails, Verified, Violation };

struct LocalityReport {
  LocalityOutcome outcome;
  int lhs = 0;  // H-part of the word at x, evaluated over the source
  int rhs = 0;  // H-part at the image of x, evaluated over the target
};

// Evaluates the word at a (k+n)-tuple of wreath elements over the source
// group and at the pushforward tuple over the target, then compares the
// H-components at x and at hom(x). When x * (prefix values of p at the group
// parts) stays inside the section the two must agree; Violation is returned
// only if that fails, and would indicate a broken pullback. Outside the
// premise the values may legitimately differ (PremiseFails).
LocalityReport check_locality(const Word& p, const std::vector<WreathElement>& tuple,
                              int constant_count, const SectionedHom& sh, int x);

// Per-level check: true at level j when every word of the system evaluates to
// the identity at the level-j projections of the ambient assignments.
std::vector<bool> finite_level_check(const EquationSystem& system,
                                     const QuotientTower& tower,
                                     const std::vector<long long>& consts,
                                     const std::vector<long long>& vars);

struct LocalityTrialOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  int max_base_order = 12;   // |A|
  int max_value_order = 4;   // |H|
  int max_word_length = 6;
  int threads = 1;
  // When set, instances draw (A, B, section) from the tower's level pairs
  // instead of random cyclic quotients with random sections.
  const QuotientTower* tower = nullptr;
  const SectionFamily* sections = nullptr;
};

struct LocalityTrialStats {
  std::uint64_t verified = 0;
  std::uint64_t premise_fails = 0;
  std::uint64_t violations = 0;
  // premise-failing trials whose two sides differ; evidence the premise is
  // not vacuous
  std::uint64_t divergent_premise_fails = 0;
  std::optional<std::uint64_t> first_divergent_trial;
};

// Seeded randomized trials of check_locality; per-trial seeds derive from the
// root seed, so results are identical at any thread count.
LocalityTrialStats run_locality_trials(const LocalityTrialOptions& options);

}  // namespace eqw
