#pragma once

// File formats and small argument parsers shared by the CLI.
//
// Group file:   "cayley <n>" followed by n rows of n indices, or
//               "perm <degree>" followed by one generator per line in cycle
//               notation "(1 2 3)(4 5)". Trailing garbage is rejected.
// System file:  one word per line; blank lines and '#' comments skipped.
// Tower file:   "ztower m1 m2 ..." or "explicit" followed by "group <path>"
//               lines (coarsest first), "hom <fine> <coarse>" each followed
//               by one line of |L_fine| image indices, and optional
//               "section <level> <points...>" overrides.

#include <string>
#include <utility>
#include <vector>

#include "eqwreath/assembly.hpp"
#include "eqwreath/group.hpp"
#include "eqwreath/tower.hpp"
#include "eqwreath/word.hpp"

namespace eqw {

FiniteGroup load_group(const std::string& path);
EquationSystem load_system(const std::string& path);
std::pair<QuotientTower, SectionFamily> load_tower(const std::string& path);

FiniteGroup parse_group_text(const std::string& text, const std::string& name);
std::pair<QuotientTower, SectionFamily> parse_tower_text(
    const std::string& text, const std::string& base_dir);

// "a1=2,a2=-1" -> values ordered by index; every index 1..k must appear
// exactly once.
std::vector<long long> parse_assignments(const std::string& text, int count);

// "f1@0=1,f1@-1=0" -> support points; duplicate (coordinate, point) pairs are
// rejected.
std::vector<SupportPoint> parse_support(const std::string& text);

}  // namespace eqw
