#pragma once

// Exact finite groups as dense multiplication tables over elements 0..n-1
// with 0 the identity, plus the constructions used throughout: direct
// products and powers, semidirect products for a validated action, and
// wreath products H wr G with the multiplication
// (f,g)(f',g') = (f*(g.f'), g*g') for the right-translation action
// (g.f)(x) = f(x*g).
//
// Validation policy for every constructed group: identity and inverse laws
// exhaustively, associativity exhaustively up to order 64 and on 10^5 seeded
// random triples above that, and row/column cancellativity.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqwreath/error.hpp"
#include "eqwreath/word.hpp"

namespace eqw {

inline constexpr long long kDefaultOrderCap = 10000;

class FiniteGroup {
 public:
  // Default-constructed groups are empty placeholders; construct through the
  // factory functions below.
  FiniteGroup() = default;

  int order() const { return order_; }
  const std::string& name() const { return name_; }

  int mul(int a, int b) const { return (*table_)[a * order_ + b]; }
  int inv(int a) const { return (*inverse_)[a]; }
  int pow(int g, long long e) const;
  int conjugate(int g, int by) const { return mul(mul(by, g), inv(by)); }

  bool is_abelian() const;
  int element_order(int g) const;

  const std::vector<std::uint16_t>& table() const { return *table_; }

  // Structural equality: same order and same multiplication table.
  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.order_ == b.order_ &&
           (a.table_ == b.table_ || (a.table_ && b.table_ && *a.table_ == *b.table_));
  }

  static FiniteGroup unchecked(int order, std::string name,
                               std::vector<std::uint16_t> table);

 private:
  int order_ = 0;
  std::string name_;
  std::shared_ptr<const std::vector<std::uint16_t>> table_;
  std::shared_ptr<const std::vector<std::uint16_t>> inverse_;
};

// Throws ValidationError naming a concrete witness on the first broken axiom.
void validate_group_axioms(int order, const std::vector<std::uint16_t>& table,
                           const std::string& name);

// Builds and validates a group from a full table. If the identity is not at
// index 0 the elements 0 and the identity are relabeled first; axiom
// witnesses refer to the relabeled table in that case.
FiniteGroup from_cayley_table(int order, const std::vector<std::vector<int>>& table,
                              std::string name = "");

// Closure of permutation generators given in cycle notation on points
// 1..degree, e.g. "(1 2 3)(4 5)". The closure is materialized as a table;
// exceeding `order_cap` raises SizeError.
FiniteGroup from_permutations(int degree, const std::vector<std::string>& generators,
                              std::string name = "",
                              long long order_cap = kDefaultOrderCap);

FiniteGroup trivial_group();
FiniteGroup cyclic_group(int n);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b,
                           std::string name = "",
                           long long order_cap = kDefaultOrderCap);

// The direct power H^count on base-|H| encoded tuples: digit x of an element
// index is the tuple entry at position x (little-endian).
struct PowerGroup {
  FiniteGroup group;
  int base_order = 1;
  int exponent = 0;

  std::uint64_t encode(const std::vector<int>& tuple) const;
  std::vector<int> decode(std::uint64_t element) const;
};

PowerGroup direct_power(const FiniteGroup& h, int count,
                        long long order_cap = kDefaultOrderCap);

struct GroupHom {
  FiniteGroup source;
  FiniteGroup target;
  std::vector<std::uint16_t> map;

  int apply(int a) const { return map[a]; }
  bool is_surjective() const;
};

// nullopt when multiplicative; otherwise a witness pair (a, b) with
// map(a*b) != map(a)*map(b).
std::optional<std::pair<int, int>> validate_hom(const GroupHom& hom);

// Validates and returns the homomorphism; throws ValidationError otherwise.
GroupHom make_hom(FiniteGroup source, FiniteGroup target, std::vector<int> map);

// inner first, then outer; domain mismatch or a non-multiplicative result
// raises ValidationError.
GroupHom compose_hom(const GroupHom& outer, const GroupHom& inner);

// An element of H^G: a total table of H-values indexed by elements of G.
struct FunctionTable {
  FiniteGroup domain;
  FiniteGroup codomain;
  std::vector<std::uint16_t> values;

  int at(int x) const { return values[x]; }
  FunctionTable pointwise_mul(const FunctionTable& other) const;
  FunctionTable pointwise_inv() const;
  // The right-translation image g.f with (g.f)(x) = f(x*g).
  FunctionTable translated(int g) const;
  friend bool operator==(const FunctionTable& a, const FunctionTable& b) {
    return a.values == b.values;
  }
};

FunctionTable make_function_table(FiniteGroup domain, FiniteGroup codomain,
                                  std::vector<int> values);

struct WreathElement {
  FunctionTable f;
  int g = 0;
};

// An action of `actor` on the group `space` by automorphisms, stored as a
// full table. The composition law validated is act(g*h, d) = act(g, act(h, d)),
// which is the convention under which the semidirect multiplication below is
// associative; validation is the source of truth for the convention.
struct GroupAction {
  FiniteGroup actor;
  FiniteGroup space;
  std::vector<std::uint16_t> table;  // actor.order x space.order

  int apply(int g, int d) const { return table[g * space.order() + d]; }
};

GroupAction make_action(FiniteGroup actor, FiniteGroup space,
                        std::vector<int> table);

// The action of G on the direct power H^G by (g.f)(x) = f(x*g), on base-|H|
// encoded tuples (see PowerGroup).
GroupAction action_by_right_translation(const FiniteGroup& g, const FiniteGroup& h,
                                        long long order_cap = kDefaultOrderCap);

// The semidirect product D x| G on pairs (d, g) with index d*|G| + g and
// multiplication (d,g)(d',g') = (d * act(g,d'), g*g').
struct SemidirectGroup {
  FiniteGroup group;
  FiniteGroup left;   // D
  FiniteGroup right;  // G

  int encode(int d, int g) const { return d * right.order() + g; }
  std::pair<int, int> decode(int e) const {
    return {e / right.order(), e % right.order()};
  }
};

SemidirectGroup semidirect_product(const FiniteGroup& d, const FiniteGroup& g,
                                   const GroupAction& action,
                                   long long order_cap = kDefaultOrderCap);

// H wr G materialized on pairs (f, g) with index enc(f)*|G| + g, where enc is
// the little-endian base-|H| encoding of the table f. Built directly from the
// wreath multiplication formula (independently of semidirect_product).
struct WreathGroup {
  FiniteGroup group;
  FiniteGroup base;  // H
  FiniteGroup top;   // G

  std::uint64_t function_count = 1;  // |H|^|G|

  int encode(const std::vector<int>& f, int g) const;
  std::pair<std::vector<int>, int> decode(int e) const;
  // H-part value at point x, without a full decode.
  int f_value(int e, int x) const;
  int g_value(int e) const { return e % top.order(); }
};

WreathGroup wreath_product(const FiniteGroup& h, const FiniteGroup& g,
                           long long order_cap = kDefaultOrderCap);

// Word evaluation in H wr A without materializing the product. Arguments are
// (function table over A, element of A) pairs; tables are raw H-value arrays
// of length |A|.
struct WreathValue {
  std::vector<std::uint16_t> f;
  int g = 0;
};

struct WreathRef {
  const std::uint16_t* f = nullptr;
  int g = 0;
};

void evaluate_wreath_into(WreathValue& out, const Word& w, const FiniteGroup& a,
                          const FiniteGroup& h, const std::vector<WreathRef>& consts,
                          const std::vector<WreathRef>& vars);

WreathValue evaluate_wreath(const Word& w, const FiniteGroup& a, const FiniteGroup& h,
                            const std::vector<WreathValue>& consts,
                            const std::vector<WreathValue>& vars);

// Built-in groups of every order <= max_order (max 16), ascending by order,
// each constructed from permutation generators and fully validated. The
// per-order slices are complete up to isomorphism for orders <= 8.
std::vector<FiniteGroup> catalog(int max_order);

// Saturating power used for order computations; caps at 2^62.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp);

}  // namespace eqw
