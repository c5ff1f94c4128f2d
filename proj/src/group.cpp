#include "eqwreath/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>

namespace eqw {

namespace {

std::string describe(const std::string& name) {
  return name.empty() ? std::string("group") : "group '" + name + "'";
}

std::vector<std::uint16_t> compute_inverses(int order,
                                            const std::vector<std::uint16_t>& table,
                                            const std::string& name) {
  std::vector<std::uint16_t> inv(order, 0);
  for (int a = 0; a < order; ++a) {
    bool found = false;
    for (int b = 0; b < order; ++b) {
      if (table[a * order + b] == 0 && table[b * order + a] == 0) {
        inv[a] = static_cast<std::uint16_t>(b);
        found = true;
        break;
      }
    }
    if (!found)
      throw ValidationError(describe(name) + ": element " + std::to_string(a) +
                            " has no two-sided inverse");
  }
  return inv;
}

}  // namespace

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  const std::uint64_t cap = std::uint64_t{1} << 62;
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) return cap;
    out *= base;
  }
  return out;
}

FiniteGroup FiniteGroup::unchecked(int order, std::string name,
                                   std::vector<std::uint16_t> table) {
  FiniteGroup g;
  g.order_ = order;
  g.name_ = std::move(name);
  auto shared = std::make_shared<std::vector<std::uint16_t>>(std::move(table));
  g.inverse_ = std::make_shared<std::vector<std::uint16_t>>(
      compute_inverses(order, *shared, g.name_));
  g.table_ = std::move(shared);
  return g;
}

int FiniteGroup::pow(int g, long long e) const {
  if (e < 0) return pow(inv(g), -e);
  int acc = 0;
  for (long long i = 0; i < e; ++i) acc = mul(acc, g);
  return acc;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order_; ++a)
    for (int b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

int FiniteGroup::element_order(int g) const {
  int acc = g, n = 1;
  while (acc != 0) {
    acc = mul(acc, g);
    ++n;
  }
  return n;
}

void validate_group_axioms(int order, const std::vector<std::uint16_t>& table,
                           const std::string& name) {
  if (order <= 0) throw ValidationError(describe(name) + ": order must be positive");
  if (table.size() != static_cast<std::size_t>(order) * order)
    throw ValidationError(describe(name) + ": table has wrong size");
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] >= order)
      throw ValidationError(describe(name) + ": entry out of range at cell " +
                            std::to_string(i));

  auto mul = [&](int a, int b) { return table[a * order + b]; };

  for (int x = 0; x < order; ++x) {
    if (mul(0, x) != x || mul(x, 0) != x)
      throw ValidationError(describe(name) + ": element 0 is not an identity (fails at " +
                            std::to_string(x) + ")");
  }

  compute_inverses(order, table, name);  // throws NoInverse-style errors

  auto check_triple = [&](int a, int b, int c) {
    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
      throw ValidationError(describe(name) + ": not associative at a=" +
                            std::to_string(a) + " b=" + std::to_string(b) +
                            " c=" + std::to_string(c));
  };
  if (order <= 64) {
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c) check_triple(a, b, c);
  } else {
    std::mt19937_64 rng(0x9E3779B97F4A7C15ULL);
    for (int i = 0; i < 100000; ++i) {
      int a = static_cast<int>(rng() % order);
      int b = static_cast<int>(rng() % order);
      int c = static_cast<int>(rng() % order);
      check_triple(a, b, c);
    }
  }

  // cancellativity: every row and column is a permutation
  std::vector<std::uint32_t> seen(order, 0);
  std::uint32_t stamp = 0;
  for (int a = 0; a < order; ++a) {
    ++stamp;
    for (int b = 0; b < order; ++b) {
      int v = mul(a, b);
      if (seen[v] == stamp)
        throw ValidationError(describe(name) + ": row " + std::to_string(a) +
                              " repeats value " + std::to_string(v));
      seen[v] = stamp;
    }
  }
  for (int b = 0; b < order; ++b) {
    ++stamp;
    for (int a = 0; a < order; ++a) {
      int v = mul(a, b);
      if (seen[v] == stamp)
        throw ValidationError(describe(name) + ": column " + std::to_string(b) +
                              " repeats value " + std::to_string(v));
      seen[v] = stamp;
    }
  }
}

FiniteGroup from_cayley_table(int order, const std::vector<std::vector<int>>& table,
                              std::string name) {
  if (order <= 0) throw ValidationError(describe(name) + ": order must be positive");
  if (order > kDefaultOrderCap)
    throw SizeError(describe(name) + ": order " + std::to_string(order) +
                    " exceeds the cap of " + std::to_string(kDefaultOrderCap));
  if (table.size() != static_cast<std::size_t>(order))
    throw ValidationError(describe(name) + ": expected " + std::to_string(order) +
                          " rows");
  std::vector<std::uint16_t> flat(static_cast<std::size_t>(order) * order);
  for (int a = 0; a < order; ++a) {
    if (table[a].size() != static_cast<std::size_t>(order))
      throw ValidationError(describe(name) + ": row " + std::to_string(a) +
                            " has wrong length");
    for (int b = 0; b < order; ++b) {
      int v = table[a][b];
      if (v < 0 || v >= order)
        throw ValidationError(describe(name) + ": entry " + std::to_string(v) +
                              " at (" + std::to_string(a) + "," + std::to_string(b) +
                              ") is out of range");
      flat[a * order + b] = static_cast<std::uint16_t>(v);
    }
  }

  int identity = -1;
  for (int e = 0; e < order; ++e) {
    bool ok = true;
    for (int x = 0; x < order && ok; ++x)
      ok = flat[e * order + x] == x && flat[x * order + e] == x;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) throw ValidationError(describe(name) + ": no identity element");

  if (identity != 0) {
    // relabel by swapping 0 and the identity
    auto relabel = [&](int v) {
      return v == 0 ? identity : (v == identity ? 0 : v);
    };
    std::vector<std::uint16_t> swapped(flat.size());
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        swapped[a * order + b] = static_cast<std::uint16_t>(
            relabel(flat[relabel(a) * order + relabel(b)]));
    flat = std::move(swapped);
  }

  validate_group_axioms(order, flat, name);
  return FiniteGroup::unchecked(order, std::move(name), std::move(flat));
}

namespace {

using Perm = std::vector<std::uint16_t>;

Perm identity_perm(int degree) {
  Perm p(degree);
  for (int i = 0; i < degree; ++i) p[i] = static_cast<std::uint16_t>(i);
  return p;
}

// p first, then q
Perm compose_perm(const Perm& p, const Perm& q) {
  Perm out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = q[p[i]];
  return out;
}

Perm parse_cycles(const std::string& text, int degree) {
  Perm result = identity_perm(degree);
  std::size_t i = 0;
  const std::size_t len = text.size();
  auto fail = [](const std::string& msg, std::size_t pos) {
    throw ParseError(msg + " at position " + std::to_string(pos + 1), pos + 1);
  };
  bool any = false;
  while (i < len) {
    while (i < len && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= len) break;
    if (text[i] != '(') fail("expected '('", i);
    ++i;
    std::vector<int> cycle;
    std::vector<char> used(degree, 0);
    while (true) {
      while (i < len && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
        ++i;
      if (i < len && text[i] == ')') {
        ++i;
        break;
      }
      if (i >= len || !std::isdigit(static_cast<unsigned char>(text[i])))
        fail("expected point or ')' in cycle", i < len ? i : len - 1);
      std::size_t start = i;
      long point = 0;
      while (i < len && std::isdigit(static_cast<unsigned char>(text[i]))) {
        point = point * 10 + (text[i] - '0');
        if (point > degree) fail("point exceeds degree", start);
        ++i;
      }
      if (point < 1) fail("points are 1-based", start);
      if (used[point - 1]) fail("point repeated inside a cycle", start);
      used[point - 1] = 1;
      cycle.push_back(static_cast<int>(point) - 1);
    }
    any = true;
    if (cycle.size() >= 2) {
      Perm c = identity_perm(degree);
      for (std::size_t j = 0; j < cycle.size(); ++j)
        c[cycle[j]] = static_cast<std::uint16_t>(cycle[(j + 1) % cycle.size()]);
      result = compose_perm(result, c);
    }
  }
  if (!any) throw ParseError("empty permutation: expected at least one cycle", 1);
  return result;
}

std::string cycle_string(const Perm& p) {
  std::string out;
  std::vector<char> visited(p.size(), 0);
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (visited[start] || p[start] == start) continue;
    out += '(';
    std::size_t cur = start;
    bool first = true;
    while (!visited[cur]) {
      visited[cur] = 1;
      if (!first) out += ' ';
      out += std::to_string(cur + 1);
      first = false;
      cur = p[cur];
    }
    out += ')';
  }
  if (out.empty()) out = "(1)";
  return out;
}

}  // namespace

FiniteGroup from_permutations(int degree, const std::vector<std::string>& generators,
                              std::string name, long long order_cap) {
  if (degree < 1) throw ValidationError(describe(name) + ": degree must be >= 1");
  if (degree > kDefaultOrderCap)
    throw SizeError(describe(name) + ": degree " + std::to_string(degree) +
                    " exceeds the cap of " + std::to_string(kDefaultOrderCap));
  std::vector<Perm> gens;
  gens.reserve(generators.size());
  for (const std::string& g : generators) gens.push_back(parse_cycles(g, degree));

  std::map<Perm, int> index;
  std::vector<Perm> elements;
  elements.push_back(identity_perm(degree));
  index[elements[0]] = 0;
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const Perm& g : gens) {
      Perm next = compose_perm(elements[head], g);
      if (index.emplace(next, static_cast<int>(elements.size())).second) {
        elements.push_back(std::move(next));
        if (static_cast<long long>(elements.size()) > order_cap)
          throw SizeError(describe(name) + ": closure exceeds the order cap of " +
                          std::to_string(order_cap));
      }
    }
  }

  const int order = static_cast<int>(elements.size());
  std::vector<std::uint16_t> table(static_cast<std::size_t>(order) * order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      table[a * order + b] =
          static_cast<std::uint16_t>(index.at(compose_perm(elements[a], elements[b])));

  validate_group_axioms(order, table, name);
  return FiniteGroup::unchecked(order, std::move(name), std::move(table));
}

FiniteGroup trivial_group() {
  return FiniteGroup::unchecked(1, "Z1", std::vector<std::uint16_t>{0});
}

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw ValidationError("cyclic group order must be >= 1");
  if (n > kDefaultOrderCap)
    throw SizeError("cyclic group order " + std::to_string(n) +
                    " exceeds the cap of " + std::to_string(kDefaultOrderCap));
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      table[a * n + b] = static_cast<std::uint16_t>((a + b) % n);
  return FiniteGroup::unchecked(n, "Z" + std::to_string(n), std::move(table));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::string name,
                           long long order_cap) {
  long long order = static_cast<long long>(a.order()) * b.order();
  if (order > order_cap)
    throw SizeError("direct product order " + std::to_string(order) +
                    " exceeds the cap of " + std::to_string(order_cap));
  if (name.empty()) name = a.name() + "x" + b.name();
  const int n = static_cast<int>(order), bo = b.order();
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p) {
    int pa = p / bo, pb = p % bo;
    for (int q = 0; q < n; ++q) {
      int qa = q / bo, qb = q % bo;
      table[p * n + q] = static_cast<std::uint16_t>(a.mul(pa, qa) * bo + b.mul(pb, qb));
    }
  }
  validate_group_axioms(n, table, name);
  return FiniteGroup::unchecked(n, std::move(name), std::move(table));
}

std::uint64_t PowerGroup::encode(const std::vector<int>& tuple) const {
  std::uint64_t out = 0, weight = 1;
  for (int x = 0; x < exponent; ++x) {
    out += static_cast<std::uint64_t>(tuple[x]) * weight;
    weight *= base_order;
  }
  return out;
}

std::vector<int> PowerGroup::decode(std::uint64_t element) const {
  std::vector<int> out(exponent);
  for (int x = 0; x < exponent; ++x) {
    out[x] = static_cast<int>(element % base_order);
    element /= base_order;
  }
  return out;
}

PowerGroup direct_power(const FiniteGroup& h, int count, long long order_cap) {
  if (count < 0) throw ValidationError("direct power exponent must be >= 0");
  std::uint64_t order = saturating_pow(h.order(), count);
  if (order > static_cast<std::uint64_t>(order_cap))
    throw SizeError("direct power order |" + h.name() + "|^" + std::to_string(count) +
                    " exceeds the cap of " + std::to_string(order_cap));
  const int n = static_cast<int>(order), base = h.order();
  // digit tables: digits[e][x] = component x of element e
  std::vector<std::uint16_t> digits(static_cast<std::size_t>(n) * count);
  for (int e = 0; e < n; ++e) {
    int rest = e;
    for (int x = 0; x < count; ++x) {
      digits[static_cast<std::size_t>(e) * count + x] =
          static_cast<std::uint16_t>(rest % base);
      rest /= base;
    }
  }
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      std::uint64_t out = 0, weight = 1;
      for (int x = 0; x < count; ++x) {
        out += static_cast<std::uint64_t>(
                   h.mul(digits[static_cast<std::size_t>(p) * count + x],
                         digits[static_cast<std::size_t>(q) * count + x])) *
               weight;
        weight *= base;
      }
      table[static_cast<std::size_t>(p) * n + q] = static_cast<std::uint16_t>(out);
    }
  std::string name = h.name() + "^" + std::to_string(count);
  validate_group_axioms(n, table, name);
  PowerGroup out;
  out.group = FiniteGroup::unchecked(n, std::move(name), std::move(table));
  out.base_order = base;
  out.exponent = count;
  return out;
}

bool GroupHom::is_surjective() const {
  std::vector<char> hit(target.order(), 0);
  int count = 0;
  for (std::uint16_t v : map)
    if (!hit[v]) {
      hit[v] = 1;
      ++count;
    }
  return count == target.order();
}

std::optional<std::pair<int, int>> validate_hom(const GroupHom& hom) {
  const int n = hom.source.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (hom.map[hom.source.mul(a, b)] != hom.target.mul(hom.map[a], hom.map[b]))
        return std::make_pair(a, b);
  return std::nullopt;
}

GroupHom make_hom(FiniteGroup source, FiniteGroup target, std::vector<int> map) {
  if (map.size() != static_cast<std::size_t>(source.order()))
    throw ValidationError("homomorphism table has wrong size");
  GroupHom hom;
  hom.map.reserve(map.size());
  for (int v : map) {
    if (v < 0 || v >= target.order())
      throw ValidationError("homomorphism image " + std::to_string(v) +
                            " is outside the target group");
    hom.map.push_back(static_cast<std::uint16_t>(v));
  }
  hom.source = std::move(source);
  hom.target = std::move(target);
  if (auto witness = validate_hom(hom))
    throw ValidationError("not a homomorphism: map(a*b) != map(a)*map(b) for a=" +
                          std::to_string(witness->first) + " b=" +
                          std::to_string(witness->second));
  return hom;
}

GroupHom compose_hom(const GroupHom& outer, const GroupHom& inner) {
  if (!(inner.target == outer.source))
    throw ValidationError("homomorphism composition: inner target differs from "
                          "outer source");
  std::vector<int> map(inner.source.order());
  for (int a = 0; a < inner.source.order(); ++a) map[a] = outer.map[inner.map[a]];
  return make_hom(inner.source, outer.target, std::move(map));
}

FunctionTable make_function_table(FiniteGroup domain, FiniteGroup codomain,
                                  std::vector<int> values) {
  if (values.size() != static_cast<std::size_t>(domain.order()))
    throw ValidationError("function table has wrong size");
  FunctionTable out;
  out.values.reserve(values.size());
  for (int v : values) {
    if (v < 0 || v >= codomain.order())
      throw ValidationError("function value " + std::to_string(v) +
                            " is outside the codomain");
    out.values.push_back(static_cast<std::uint16_t>(v));
  }
  out.domain = std::move(domain);
  out.codomain = std::move(codomain);
  return out;
}

FunctionTable FunctionTable::pointwise_mul(const FunctionTable& other) const {
  FunctionTable out = *this;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.values[i] = static_cast<std::uint16_t>(codomain.mul(values[i], other.values[i]));
  return out;
}

FunctionTable FunctionTable::pointwise_inv() const {
  FunctionTable out = *this;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.values[i] = static_cast<std::uint16_t>(codomain.inv(values[i]));
  return out;
}

FunctionTable FunctionTable::translated(int g) const {
  FunctionTable out = *this;
  for (int x = 0; x < domain.order(); ++x)
    out.values[x] = values[domain.mul(x, g)];
  return out;
}

GroupAction make_action(FiniteGroup actor, FiniteGroup space, std::vector<int> table) {
  const int go = actor.order(), so = space.order();
  if (table.size() != static_cast<std::size_t>(go) * so)
    throw ValidationError("action table has wrong size");
  GroupAction act;
  act.table.reserve(table.size());
  for (int v : table) {
    if (v < 0 || v >= so)
      throw ValidationError("action value " + std::to_string(v) +
                            " is outside the space");
    act.table.push_back(static_cast<std::uint16_t>(v));
  }
  act.actor = std::move(actor);
  act.space = std::move(space);

  for (int d = 0; d < so; ++d)
    if (act.apply(0, d) != d)
      throw ValidationError("action: identity does not act trivially at " +
                            std::to_string(d));
  std::vector<char> seen(so);
  for (int g = 0; g < go; ++g) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int d = 0; d < so; ++d) {
      int v = act.apply(g, d);
      if (seen[v])
        throw ValidationError("action: element " + std::to_string(g) +
                              " does not act bijectively (value " + std::to_string(v) +
                              " repeats)");
      seen[v] = 1;
    }
  }
  for (int g = 0; g < go; ++g)
    for (int h = 0; h < go; ++h) {
      int gh = act.actor.mul(g, h);
      for (int d = 0; d < so; ++d)
        if (act.apply(gh, d) != act.apply(g, act.apply(h, d)))
          throw ValidationError("action: composition law fails at g=" +
                                std::to_string(g) + " h=" + std::to_string(h) +
                                " d=" + std::to_string(d));
    }
  // automorphism check: exhaustive when small, sampled otherwise
  auto check_pair = [&](int g, int d, int e) {
    if (act.apply(g, act.space.mul(d, e)) !=
        act.space.mul(act.apply(g, d), act.apply(g, e)))
      throw ValidationError("action: element " + std::to_string(g) +
                            " is not an automorphism at d=" + std::to_string(d) +
                            " e=" + std::to_string(e));
  };
  if (static_cast<long long>(go) * so * so <= 64LL * 1024 * 1024) {
    for (int g = 0; g < go; ++g)
      for (int d = 0; d < so; ++d)
        for (int e = 0; e < so; ++e) check_pair(g, d, e);
  } else {
    std::mt19937_64 rng(0xA5A5A5A55A5A5A5AULL);
    for (int i = 0; i < 100000; ++i)
      check_pair(static_cast<int>(rng() % go), static_cast<int>(rng() % so),
                 static_cast<int>(rng() % so));
  }
  return act;
}

GroupAction action_by_right_translation(const FiniteGroup& g, const FiniteGroup& h,
                                        long long order_cap) {
  PowerGroup power = direct_power(h, g.order(), order_cap);
  const int go = g.order();
  const int so = power.group.order();
  std::vector<int> table(static_cast<std::size_t>(go) * so);
  std::vector<int> f, moved(g.order());
  for (int gg = 0; gg < go; ++gg)
    for (int d = 0; d < so; ++d) {
      f = power.decode(static_cast<std::uint64_t>(d));
      for (int x = 0; x < go; ++x) moved[x] = f[g.mul(x, gg)];
      table[static_cast<std::size_t>(gg) * so + d] =
          static_cast<int>(power.encode(moved));
    }
  return make_action(g, power.group, std::move(table));
}

SemidirectGroup semidirect_product(const FiniteGroup& d, const FiniteGroup& g,
                                   const GroupAction& action, long long order_cap) {
  if (!(action.actor == g) || !(action.space == d))
    throw ValidationError("semidirect product: action does not match the factors");
  long long order = static_cast<long long>(d.order()) * g.order();
  if (order > order_cap)
    throw SizeError("semidirect product order " + std::to_string(order) +
                    " exceeds the cap of " + std::to_string(order_cap));
  const int n = static_cast<int>(order), go = g.order();
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p) {
    int pd = p / go, pg = p % go;
    for (int q = 0; q < n; ++q) {
      int qd = q / go, qg = q % go;
      table[static_cast<std::size_t>(p) * n + q] = static_cast<std::uint16_t>(
          d.mul(pd, action.apply(pg, qd)) * go + g.mul(pg, qg));
    }
  }
  std::string name = d.name() + "x|" + g.name();
  validate_group_axioms(n, table, name);
  SemidirectGroup out;
  out.group = FiniteGroup::unchecked(n, std::move(name), std::move(table));
  out.left = d;
  out.right = g;
  return out;
}

int WreathGroup::encode(const std::vector<int>& f, int g) const {
  std::uint64_t fidx = 0, weight = 1;
  for (int x = 0; x < top.order(); ++x) {
    fidx += static_cast<std::uint64_t>(f[x]) * weight;
    weight *= base.order();
  }
  return static_cast<int>(fidx * top.order() + g);
}

std::pair<std::vector<int>, int> WreathGroup::decode(int e) const {
  int g = e % top.order();
  std::uint64_t fidx = static_cast<std::uint64_t>(e) / top.order();
  std::vector<int> f(top.order());
  for (int x = 0; x < top.order(); ++x) {
    f[x] = static_cast<int>(fidx % base.order());
    fidx /= base.order();
  }
  return {std::move(f), g};
}

int WreathGroup::f_value(int e, int x) const {
  std::uint64_t fidx = static_cast<std::uint64_t>(e) / top.order();
  for (int i = 0; i < x; ++i) fidx /= base.order();
  return static_cast<int>(fidx % base.order());
}

WreathGroup wreath_product(const FiniteGroup& h, const FiniteGroup& g,
                           long long order_cap) {
  const int ho = h.order(), go = g.order();
  std::uint64_t fcount = saturating_pow(ho, go);
  std::uint64_t order = fcount > static_cast<std::uint64_t>(order_cap)
                            ? fcount
                            : fcount * go;
  if (order > static_cast<std::uint64_t>(order_cap))
    throw SizeError("wreath product order |" + h.name() + "|^" + std::to_string(go) +
                    "*" + std::to_string(go) + " exceeds the cap of " +
                    std::to_string(order_cap));

  const int n = static_cast<int>(order);
  // digit tables for the function part: fdigit[fidx*go + x]
  std::vector<std::uint16_t> fdigit(fcount * go);
  for (std::uint64_t fi = 0; fi < fcount; ++fi) {
    std::uint64_t rest = fi;
    for (int x = 0; x < go; ++x) {
      fdigit[fi * go + x] = static_cast<std::uint16_t>(rest % ho);
      rest /= ho;
    }
  }

  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  std::vector<std::uint64_t> hweight(go);
  {
    std::uint64_t w = 1;
    for (int x = 0; x < go; ++x) {
      hweight[x] = w;
      w *= ho;
    }
  }
  for (int p = 0; p < n; ++p) {
    const std::uint64_t pf = static_cast<std::uint64_t>(p) / go;
    const int pg = p % go;
    const std::uint16_t* pfd = &fdigit[pf * go];
    for (int q = 0; q < n; ++q) {
      const std::uint64_t qf = static_cast<std::uint64_t>(q) / go;
      const int qg = q % go;
      const std::uint16_t* qfd = &fdigit[qf * go];
      // (f, a)(f', b) = (x -> f(x) * f'(x*a), a*b)
      std::uint64_t rf = 0;
      for (int x = 0; x < go; ++x)
        rf += static_cast<std::uint64_t>(h.mul(pfd[x], qfd[g.mul(x, pg)])) * hweight[x];
      table[static_cast<std::size_t>(p) * n + q] =
          static_cast<std::uint16_t>(rf * go + g.mul(pg, qg));
    }
  }
  std::string name = h.name() + "wr" + g.name();
  validate_group_axioms(n, table, name);
  WreathGroup out;
  out.group = FiniteGroup::unchecked(n, std::move(name), std::move(table));
  out.base = h;
  out.top = g;
  out.function_count = fcount;
  return out;
}

void evaluate_wreath_into(WreathValue& out, const Word& w, const FiniteGroup& a,
                          const FiniteGroup& h, const std::vector<WreathRef>& consts,
                          const std::vector<WreathRef>& vars) {
  const int ao = a.order();
  out.f.assign(ao, 0);
  out.g = 0;
  for (const Letter& l : w.letters()) {
    const std::vector<WreathRef>& args =
        l.kind == SymbolKind::Constant ? consts : vars;
    if (l.index > static_cast<int>(args.size()))
      throw Error("unassigned symbol " +
                  std::string(l.kind == SymbolKind::Constant ? "a" : "x") +
                  std::to_string(l.index));
    const WreathRef& arg = args[l.index - 1];
    if (l.sign > 0) {
      // (F, g)(f, b) = (t -> F(t) * f(t*g), g*b)
      for (int t = 0; t < ao; ++t)
        out.f[t] = static_cast<std::uint16_t>(h.mul(out.f[t], arg.f[a.mul(t, out.g)]));
      out.g = a.mul(out.g, arg.g);
    } else {
      // (f, b)^-1 = (t -> f(t*b^-1)^-1, b^-1)
      const int binv = a.inv(arg.g);
      for (int t = 0; t < ao; ++t)
        out.f[t] = static_cast<std::uint16_t>(
            h.mul(out.f[t], h.inv(arg.f[a.mul(a.mul(t, out.g), binv)])));
      out.g = a.mul(out.g, binv);
    }
  }
}

WreathValue evaluate_wreath(const Word& w, const FiniteGroup& a, const FiniteGroup& h,
                            const std::vector<WreathValue>& consts,
                            const std::vector<WreathValue>& vars) {
  std::vector<WreathRef> cr, vr;
  cr.reserve(consts.size());
  vr.reserve(vars.size());
  for (const WreathValue& v : consts) cr.push_back({v.f.data(), v.g});
  for (const WreathValue& v : vars) vr.push_back({v.f.data(), v.g});
  WreathValue out;
  evaluate_wreath_into(out, w, a, h, cr, vr);
  return out;
}

namespace {

// generators of the catalog entries as permutation vectors

std::vector<Perm> rotation_gens(int n) {
  Perm rot(n);
  for (int i = 0; i < n; ++i) rot[i] = static_cast<std::uint16_t>((i + 1) % n);
  return {rot};
}

std::vector<Perm> dihedral_gens(int n) {
  auto gens = rotation_gens(n);
  Perm refl(n);
  for (int i = 0; i < n; ++i) refl[i] = static_cast<std::uint16_t>(n - 1 - i);
  gens.push_back(refl);
  return gens;
}

// Dicyclic group of order 4m: a of order 2m, b with b^2 = a^m and
// b^-1 a b = a^-1, realized by right translation on the 4m elements a^i b^e.
std::vector<Perm> dicyclic_gens(int m) {
  const int n = 4 * m;
  auto point = [m](int i, int e) { return e * 2 * m + i; };
  Perm by_a(n), by_b(n);
  for (int i = 0; i < 2 * m; ++i) {
    by_a[point(i, 0)] = static_cast<std::uint16_t>(point((i + 1) % (2 * m), 0));
    by_a[point(i, 1)] = static_cast<std::uint16_t>(point((i + 2 * m - 1) % (2 * m), 1));
    by_b[point(i, 0)] = static_cast<std::uint16_t>(point(i, 1));
    by_b[point(i, 1)] = static_cast<std::uint16_t>(point((i + m) % (2 * m), 0));
  }
  return {by_a, by_b};
}

std::vector<Perm> a4_gens() {
  return {parse_cycles("(1 2 3)", 4), parse_cycles("(1 2)(3 4)", 4)};
}

std::vector<Perm> shift_points(const std::vector<Perm>& gens, int offset, int degree) {
  std::vector<Perm> out;
  for (const Perm& g : gens) {
    Perm p = identity_perm(degree);
    for (std::size_t i = 0; i < g.size(); ++i)
      p[offset + i] = static_cast<std::uint16_t>(offset + g[i]);
    out.push_back(std::move(p));
  }
  return out;
}

struct CatalogEntry {
  std::string name;
  int degree;
  std::vector<Perm> gens;
  int expected_order;
};

CatalogEntry product_entry(const std::string& name, const CatalogEntry& a,
                           const CatalogEntry& b) {
  CatalogEntry out;
  out.name = name;
  out.degree = a.degree + b.degree;
  for (const Perm& g : shift_points(a.gens, 0, out.degree)) out.gens.push_back(g);
  for (const Perm& g : shift_points(b.gens, a.degree, out.degree)) out.gens.push_back(g);
  out.expected_order = a.expected_order * b.expected_order;
  return out;
}

CatalogEntry cyclic_entry(int n) {
  return {"Z" + std::to_string(n), n, n >= 2 ? rotation_gens(n) : std::vector<Perm>{},
          n};
}

}  // namespace

std::vector<FiniteGroup> catalog(int max_order) {
  if (max_order < 1 || max_order > 16)
    throw ValidationError("catalog supports max_order between 1 and 16");

  std::vector<CatalogEntry> entries;
  auto dihedral_entry = [](int n) {
    return CatalogEntry{"D" + std::to_string(n), n, dihedral_gens(n), 2 * n};
  };
  auto dicyclic_entry = [](const std::string& name, int m) {
    return CatalogEntry{name, 4 * m, dicyclic_gens(m), 4 * m};
  };

  const CatalogEntry z2 = cyclic_entry(2), z3 = cyclic_entry(3), z4 = cyclic_entry(4),
                     z8 = cyclic_entry(8);
  const CatalogEntry v4 = product_entry("Z2xZ2", z2, z2);
  const CatalogEntry d4 = dihedral_entry(4);
  const CatalogEntry q8 = dicyclic_entry("Q8", 2);

  entries.push_back({"Z1", 1, {}, 1});
  entries.push_back(z2);
  entries.push_back(z3);
  entries.push_back(z4);
  entries.push_back(v4);
  entries.push_back(cyclic_entry(5));
  entries.push_back(cyclic_entry(6));
  entries.push_back({"S3", 3, dihedral_gens(3), 6});
  entries.push_back(cyclic_entry(7));
  entries.push_back(z8);
  entries.push_back(product_entry("Z4xZ2", z4, z2));
  entries.push_back(product_entry("Z2xZ2xZ2", v4, z2));
  entries.push_back(d4);
  entries.push_back(q8);
  entries.push_back(cyclic_entry(9));
  entries.push_back(product_entry("Z3xZ3", z3, z3));
  entries.push_back(cyclic_entry(10));
  entries.push_back(dihedral_entry(5));
  entries.push_back(cyclic_entry(11));
  entries.push_back(cyclic_entry(12));
  entries.push_back(product_entry("Z6xZ2", cyclic_entry(6), z2));
  entries.push_back(dihedral_entry(6));
  entries.push_back({"A4", 4, a4_gens(), 12});
  entries.push_back(dicyclic_entry("Dic3", 3));
  entries.push_back(cyclic_entry(13));
  entries.push_back(cyclic_entry(14));
  entries.push_back(dihedral_entry(7));
  entries.push_back(cyclic_entry(15));
  entries.push_back(cyclic_entry(16));
  entries.push_back(product_entry("Z8xZ2", z8, z2));
  entries.push_back(product_entry("Z4xZ4", z4, z4));
  entries.push_back(product_entry("Z4xZ2xZ2", z4, v4));
  entries.push_back(product_entry("Z2xZ2xZ2xZ2", v4, v4));
  entries.push_back(dihedral_entry(8));
  entries.push_back(dicyclic_entry("Q16", 4));
  entries.push_back(product_entry("Z2xD4", z2, d4));
  entries.push_back(product_entry("Z2xQ8", z2, q8));

  std::stable_sort(entries.begin(), entries.end(),
                   [](const CatalogEntry& a, const CatalogEntry& b) {
                     return a.expected_order < b.expected_order;
                   });

  std::vector<FiniteGroup> out;
  for (const CatalogEntry& e : entries) {
    if (e.expected_order > max_order) continue;
    std::vector<std::string> gens;
    gens.reserve(e.gens.size());
    for (const Perm& p : e.gens) gens.push_back(cycle_string(p));
    FiniteGroup g = from_permutations(e.degree, gens, e.name);
    if (g.order() != e.expected_order)
      throw ValidationError("catalog entry " + e.name + " closed to order " +
                            std::to_string(g.order()) + ", expected " +
                            std::to_string(e.expected_order));
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace eqw
