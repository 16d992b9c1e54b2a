#include "asg/group.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>

#include "asg/error.hpp"

namespace asg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAssociative: return "NotAssociative";
    case ErrorKind::NoIdentity: return "NoIdentity";
    case ErrorKind::NoInverse: return "NoInverse";
    case ErrorKind::InvalidTable: return "InvalidTable";
    case ErrorKind::InvalidElement: return "InvalidElement";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::MissingIdentity: return "MissingIdentity";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::LemmaViolation: return "LemmaViolation";
    case ErrorKind::FamilyTooLargeForExhaustive: return "FamilyTooLargeForExhaustive";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::DeclaredConstantMismatch: return "DeclaredConstantMismatch";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::size_t checked_order(std::size_t table_size, std::size_t order_cap) {
  std::size_t n = 0;
  while (n * n < table_size) ++n;
  if (n == 0 || n * n != table_size) {
    throw Error(ErrorKind::InvalidTable, "Cayley table is not square");
  }
  if (n > order_cap) {
    throw Error(ErrorKind::OrderCapExceeded,
                "group order " + std::to_string(n) + " exceeds cap " + std::to_string(order_cap));
  }
  return n;
}

}  // namespace

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  for (Element x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

GroupPtr FiniteGroup::from_table(std::vector<Element> table, std::size_t order_cap) {
  const std::size_t n = checked_order(table.size(), order_cap);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] >= n) {
      throw Error(ErrorKind::InvalidTable, "entry (" + std::to_string(i / n) + "," +
                                               std::to_string(i % n) + ") = " +
                                               std::to_string(table[i]) + " is out of range");
    }
  }
  auto at = [&](std::size_t a, std::size_t b) { return table[a * n + b]; };

  std::optional<Element> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = at(e, x) == x && at(x, e) == x;
    if (ok) identity = static_cast<Element>(e);
  }
  if (!identity) throw Error(ErrorKind::NoIdentity, "table has no two-sided identity");

  std::vector<Element> inverse(n);
  for (std::size_t a = 0; a < n; ++a) {
    bool found = false;
    for (std::size_t b = 0; b < n && !found; ++b) {
      if (at(a, b) == *identity && at(b, a) == *identity) {
        inverse[a] = static_cast<Element>(b);
        found = true;
      }
    }
    if (!found) {
      throw Error(ErrorKind::NoInverse, "element " + std::to_string(a) + " has no inverse");
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ab = at(a, b);
      for (std::size_t c = 0; c < n; ++c) {
        if (at(ab, c) != at(a, at(b, c))) {
          throw Error(ErrorKind::NotAssociative, "(" + std::to_string(a) + "*" + std::to_string(b) +
                                                     ")*" + std::to_string(c) + " != " +
                                                     std::to_string(a) + "*(" + std::to_string(b) +
                                                     "*" + std::to_string(c) + ")");
        }
      }
    }
  }

  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->order_ = n;
  g->identity_ = *identity;
  g->table_ = std::move(table);
  g->inverse_ = std::move(inverse);
  return g;
}

bool same_group(const GroupPtr& a, const GroupPtr& b) noexcept {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same_structure(*b);
}

// Trusted path for tables produced by the structured constructors, where the
// group axioms hold by construction.
struct GroupBuilder {
  static GroupPtr adopt(std::size_t n, std::vector<Element> table, Element identity = 0) {
    std::vector<Element> inverse(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (table[a * n + b] == identity) {
          inverse[a] = static_cast<Element>(b);
          break;
        }
      }
    }
    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    g->order_ = n;
    g->identity_ = identity;
    g->table_ = std::move(table);
    g->inverse_ = std::move(inverse);
    return g;
  }
};

GroupPtr make_cyclic(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidTable, "cyclic group order must be positive");
  if (n > kDefaultOrderCap) throw Error(ErrorKind::OrderCapExceeded, "cyclic order exceeds cap");
  std::vector<Element> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<Element>((a + b) % n);
  return GroupBuilder::adopt(n, std::move(t));
}

GroupPtr make_dihedral(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidTable, "dihedral parameter must be positive");
  const std::size_t order = 2 * n;
  if (order > kDefaultOrderCap) throw Error(ErrorKind::OrderCapExceeded, "dihedral order exceeds cap");
  std::vector<Element> t(order * order);
  // (s^a r^i)(s^b r^j) = s^(a+b) r^((-1)^b i + j)
  for (std::size_t x = 0; x < order; ++x) {
    const std::size_t a = x / n, i = x % n;
    for (std::size_t y = 0; y < order; ++y) {
      const std::size_t b = y / n, j = y % n;
      const std::size_t rot = ((b ? n - i : i) + j) % n;
      t[x * order + y] = static_cast<Element>(((a + b) % 2) * n + rot);
    }
  }
  return GroupBuilder::adopt(order, std::move(t));
}

GroupPtr make_direct_product(const GroupPtr& g, const GroupPtr& h, std::size_t order_cap) {
  const std::size_t ng = g->order(), nh = h->order();
  const std::size_t n = ng * nh;
  if (n > order_cap) {
    throw Error(ErrorKind::OrderCapExceeded,
                "product order " + std::to_string(n) + " exceeds cap " + std::to_string(order_cap));
  }
  std::vector<Element> t(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const Element a = g->mul(static_cast<Element>(x / nh), static_cast<Element>(y / nh));
      const Element b = h->mul(static_cast<Element>(x % nh), static_cast<Element>(y % nh));
      t[x * n + y] = static_cast<Element>(a * nh + b);
    }
  }
  return GroupBuilder::adopt(n, std::move(t), static_cast<Element>(g->identity() * nh + h->identity()));
}

GroupPtr make_from_cayley(const std::vector<std::vector<Element>>& table, std::size_t order_cap) {
  const std::size_t n = table.size();
  std::vector<Element> flat;
  flat.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    if (table[r].size() != n) {
      throw Error(ErrorKind::InvalidTable, "row " + std::to_string(r) + " has length " +
                                               std::to_string(table[r].size()) + ", expected " +
                                               std::to_string(n));
    }
    flat.insert(flat.end(), table[r].begin(), table[r].end());
  }
  return FiniteGroup::from_table(std::move(flat), order_cap);
}

Automorphism make_automorphism(const GroupPtr& g, std::vector<Element> map) {
  const std::size_t n = g->order();
  if (map.size() != n) throw Error(ErrorKind::InvalidTable, "automorphism has wrong length");
  std::vector<bool> seen(n, false);
  for (Element v : map) {
    if (v >= n || seen[v]) throw Error(ErrorKind::InvalidTable, "automorphism is not a permutation");
    seen[v] = true;
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (map[g->mul(a, b)] != g->mul(map[a], map[b])) {
        throw Error(ErrorKind::InvalidTable, "map is not a homomorphism at (" + std::to_string(a) +
                                                 "," + std::to_string(b) + ")");
      }
    }
  }
  return Automorphism{g, std::move(map)};
}

Automorphism identity_automorphism(const GroupPtr& g) {
  std::vector<Element> map(g->order());
  std::iota(map.begin(), map.end(), Element{0});
  return Automorphism{g, std::move(map)};
}

std::vector<Element> greedy_generators(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<Element> gens;
  std::vector<bool> in(n, false);
  for (Element c = 0; c < n; ++c) {
    if (c == g.identity() || in[c]) continue;
    gens.push_back(c);
    std::fill(in.begin(), in.end(), false);
    in[g.identity()] = true;
    std::vector<Element> members{g.identity()};
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (Element s : gens) {
        const Element x = g.mul(members[i], s);
        if (!in[x]) {
          in[x] = true;
          members.push_back(x);
        }
      }
    }
  }
  return gens;
}

namespace {

constexpr Element kUnset = ~Element{0};

struct AutoSearch {
  const FiniteGroup& g;
  const std::vector<Element>& gens;
  std::vector<std::size_t> gen_orders;
  std::size_t count_cap;
  std::vector<std::vector<Element>> found;

  // Extends `map` (defined on <gens[0..level)>) by images[level] and closes it.
  bool extend(std::vector<Element>& map, std::vector<bool>& used, std::size_t level,
              const std::vector<Element>& images) const {
    std::vector<Element> domain;
    for (Element x = 0; x < map.size(); ++x)
      if (map[x] != kUnset) domain.push_back(x);
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const Element d = domain[i];
      for (std::size_t j = 0; j <= level; ++j) {
        const Element x = g.mul(d, gens[j]);
        const Element want = g.mul(map[d], images[j]);
        if (map[x] == kUnset) {
          if (used[want]) return false;
          map[x] = want;
          used[want] = true;
          domain.push_back(x);
        } else if (map[x] != want) {
          return false;
        }
      }
    }
    return true;
  }

  void run(std::size_t level, const std::vector<Element>& map, const std::vector<bool>& used,
           std::vector<Element>& images) {
    if (level == gens.size()) {
      found.push_back(map);
      if (found.size() > count_cap) {
        throw Error(ErrorKind::CapExceeded,
                    "more than " + std::to_string(count_cap) + " automorphisms");
      }
      return;
    }
    for (Element c = 0; c < g.order(); ++c) {
      if (used[c] || g.element_order(c) != gen_orders[level]) continue;
      auto next_map = map;
      auto next_used = used;
      images[level] = c;
      if (extend(next_map, next_used, level, images)) run(level + 1, next_map, next_used, images);
    }
  }
};

}  // namespace

std::vector<Automorphism> automorphisms(const GroupPtr& g, const AutomorphismOptions& opts) {
  if (g->order() > opts.order_cap) {
    throw Error(ErrorKind::OrderCapExceeded, "automorphism enumeration is capped at order " +
                                                 std::to_string(opts.order_cap) + ", group has order " +
                                                 std::to_string(g->order()));
  }
  const auto gens = greedy_generators(*g);
  AutoSearch search{*g, gens, {}, opts.count_cap, {}};
  for (Element s : gens) search.gen_orders.push_back(g->element_order(s));

  std::vector<Element> map(g->order(), kUnset);
  std::vector<bool> used(g->order(), false);
  map[g->identity()] = g->identity();
  used[g->identity()] = true;
  std::vector<Element> images(gens.size(), 0);
  search.run(0, map, used, images);

  std::sort(search.found.begin(), search.found.end());
  std::vector<Automorphism> out;
  out.reserve(search.found.size());
  for (auto& m : search.found) out.push_back(Automorphism{g, std::move(m)});
  return out;
}

}  // namespace asg
