#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace asg {

using Element = std::uint32_t;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Largest order any constructor will tabulate (the table is order^2 entries).
inline constexpr std::size_t kDefaultOrderCap = 2048;

// A finite group on the dense index set 0..order-1, backed by a full Cayley
// table. Instances are immutable and shared through GroupPtr.
class FiniteGroup {
 public:
  std::size_t order() const noexcept { return order_; }
  Element identity() const noexcept { return identity_; }
  Element mul(Element a, Element b) const noexcept { return table_[std::size_t{a} * order_ + b]; }
  Element inv(Element a) const noexcept { return inverse_[a]; }

  // Row a of the Cayley table: b -> a*b.
  std::span<const Element> row(Element a) const noexcept {
    return {table_.data() + std::size_t{a} * order_, order_};
  }
  std::span<const Element> table() const noexcept { return table_; }

  // Smallest k >= 1 with a^k = identity.
  std::size_t element_order(Element a) const;

  bool same_structure(const FiniteGroup& other) const noexcept {
    return order_ == other.order_ && table_ == other.table_;
  }

  // Validates the table as a group. Throws asg::Error with kind NoIdentity,
  // NoInverse, NotAssociative (naming the first violation) or InvalidTable.
  static GroupPtr from_table(std::vector<Element> table, std::size_t order_cap = kDefaultOrderCap);

 private:
  friend struct GroupBuilder;
  FiniteGroup() = default;

  std::size_t order_ = 0;
  Element identity_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
};

bool same_group(const GroupPtr& a, const GroupPtr& b) noexcept;

GroupPtr make_cyclic(std::size_t n);

// Order 2n. Rotation r^i is index i, reflection s*r^i is index n+i, so that
// r^n = s^2 = 1 and s r s = r^-1.
GroupPtr make_dihedral(std::size_t n);

// Element (x, y) is index x * |h| + y.
GroupPtr make_direct_product(const GroupPtr& g, const GroupPtr& h,
                             std::size_t order_cap = kDefaultOrderCap);

// Row-major order x order table.
GroupPtr make_from_cayley(const std::vector<std::vector<Element>>& table,
                          std::size_t order_cap = kDefaultOrderCap);

struct Automorphism {
  GroupPtr group;
  std::vector<Element> map;

  Element operator()(Element x) const noexcept { return map[x]; }
  bool operator==(const Automorphism& o) const { return map == o.map; }
};

// Checks bijectivity and the homomorphism law; throws InvalidTable otherwise.
Automorphism make_automorphism(const GroupPtr& g, std::vector<Element> map);

Automorphism identity_automorphism(const GroupPtr& g);

struct AutomorphismOptions {
  std::size_t order_cap = 64;
  std::size_t count_cap = 200000;
};

// The full automorphism group, sorted lexicographically by map. Images of a
// generating set are chosen by backtracking and extended along the Cayley
// graph, pruning as soon as the partial map stops being a homomorphism.
// Throws OrderCapExceeded / CapExceeded rather than truncating.
std::vector<Automorphism> automorphisms(const GroupPtr& g, const AutomorphismOptions& opts = {});

// Generating set built by repeatedly taking the least element outside the
// subgroup generated so far.
std::vector<Element> greedy_generators(const FiniteGroup& g);

}  // namespace asg
