#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "asg/group.hpp"

namespace asg {

// A subset of one finite group stored as a dense bit-vector. Iteration is in
// increasing index order; equality is extensional.
class GroupSubset {
 public:
  GroupSubset() = default;
  explicit GroupSubset(GroupPtr g);

  // Throws InvalidElement for indices >= order.
  static GroupSubset of(GroupPtr g, std::span<const Element> elems);
  static GroupSubset of(GroupPtr g, std::initializer_list<Element> elems);
  static GroupSubset full(GroupPtr g);
  static GroupSubset identity_only(GroupPtr g);

  const GroupPtr& group() const noexcept { return group_; }
  std::size_t universe() const noexcept { return universe_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  bool contains(Element x) const noexcept {
    return x < universe_ && ((words_[x >> 6] >> (x & 63)) & 1U);
  }
  void insert(Element x);
  void erase(Element x) noexcept {
    if (x < universe_) words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
  }

  std::size_t size() const noexcept;
  bool empty() const noexcept;
  bool is_full() const noexcept { return size() == universe_; }
  bool contains_identity() const;

  // Least member; the subset must be nonempty.
  Element front() const;

  std::vector<Element> elements() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const auto b = static_cast<Element>(std::countr_zero(bits));
        f(static_cast<Element>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  bool subset_of(const GroupSubset& other) const;
  bool intersects(const GroupSubset& other) const;

  GroupSubset& operator|=(const GroupSubset& o);
  GroupSubset& operator&=(const GroupSubset& o);
  GroupSubset& operator-=(const GroupSubset& o);

  friend GroupSubset operator|(GroupSubset a, const GroupSubset& b) { return a |= b; }
  friend GroupSubset operator&(GroupSubset a, const GroupSubset& b) { return a &= b; }
  friend GroupSubset operator-(GroupSubset a, const GroupSubset& b) { return a -= b; }

  bool operator==(const GroupSubset& o) const noexcept {
    return universe_ == o.universe_ && words_ == o.words_;
  }

  // Lexicographic comparison of the sorted member lists.
  bool lex_less(const GroupSubset& o) const;

 private:
  void check_same(const GroupSubset& o) const;

  GroupPtr group_;
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

// Throws GroupMismatch unless both subsets live in the same group.
void require_same_group(const GroupSubset& a, const GroupSubset& b);

bool is_symmetric(const GroupSubset& a);

// {g*x : x in a}
GroupSubset left_translate(Element g, const GroupSubset& a);

// {x*y : x in a, y in b}; stops early once the whole group is reached.
GroupSubset set_product(const GroupSubset& a, const GroupSubset& b);

GroupSubset set_inverse(const GroupSubset& a);

// k-fold product a*a*...*a, k >= 1, by binary exponentiation.
GroupSubset set_power(const GroupSubset& a, std::size_t k);

// a^(2^e) by e successive squarings.
GroupSubset set_power_of_two(const GroupSubset& a, std::size_t e);

struct GeneratedSubgroup {
  GroupSubset subgroup;
  std::size_t stabilization_exponent = 1;
};

// Requires a symmetric and containing the identity (NotSymmetric /
// MissingIdentity otherwise). Returns the least k with a^k = a^(k+1) and that
// fixed set, which is <a>.
GeneratedSubgroup generated_subgroup(const GroupSubset& a);

bool is_subgroup(const GroupSubset& a);

GroupSubset apply_automorphism(const Automorphism& phi, const GroupSubset& s);

}  // namespace asg
