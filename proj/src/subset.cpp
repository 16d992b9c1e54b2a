#include "asg/subset.hpp"

#include <algorithm>
#include <string>

#include "asg/error.hpp"

namespace asg {

GroupSubset::GroupSubset(GroupPtr g)
    : group_(std::move(g)), universe_(group_->order()), words_((universe_ + 63) / 64, 0) {}

GroupSubset GroupSubset::of(GroupPtr g, std::span<const Element> elems) {
  GroupSubset s(std::move(g));
  for (Element x : elems) s.insert(x);
  return s;
}

GroupSubset GroupSubset::of(GroupPtr g, std::initializer_list<Element> elems) {
  return of(std::move(g), std::span<const Element>(elems.begin(), elems.size()));
}

GroupSubset GroupSubset::full(GroupPtr g) {
  GroupSubset s(std::move(g));
  for (Element x = 0; x < s.universe_; ++x) s.insert(x);
  return s;
}

GroupSubset GroupSubset::identity_only(GroupPtr g) {
  GroupSubset s(g);
  s.insert(g->identity());
  return s;
}

void GroupSubset::insert(Element x) {
  if (x >= universe_) {
    throw Error(ErrorKind::InvalidElement, "element " + std::to_string(x) +
                                               " is out of range for a group of order " +
                                               std::to_string(universe_));
  }
  words_[x >> 6] |= std::uint64_t{1} << (x & 63);
}

std::size_t GroupSubset::size() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool GroupSubset::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool GroupSubset::contains_identity() const { return group_ && contains(group_->identity()); }

Element GroupSubset::front() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w]) return static_cast<Element>(w * 64 + std::countr_zero(words_[w]));
  }
  throw Error(ErrorKind::EmptyInput, "front() of an empty subset");
}

std::vector<Element> GroupSubset::elements() const {
  std::vector<Element> out;
  out.reserve(size());
  for_each([&](Element x) { out.push_back(x); });
  return out;
}

void GroupSubset::check_same(const GroupSubset& o) const {
  if (universe_ != o.universe_ || !same_group(group_, o.group_)) {
    throw Error(ErrorKind::GroupMismatch, "subsets belong to different groups");
  }
}

bool GroupSubset::subset_of(const GroupSubset& o) const {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool GroupSubset::intersects(const GroupSubset& o) const {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

GroupSubset& GroupSubset::operator|=(const GroupSubset& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

GroupSubset& GroupSubset::operator&=(const GroupSubset& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

GroupSubset& GroupSubset::operator-=(const GroupSubset& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

bool GroupSubset::lex_less(const GroupSubset& o) const {
  const auto a = elements();
  const auto b = o.elements();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void require_same_group(const GroupSubset& a, const GroupSubset& b) {
  if (!a.group() || !b.group() || !same_group(a.group(), b.group())) {
    throw Error(ErrorKind::GroupMismatch, "subsets belong to different groups");
  }
}

bool is_symmetric(const GroupSubset& a) { return set_inverse(a) == a; }

GroupSubset left_translate(Element g, const GroupSubset& a) {
  GroupSubset out(a.group());
  const auto row = a.group()->row(g);
  a.for_each([&](Element x) { out.insert(row[x]); });
  return out;
}

GroupSubset set_product(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(a, b);
  const FiniteGroup& g = *a.group();
  GroupSubset out(a.group());
  const auto right = b.elements();
  if (right.empty()) return out;
  const std::size_t n = g.order();
  std::size_t count = 0;
  a.for_each([&](Element x) {
    if (count == n) return;
    const auto row = g.row(x);
    for (Element y : right) {
      const Element p = row[y];
      if (!out.contains(p)) {
        out.insert(p);
        if (++count == n) return;
      }
    }
  });
  return out;
}

GroupSubset set_inverse(const GroupSubset& a) {
  GroupSubset out(a.group());
  a.for_each([&](Element x) { out.insert(a.group()->inv(x)); });
  return out;
}

GroupSubset set_power(const GroupSubset& a, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::PreconditionFailed, "set_power needs k >= 1");
  GroupSubset result;
  bool have = false;
  GroupSubset base = a;
  while (k) {
    if (k & 1U) {
      result = have ? set_product(result, base) : base;
      have = true;
    }
    k >>= 1U;
    if (k) base = set_product(base, base);
  }
  return result;
}

GroupSubset set_power_of_two(const GroupSubset& a, std::size_t e) {
  GroupSubset p = a;
  for (std::size_t i = 0; i < e; ++i) {
    GroupSubset next = set_product(p, p);
    if (next == p) break;
    p = std::move(next);
  }
  return p;
}

GeneratedSubgroup generated_subgroup(const GroupSubset& a) {
  if (!a.contains_identity()) throw Error(ErrorKind::MissingIdentity, "set does not contain the identity");
  if (!is_symmetric(a)) throw Error(ErrorKind::NotSymmetric, "set is not symmetric");
  GroupSubset cur = a;
  std::size_t k = 1;
  for (;;) {
    GroupSubset next = set_product(cur, a);
    if (next == cur) return {std::move(cur), k};
    cur = std::move(next);
    ++k;
  }
}

bool is_subgroup(const GroupSubset& a) {
  return a.contains_identity() && is_symmetric(a) && set_product(a, a) == a;
}

GroupSubset apply_automorphism(const Automorphism& phi, const GroupSubset& s) {
  if (!same_group(phi.group, s.group())) {
    throw Error(ErrorKind::GroupMismatch, "automorphism and subset belong to different groups");
  }
  GroupSubset out(s.group());
  s.for_each([&](Element x) { out.insert(phi(x)); });
  return out;
}

}  // namespace asg
