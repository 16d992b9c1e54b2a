#include <algorithm>
#include <numeric>

#include "asg/error.hpp"
#include "asg/subset.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace asg;
using asg::testing::interval;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an asg::Error");
  return ErrorKind::Parse;
}

// Brute force: every permutation of the elements that respects the table.
std::size_t count_automorphisms_brute_force(const FiniteGroup& g) {
  std::vector<Element> p(g.order());
  std::iota(p.begin(), p.end(), Element{0});
  std::size_t count = 0;
  do {
    bool hom = true;
    for (Element a = 0; a < g.order() && hom; ++a)
      for (Element b = 0; b < g.order() && hom; ++b) hom = p[g.mul(a, b)] == g.mul(p[a], p[b]);
    count += hom ? 1 : 0;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

}  // namespace

TEST_CASE("cyclic groups") {
  auto z1 = make_cyclic(1);
  CHECK(z1->order() == 1);
  CHECK(z1->identity() == 0);

  auto z6 = make_cyclic(6);
  CHECK(z6->mul(4, 5) == 3);
  CHECK(z6->inv(2) == 4);

  auto z12 = make_cyclic(12);
  CHECK(z12->inv(0) == 0);
  CHECK(z12->mul(6, 6) == 0);
}

TEST_CASE("dihedral groups") {
  CHECK(make_dihedral(1)->order() == 2);

  auto klein = make_dihedral(2);
  REQUIRE(klein->order() == 4);
  for (Element x = 1; x < 4; ++x) CHECK(klein->inv(x) == x);

  // D4 against its action on the vertices of a square: r = v+1, s = -v.
  auto d4 = make_dihedral(4);
  REQUIRE(d4->order() == 8);
  auto perm = [](Element x) {
    std::array<int, 4> p{};
    const int a = static_cast<int>(x / 4), i = static_cast<int>(x % 4);
    for (int v = 0; v < 4; ++v) {
      const int rotated = (v + i) % 4;
      p[v] = a ? (4 - rotated) % 4 : rotated;
    }
    return p;
  };
  for (Element x = 0; x < 8; ++x) {
    for (Element y = 0; y < 8; ++y) {
      const auto px = perm(x), py = perm(y), pxy = perm(d4->mul(x, y));
      for (int v = 0; v < 4; ++v) CHECK(pxy[v] == px[py[v]]);
    }
  }
  // reflection * reflection is a rotation
  for (Element x = 4; x < 8; ++x)
    for (Element y = 4; y < 8; ++y) CHECK(d4->mul(x, y) < 4);
}

TEST_CASE("direct products") {
  CHECK(make_direct_product(make_cyclic(1), make_cyclic(1))->order() == 1);

  auto v4 = make_direct_product(make_cyclic(2), make_cyclic(2));
  for (Element x = 0; x < 4; ++x) CHECK(v4->inv(x) == x);

  auto z2z3 = make_direct_product(make_cyclic(2), make_cyclic(3));
  std::size_t max_order = 0;
  for (Element x = 0; x < 6; ++x) max_order = std::max(max_order, z2z3->element_order(x));
  CHECK(max_order == 6);

  CHECK(kind_of([] { make_direct_product(make_cyclic(50), make_cyclic(50), 2000); }) ==
        ErrorKind::OrderCapExceeded);
}

TEST_CASE("Cayley table validation") {
  CHECK(make_from_cayley({{0}})->order() == 1);
  CHECK(make_from_cayley({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}})->order() == 3);

  try {
    make_from_cayley({{0, 1}, {1, 1}});
    FAIL("expected NoInverse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoInverse);
    CHECK(std::string(e.what()).find("element 1") != std::string::npos);
  }

  // A loop of order 5: identity and inverses exist, associativity fails.
  const std::vector<std::vector<Element>> loop{
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  CHECK(kind_of([&] { make_from_cayley(loop); }) == ErrorKind::NotAssociative);
  CHECK(kind_of([] { make_from_cayley({{1, 0}, {1, 0}}); }) == ErrorKind::NoIdentity);
  CHECK(kind_of([] { make_from_cayley({{0, 1}, {1}}); }) == ErrorKind::InvalidTable);
  CHECK(kind_of([] { make_from_cayley({{0, 5}, {5, 0}}); }) == ErrorKind::InvalidTable);
}

TEST_CASE("constructor tables round-trip through Cayley validation") {
  for (const auto& g : asg::testing::small_groups()) {
    std::vector<std::vector<Element>> rows(g->order());
    for (Element a = 0; a < g->order(); ++a) rows[a].assign(g->row(a).begin(), g->row(a).end());
    auto h = make_from_cayley(rows);
    CHECK(h->same_structure(*g));
    CHECK(h->identity() == g->identity());
  }
}

TEST_CASE("automorphism enumeration") {
  CHECK(automorphisms(make_cyclic(2)).size() == 1);

  auto z5 = make_cyclic(5);
  auto a5 = automorphisms(z5);
  REQUIRE(a5.size() == 4);
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<Element> m(5);
    for (Element x = 0; x < 5; ++x) m[x] = static_cast<Element>((k * x) % 5);
    CHECK(std::find(a5.begin(), a5.end(), Automorphism{z5, m}) != a5.end());
  }
  CHECK(std::is_sorted(a5.begin(), a5.end(), [](auto& a, auto& b) { return a.map < b.map; }));

  for (const auto& g : {make_dihedral(4), make_dihedral(3), make_direct_product(make_cyclic(2), make_cyclic(4)),
                        make_dihedral(2), make_cyclic(8)}) {
    CAPTURE(g->order());
    CHECK(automorphisms(g).size() == count_automorphisms_brute_force(*g));
  }
  CHECK(automorphisms(make_dihedral(4)).size() == 8);

  CHECK(kind_of([] { automorphisms(make_cyclic(65)); }) == ErrorKind::OrderCapExceeded);
  CHECK(kind_of([] {
          automorphisms(make_direct_product(make_cyclic(2), make_direct_product(make_cyclic(2), make_cyclic(2))),
                        {64, 10});
        }) == ErrorKind::CapExceeded);
}

TEST_CASE("automorphisms applied to subsets") {
  auto z5 = make_cyclic(5);
  auto times2 = make_automorphism(z5, {0, 2, 4, 1, 3});
  CHECK(apply_automorphism(times2, GroupSubset::of(z5, {1, 2})) == GroupSubset::of(z5, {2, 4}));
  CHECK(apply_automorphism(times2, GroupSubset::full(z5)) == GroupSubset::full(z5));

  auto id = identity_automorphism(z5);
  auto s = GroupSubset::of(z5, {0, 3});
  CHECK(apply_automorphism(id, s) == s);

  CHECK(kind_of([&] { apply_automorphism(times2, GroupSubset::full(make_cyclic(6))); }) ==
        ErrorKind::GroupMismatch);
  CHECK(kind_of([&] { make_automorphism(z5, {0, 2, 2, 1, 3}); }) == ErrorKind::InvalidTable);
  CHECK(kind_of([&] { make_automorphism(z5, {1, 2, 3, 4, 0}); }) == ErrorKind::InvalidTable);
}

TEST_CASE("set products, inverses and powers") {
  auto z12 = make_cyclic(12);
  auto a = interval(z12, -1, 1);
  CHECK(set_product(GroupSubset::identity_only(z12), a) == a);
  CHECK(set_product(a, a) == interval(z12, -2, 2));
  CHECK(set_product(a, GroupSubset(z12)).empty());

  auto d4 = make_dihedral(4);
  // {1, s} · {1, s r^2}; s = 4, s r^2 = 6
  CHECK(set_product(GroupSubset::of(d4, {0, 4}), GroupSubset::of(d4, {0, 6})).size() == 4);

  CHECK(set_inverse(a) == a);
  CHECK(set_inverse(GroupSubset::of(z12, {1, 2})) == GroupSubset::of(z12, {11, 10}));
  CHECK(set_inverse(GroupSubset(z12)).empty());

  CHECK(set_power(a, 1) == a);
  CHECK(set_power(a, 3) == interval(z12, -3, 3));
  CHECK(set_power(a, 3).size() == 7);
  auto h = GroupSubset::of(z12, {0, 4, 8});
  for (std::size_t k = 1; k < 6; ++k) CHECK(set_power(h, k) == h);
  CHECK(set_power_of_two(a, 2) == interval(z12, -4, 4));

  CHECK(kind_of([&] { set_product(a, GroupSubset::full(make_cyclic(6))); }) == ErrorKind::GroupMismatch);
  CHECK(kind_of([&] { GroupSubset::of(z12, {12}); }) == ErrorKind::InvalidElement);
}

TEST_CASE("generated subgroups") {
  auto z12 = make_cyclic(12);
  auto h = GroupSubset::of(z12, {0, 3, 6, 9});
  auto gh = generated_subgroup(h);
  CHECK(gh.subgroup == h);
  CHECK(gh.stabilization_exponent == 1);

  auto g = generated_subgroup(interval(z12, -1, 1));
  CHECK(g.subgroup.is_full());
  CHECK(g.stabilization_exponent == 6);

  auto e = generated_subgroup(GroupSubset::identity_only(z12));
  CHECK(e.subgroup.size() == 1);
  CHECK(e.stabilization_exponent == 1);

  CHECK(kind_of([&] { generated_subgroup(GroupSubset::of(z12, {0, 1})); }) == ErrorKind::NotSymmetric);
  CHECK(kind_of([&] { generated_subgroup(GroupSubset::of(z12, {1, 11})); }) == ErrorKind::MissingIdentity);
}

TEST_CASE("set algebra properties on random inputs") {
  std::mt19937_64 rng(7);
  for (const auto& g : asg::testing::small_groups()) {
    const auto autos = automorphisms(g);
    for (int trial = 0; trial < 40; ++trial) {
      auto a = asg::testing::random_subset(g, rng, 0.3);
      auto b = asg::testing::random_subset(g, rng, 0.3);
      auto c = asg::testing::random_subset(g, rng, 0.3);
      CHECK(set_product(set_product(a, b), c) == set_product(a, set_product(b, c)));
      CHECK(set_inverse(set_product(a, b)) == set_product(set_inverse(b), set_inverse(a)));

      const auto& phi = autos[trial % autos.size()];
      CHECK(apply_automorphism(phi, set_product(a, b)) ==
            set_product(apply_automorphism(phi, a), apply_automorphism(phi, b)));
      CHECK(apply_automorphism(phi, set_inverse(a)) == set_inverse(apply_automorphism(phi, a)));
      CHECK(apply_automorphism(phi, a | b) == (apply_automorphism(phi, a) | apply_automorphism(phi, b)));
      CHECK(apply_automorphism(phi, a & b) == (apply_automorphism(phi, a) & apply_automorphism(phi, b)));

      auto s = asg::testing::random_symmetric(g, rng, 0.15);
      auto gen = generated_subgroup(s);
      GroupSubset prev = s;
      for (std::size_t k = 2; k <= gen.stabilization_exponent; ++k) {
        auto next = set_power(s, k);
        CHECK(prev.subset_of(next));
        CHECK(!(prev == next));
        prev = next;
      }
      CHECK(prev == gen.subgroup);
      CHECK(is_subgroup(gen.subgroup));
    }
  }
}
