#include <random>

#include "doctest.h"
#include "support.hpp"

#include "addcomb/gset.hpp"

using namespace addcomb;
using namespace testing;

TEST_CASE("make_group basics") {
  const Group g = make_group({13});
  CHECK(g.size() == 13);
  CHECK(g.is_prime_cyclic());
  CHECK(g.prime() == 13);
  CHECK(g.descriptor() == "p=13");

  const Group h = make_group({4, 4});
  CHECK(h.size() == 16);
  CHECK_FALSE(h.is_prime_cyclic());
  CHECK_THROWS_AS(h.prime(), GroupError);
  CHECK(h.descriptor() == "G=4x4");

  CHECK_THROWS_AS(make_group({1}), GroupError);
  CHECK_THROWS_AS(make_group({}), GroupError);
  CHECK(make_group({12}).descriptor() == "G=12");
}

TEST_CASE("group size matches tuple enumeration") {
  for (const auto& orders : std::vector<std::vector<std::uint64_t>>{{2}, {3, 5, 7}, {2, 2, 2, 2, 2, 2}, {4, 6}}) {
    const Group g = make_group(orders);
    std::uint64_t count = 0;
    std::vector<std::int64_t> c(orders.size(), 0);
    while (true) {
      CHECK(g.index(c) == count);
      ++count;
      std::size_t i = orders.size();
      while (i > 0 && ++c[i - 1] == static_cast<std::int64_t>(orders[i - 1])) c[--i] = 0;
      if (i == 0) break;
    }
    CHECK(count == g.size());
  }
}

TEST_CASE("element arithmetic is componentwise") {
  const Group g = make_group({3, 5});
  const std::int64_t x[] = {2, 4}, y[] = {2, 3};
  const Elem a = g.index(x), b = g.index(y);
  CHECK(g.coords(g.add(a, b)) == std::vector<std::uint64_t>{1, 2});
  CHECK(g.coords(g.sub(a, b)) == std::vector<std::uint64_t>{0, 1});
  CHECK(g.add(a, g.neg(a)) == g.zero());
  CHECK(g.scale(-2, a) == g.neg(g.add(a, a)));
}

TEST_CASE("primality and modular helpers") {
  CHECK(is_prime(2));
  CHECK(is_prime(23003));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));
  CHECK(is_prime(18446744073709551557ULL));
  CHECK(mod_inverse(5, 13) == 8);
  CHECK_THROWS_AS(mod_inverse(4, 12), GroupError);
  CHECK(reduce_mod(-1, 13) == 12);
  CHECK(mul_mod(18446744073709551556ULL, 2, 18446744073709551557ULL) == 18446744073709551555ULL);
}

TEST_CASE("affine_map") {
  const GSet a = gs("p=13: 0,1,3");
  CHECK(affine_map(a, 1, 0) == a);
  CHECK(affine_map(gs("p=13: 0,5,10"), 8, 0) == gs("p=13: 0,1,2"));
  CHECK_THROWS_AS(affine_map(gs("p=13: 0,1"), 0, 0), GroupError);
  CHECK_THROWS_AS(affine_map(gs("G=4x4: (0,0)"), 3, 0), GroupError);
  CHECK(affine_map(gs("G=4x4: (0,1)"), -1, 0) == gs("G=4x4: (0,3)"));
}

TEST_CASE("affine_map is a bijection and round-trips") {
  std::mt19937_64 rng(7);
  const auto g = zp(101);
  for (int t = 0; t < 200; ++t) {
    const GSet a = random_set(g, rng);
    const std::int64_t d = 1 + static_cast<std::int64_t>(rng() % 100);
    const Elem c = rng() % 101;
    const GSet b = affine_map(a, d, c);
    CHECK(b.card() == a.card());
    const std::uint64_t dinv = mod_inverse(static_cast<std::uint64_t>(d), 101);
    const Elem back = reduce_mod(-static_cast<std::int64_t>(mul_mod(dinv, c, 101)), 101);
    CHECK(affine_map(b, static_cast<std::int64_t>(dinv), back) == a);
  }
}

TEST_CASE("set literal parsing and formatting") {
  const GSet a = gs("p=13: 0,1,3");
  CHECK(a.card() == 3);
  CHECK(a.contains(3));
  CHECK_FALSE(a.contains(2));
  CHECK(format_set(a) == "p=13: 0,1,3");
  CHECK(format_set(gs("p=13: 3, 1,0,1")) == "p=13: 0,1,3");
  CHECK(format_set(gs("G=4x4: (1,2),(0,0)")) == "G=4x4: (0,0),(1,2)");
  CHECK(format_set(gs("p=13: -1")) == "p=13: 12");

  const SetValue z = parse_set_literal("Z: 4,0,2,1,-3");
  REQUIRE(std::holds_alternative<IntSet>(z));
  CHECK(std::get<IntSet>(z) == IntSet{-3, 0, 1, 2, 4});
  CHECK(format_set(std::get<IntSet>(z)) == "Z: -3,0,1,2,4");

  CHECK_THROWS_AS(parse_set_literal("x"), ParseError);
  CHECK_THROWS_AS(parse_set_literal("q=5: 1"), ParseError);
  CHECK_THROWS_AS(parse_set_literal("p=12: 1"), ParseError);
  CHECK_THROWS_AS(parse_set_literal("p=4x4: 1"), ParseError);
  CHECK_THROWS_AS(parse_set_literal("p=13: 1,,2"), ParseError);
  CHECK_THROWS_AS(parse_set_literal("p=13: one"), ParseError);
  CHECK_THROWS_AS(parse_set_literal("G=4x4: (1,2"), ParseError);
  CHECK_THROWS_AS(parse_set_literal("G=4x4: (1,2,3)"), ParseError);
  CHECK_THROWS_AS(parse_gset("Z: 1,2"), ParseError);
  CHECK_THROWS_AS(parse_set_literal("G=1024x1024x1024: (0,0,0)"), ParseError);
}

TEST_CASE("printed sets re-parse to the same set") {
  std::mt19937_64 rng(11);
  for (const auto& orders : std::vector<std::vector<std::uint64_t>>{{13}, {12}, {4, 4}, {3, 5, 7}, {2, 2, 2, 2, 2, 2}}) {
    const auto g = grp(orders);
    for (int t = 0; t < 50; ++t) {
      const GSet a = random_set(g, rng);
      CHECK(parse_gset(format_set(a)) == a);
    }
  }
}

TEST_CASE("GSet invariants") {
  const auto g = zp(67);
  std::mt19937_64 rng(3);
  const GSet a = random_set(g, rng, 20);
  CHECK(a.card() == 20);
  CHECK(a.elements().size() == 20);
  std::uint64_t pop = 0;
  for (auto w : a.words()) pop += static_cast<std::uint64_t>(std::popcount(w));
  CHECK(pop == a.card());
  CHECK_THROWS_AS(GSet::from_mask(g, 1), GroupError);
  CHECK(GSet::from_mask(zp(7), 0b1011) == gs("p=7: 0,1,3"));
  // bits past |G| are cleared
  CHECK(GSet(zp(7), {~std::uint64_t{0}}).card() == 7);
  CHECK_THROWS_AS(GSet::of(zp(7), {7}), GroupError);
}
