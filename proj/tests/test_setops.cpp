#include <random>

#include "doctest.h"
#include "support.hpp"

#include "addcomb/setops.hpp"

using namespace addcomb;
using namespace testing;

TEST_CASE("sumset and diffset examples") {
  CHECK(sumset(gs("p=13: 0,1"), gs("p=13: 0,2")) == gs("p=13: 0,1,2,3"));
  CHECK(sumset(gs("p=13: 0,1,3"), gs("p=13: 0,1,3")) == gs("p=13: 0,1,2,3,4,6"));
  CHECK(sumset(GSet::full(zp(5)), gs("p=5: 2")) == GSet::full(zp(5)));
  CHECK(diffset(gs("p=13: 0,1,3"), gs("p=13: 0,1,3")) == gs("p=13: 0,1,2,3,10,11,12"));
  CHECK(diffset(gs("p=13: 4"), gs("p=13: 4")) == gs("p=13: 0"));
  CHECK(diffset(GSet::full(zp(7)), GSet::full(zp(7))) == GSet::full(zp(7)));
  CHECK(sumset(gs("G=4x4: (0,1),(1,0)"), gs("G=4x4: (3,3)")) == gs("G=4x4: (0,3),(3,0)"));
}

TEST_CASE("sumset errors") {
  CHECK_THROWS_AS(sumset(GSet(zp(5)), gs("p=5: 1")), SetOpError);
  CHECK_THROWS_AS(sumset(gs("p=5: 1"), gs("p=7: 1")), SetOpError);
}

TEST_CASE("layer examples") {
  const GSet a = gs("p=13: 0,1,3");
  CHECK(layer(a, 0) == a);
  CHECK(layer(a, 1) == gs("p=13: 1"));
  CHECK(layer(a, 5).empty());
}

TEST_CASE("rep_profile examples") {
  const RepProfile r = rep_profile(gs("p=13: 0,1,3"));
  const std::vector<std::uint32_t> want = {3, 1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1};
  CHECK(r.counts == want);
  CHECK(r.support == gs("p=13: 0,1,2,3,10,11,12"));
  CHECK(rep_profile(gs("p=13: 6")).counts[0] == 1);
  const RepProfile full = rep_profile(GSet::full(zp(5)));
  for (auto c : full.counts) CHECK(c == 5);
}

TEST_CASE("katz_koester examples") {
  const GSet a = gs("p=13: 0,1,3");
  CHECK(katz_koester_verify(a, 1) == std::pair{true, true});
  CHECK(katz_koester_verify(a, 5) == std::pair{true, true});
  for (Elem x = 0; x < 7; ++x) CHECK(katz_koester_verify(GSet::full(zp(7)), x) == std::pair{true, true});
}

TEST_CASE("kind names") {
  CHECK(to_string(Kind::sum) == "sum");
  CHECK(parse_kind("diff") == Kind::diff);
  CHECK_THROWS(parse_kind("product"));
}

TEST_CASE("integer sumsets") {
  CHECK(int_sumset({0, 1, 2, 4}, {0, 1, 2, 4}) == IntSet{0, 1, 2, 3, 4, 5, 6, 8});
  CHECK(int_diffset({0, 1, 3}, {0, 1, 3}) == IntSet{-3, -2, -1, 0, 1, 2, 3});
}

// Properties against the naive path and against hand-rolled double loops.
TEST_CASE("fast and naive set algebra agree") {
  std::mt19937_64 rng(20240611);
  for (const auto& orders : std::vector<std::vector<std::uint64_t>>{{7}, {101}, {128}, {4, 4}, {3, 5, 7}, {2, 2, 2, 2, 2, 2}, {1009}}) {
    const auto g = grp(orders);
    for (int t = 0; t < 40; ++t) {
      const GSet a = random_set(g, rng, 1 + rng() % std::min<std::uint64_t>(g->size(), 40));
      const GSet b = random_set(g, rng, 1 + rng() % std::min<std::uint64_t>(g->size(), 40));
      const GSet s = sumset(a, b), d = diffset(a, b);
      CHECK(s == sumset(a, b, Backend::naive));
      CHECK(d == diffset(a, b, Backend::naive));
      CHECK(sumset(a, b) == sumset(b, a));
      CHECK(d == sumset(a, negate(b)));
      CHECK(s.card() >= std::max(a.card(), b.card()));
      CHECK(s.card() <= a.card() * b.card());

      const RepProfile pf = rep_profile(a), pn = rep_profile(a, Backend::naive);
      CHECK(pf.counts == pn.counts);
      CHECK(pf.support == diffset(a, a));
      std::uint64_t total = 0;
      for (Elem x = 0; x < g->size(); ++x) {
        total += pf.counts[x];
        CHECK(pf.counts[x] == pf.counts[g->neg(x)]);
        if (x % 7 == 0) CHECK(layer(a, x).card() == pf.counts[x]);
      }
      CHECK(total == a.card() * a.card());
    }
  }
}

TEST_CASE("katz_koester holds on random sets") {
  std::mt19937_64 rng(99);
  for (const auto& orders : std::vector<std::vector<std::uint64_t>>{{13}, {101}, {4, 4}, {3, 5, 7}}) {
    const auto g = grp(orders);
    for (int t = 0; t < 30; ++t) {
      const GSet a = random_set(g, rng, 1 + rng() % std::min<std::uint64_t>(g->size(), 20));
      for (Elem x = 0; x < g->size(); ++x) CHECK(katz_koester_verify(a, x) == std::pair{true, true});
    }
  }
}
