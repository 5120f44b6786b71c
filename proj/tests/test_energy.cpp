#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "addcomb/energy.hpp"

using namespace addcomb;
using namespace testing;

namespace {

// Direct quadruple count.
std::uint64_t brute_energy(const GSet& a, const GSet& b) {
  const auto ea = a.elements(), eb = b.elements();
  const Group& g = a.group();
  std::uint64_t n = 0;
  for (Elem a1 : ea)
    for (Elem a2 : ea)
      for (Elem b1 : eb)
        for (Elem b2 : eb) n += g.sub(a1, a2) == g.sub(b1, b2);
  return n;
}

}  // namespace

TEST_CASE("energy examples") {
  const GSet a = gs("p=13: 0,1,3");
  CHECK(energy(a, a) == 15);
  CHECK(energy(a, a, Backend::naive) == 15);
  CHECK(energy(gs("p=13: 5"), gs("p=13: 5")) == 1);
  CHECK(energy(GSet::full(zp(5)), GSet::full(zp(5))) == 125);
}

TEST_CASE("energy_k examples") {
  const GSet a = gs("p=13: 0,1,3");
  CHECK(energy_k(a, 3) == 33);
  CHECK(energy_k(a, 1) == 9);
  CHECK(energy_k(a, 2) == 15);
  CHECK(energy_real(gs("p=13: 2"), 1.5) == doctest::Approx(1.0));
  CHECK(energy_real(a, 1.5) == doctest::Approx(std::pow(3.0, 1.5) + 6));
  CHECK(energy_real(a, 3.0) == doctest::Approx(33.0));
}

TEST_CASE("triple_sums examples") {
  for (Backend be : {Backend::fast, Backend::naive}) {
    const TripleSums t = triple_sums(gs("p=13: 0,1,3"), be);
    CHECK(t.first == 27);
    CHECK(t.second == 33);
    const TripleSums s = triple_sums(gs("p=13: 7"), be);
    CHECK(s.first == 1);
    CHECK(s.second == 1);
    const TripleSums f = triple_sums(GSet::full(zp(5)), be);
    CHECK(f.first == 125);
    CHECK(f.second == 625);
  }
}

TEST_CASE("schur_count examples") {
  const auto g = zp(13);
  for (Backend be : {Backend::fast, Backend::naive}) {
    CHECK(schur_count(interval(g, -1, 1), be) == 7);
    CHECK(schur_count(interval(g, -2, 2), be) == 19);
    CHECK(schur_count(gs("p=13: 4"), be) == 0);
    CHECK(schur_count(gs("p=13: 0"), be) == 1);
  }
}

TEST_CASE("schur bound: intervals attain equality") {
  for (std::uint64_t p : {13, 101, 499}) {
    const auto g = zp(p);
    for (std::int64_t n = 0; 3 * (2 * n + 1) <= static_cast<std::int64_t>(2 * p + 1); ++n) {
      const Verdict v = lemma34_check(interval(g, -n, n));
      CHECK(passed(v));
      CHECK(param_or(v, "equality") == "true");
    }
  }
  CHECK(na(lemma34_check(gs("p=17: 0,1"))));
  CHECK(na(lemma34_check(interval(zp(13), -5, 5))));  // 3*11 > 27
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) CHECK(passed(lemma34_check(random_set(zp(17), rng, 5))));
}

TEST_CASE("centered moments for {0,1,3} in Z_17") {
  const EnergyReport r = centered_moments(gs("p=17: 0,1,3"));
  CHECK(r.card == 3);
  CHECK(r.diff_card == 7);
  CHECK(r.e2 == 15);
  CHECK(r.e3 == 33);
  CHECK(r.lambda == Rational(9, 7));
  CHECK(r.sigma1 == 0);
  CHECK(r.sigma2 == Rational(24, 7));
  CHECK(r.sigma3 == Rational(240, 49));
  CHECK(r.k == Rational(7, 3));
  CHECK(r.fmax == Rational(12, 7));

  const Verdict v = moments_check(gs("p=17: 0,1,3"));
  CHECK(passed(v));
  CHECK(param_or(v, "sub.sig23") == "240/49 <= 288/49 margin=0.16666666666666666");
}

TEST_CASE("cs_bound examples") {
  const Verdict v = cs_bound_check(gs("p=17: 0,1,3"));
  CHECK(passed(v));
  CHECK(v.rhs.str() == "1125/91");  // = 3375/273
  CHECK(v.lhs.str() == "15");
  CHECK(v.margin > 0);

  // APs of length m with 2m-1 < p/2
  const auto g = zp(101);
  for (std::int64_t m = 1; 2 * m - 1 < 50; ++m) {
    const Verdict ap = cs_bound_check(interval(g, 0, m - 1));
    CHECK(passed(ap));
    if (m >= 2) CHECK(param_or(ap, "K") == to_string(Rational(2 * m - 1, m)));
  }
  CHECK(na(cs_bound_check(interval(zp(13), 0, 4))));
}

TEST_CASE("convolution_sum examples") {
  CHECK(passed(convolution_sum_check(gs("p=17: 0,1,3"), Kind::diff)));
  CHECK(passed(convolution_sum_check(gs("p=17: 0,1,3"), Kind::sum)));
  const Verdict single = convolution_sum_check(gs("p=17: 4"), Kind::diff);
  CHECK(passed(single));
  CHECK(single.lhs.str() == "1");
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) CHECK(passed(convolution_sum_check(random_set(zp(101), rng, 8), Kind::sum)));
}

TEST_CASE("the printed closed form of the difference-sum identity fails on {0,1,2,3}") {
  // The asserted relation is the pre-simplification Cauchy-Davenport line;
  // the closed form is only recorded.
  const Verdict v = convolution_sum_check(gs("p=101: 0,1,2,3"), Kind::diff);
  CHECK(passed(v));
  CHECK(param_or(v, "note.printed_closed_form") == "92 >= 98 margin=-0.061224489795918366");
}

TEST_CASE("mixed_energy examples") {
  const Verdict v = mixed_energy_check(gs("p=17: 0,1,3"));
  CHECK(passed(v));
  CHECK(param_or(v, "E32").substr(0, 7) == "11.1961");
  CHECK(passed(mixed_energy_check(gs("p=17: 9"))));
  CHECK(passed(mixed_energy_check(gs("G=4x4: (0,0),(1,0),(2,0),(3,0)"))));
}

TEST_CASE("energy identities on random sets") {
  std::mt19937_64 rng(1234);
  for (const auto& orders : std::vector<std::vector<std::uint64_t>>{{11}, {101}, {4, 4}, {3, 5, 7}, {2, 2, 2, 2, 2, 2}, {60}}) {
    const auto g = grp(orders);
    for (int t = 0; t < 25; ++t) {
      const GSet a = random_set(g, rng, 1 + rng() % std::min<std::uint64_t>(g->size(), 14));
      const GSet b = random_set(g, rng, 1 + rng() % std::min<std::uint64_t>(g->size(), 14));
      CHECK(energy(a, b) == brute_energy(a, b));
      CHECK(energy(a, b) == energy(a, b, Backend::naive));
      const std::uint64_t e = energy(a, a);
      const std::uint64_t n = a.card();
      CHECK(e >= n * n);
      CHECK(e <= n * n * n);
      CHECK(energy_k(a, 3) <= Int(n) * e);

      const TripleSums f = triple_sums(a), s = triple_sums(a, Backend::naive);
      CHECK(f.first == s.first);
      CHECK(f.second == s.second);
      CHECK(f.first == Int(n) * n * n);
      CHECK(f.second == energy_k(a, 3));

      CHECK(passed(triple_sums_check(a)));
      CHECK(passed(moments_check(a)));
      CHECK_FALSE(cs_bound_check(a).failed());
      CHECK_FALSE(mixed_energy_check(a).failed());
      if (g->is_prime_cyclic()) {
        CHECK(schur_count(a) == schur_count(a, Backend::naive));
        CHECK_FALSE(lemma34_check(a).failed());
        for (Kind k : {Kind::sum, Kind::diff}) CHECK_FALSE(convolution_sum_check(a, k).failed());
      }
    }
  }
}
