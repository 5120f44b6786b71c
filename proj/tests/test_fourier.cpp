#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "addcomb/energy.hpp"
#include "addcomb/fourier.hpp"

using namespace addcomb;
using namespace testing;

TEST_CASE("spectrum examples") {
  for (Backend be : {Backend::fast, Backend::naive}) {
    const Spectrum full = spectrum(GSet::full(zp(5)), be);
    CHECK(full.coeffs[0].real() == 5.0);
    for (std::size_t i = 1; i < 5; ++i) CHECK(std::abs(full.coeffs[i]) < 1e-12);
    CHECK(full.eta < 1e-12);

    const Spectrum one = spectrum(gs("p=5: 0"), be);
    for (const auto& z : one.coeffs) CHECK(std::abs(z) == doctest::Approx(1.0));
    CHECK(one.eta == doctest::Approx(1.0));
    CHECK(one.argmax == 1);

    const Spectrum s = spectrum(gs("p=5: 0,1,2"), be);
    CHECK(std::abs(s.coeffs[1]) == doctest::Approx(std::numbers::phi).epsilon(1e-12));
    CHECK(s.eta == doctest::Approx(std::numbers::phi / 3).epsilon(1e-12));
    CHECK(s.argmax == 1);
  }
}

TEST_CASE("character convention") {
  // chi_1(1) = exp(-2 pi i / 5): A = {1} has coefficient exp(-2 pi i / 5) at xi = 1
  const Spectrum s = spectrum(gs("p=5: 1"));
  CHECK(s.coeffs[1].real() == doctest::Approx(std::cos(2 * std::numbers::pi / 5)));
  CHECK(s.coeffs[1].imag() == doctest::Approx(-std::sin(2 * std::numbers::pi / 5)));
  CHECK(character_angle(make_group({5}), 1, 1) == doctest::Approx(2 * std::numbers::pi * 4 / 5));
}

TEST_CASE("eta examples") {
  const EtaResult f = eta(GSet::full(zp(5)));
  CHECK(f.eta < 1e-12);
  CHECK(f.character == 1);
  CHECK(eta(gs("p=5: 0")).eta == doctest::Approx(1.0));
  const EtaResult r = eta(gs("p=5: 0,1,2"));
  CHECK(r.eta == doctest::Approx(0.539345).epsilon(1e-6));
  CHECK(r.character == 1);
}

TEST_CASE("parseval examples") {
  for (const char* lit : {"p=13: 0,1,3", "p=13: 5", "G=4x4: (0,0),(1,0),(2,0),(3,0)"}) {
    const GSet a = gs(lit);
    const Spectrum s = spectrum(a);
    double total = 0;
    for (const auto& z : s.coeffs) total += std::norm(z);
    CHECK(total == doctest::Approx(static_cast<double>(a.card() * a.group().size())));
    CHECK(passed(parseval_check(a)));
  }
}

TEST_CASE("subgroup spectrum") {
  const Spectrum s = spectrum(gs("G=4x4: (0,0),(1,0),(2,0),(3,0)"));
  for (Elem xi = 0; xi < 16; ++xi) {
    // annihilator of Z_4 x {0} is {0} x Z_4, i.e. xi < 4
    CHECK(std::abs(s.coeffs[xi]) == doctest::Approx(xi < 4 ? 4.0 : 0.0));
  }
  CHECK(s.eta == doctest::Approx(1.0));
}

TEST_CASE("energy_via_spectrum examples") {
  const GSet a = gs("p=13: 0,1,3");
  CHECK(energy_via_spectrum(a, a) == doctest::Approx(15.0));
  CHECK(energy_via_spectrum(gs("p=13: 4"), gs("p=13: 4")) == doctest::Approx(1.0));
  const GSet b = gs("p=17: 0,1,3");
  const GSet d = diffset(b, b);
  const RepProfile pb = rep_profile(b), pd = rep_profile(d);
  std::uint64_t exact = 0;
  for (Elem x = 0; x < 17; ++x) exact += std::uint64_t{pb.counts[x]} * pd.counts[x];
  CHECK(exact == energy(b, d));
  CHECK(energy_via_spectrum(b, d) == doctest::Approx(static_cast<double>(exact)));
  CHECK(passed(energy_spectrum_check(b)));
}

TEST_CASE("semicircle concentration") {
  const ArcReport same = semicircle_concentration({0.0, 0.0, 0.0});
  CHECK(same.eta_z == doctest::Approx(1.0));
  CHECK(same.best_count == 3);

  std::vector<double> roots;
  for (int k = 0; k < 7; ++k) roots.push_back(2 * std::numbers::pi * k / 7);
  const ArcReport r7 = semicircle_concentration(roots);
  CHECK(r7.eta_z < 1e-12);
  CHECK(r7.best_count == 4);  // ceil(7/2): the open half-circle holds 4 of the 7 points

  std::vector<double> z;
  const Group g = make_group({5});
  for (Elem x : {0, 1, 2}) z.push_back(character_angle(g, 1, x));
  const ArcReport r = semicircle_concentration(z);
  CHECK(r.eta_z == doctest::Approx(0.539345).epsilon(1e-6));
  CHECK(r.best_count == 3);

  CHECK(semicircle_concentration({0.0, std::numbers::pi}).best_count == 1);
  CHECK(passed(semicircle_check(gs("p=5: 0,1,2"))));
}

TEST_CASE("weak_eta examples") {
  const Verdict v = weak_eta_check(gs("p=17: 0,1,3"));
  CHECK(passed(v));
  // eta^2 >= 125/273 - 3/17 = 0.28140486964016...
  CHECK(param_or(v, "sub.weak").find(">= 0.281404869640163") != std::string::npos);
  CHECK(na(weak_eta_check(gs("p=17: 4"))));
  CHECK(passed(weak_eta_check(interval(zp(101), 0, 9))));
  CHECK(na(weak_eta_check(gs("G=4x4: (0,0),(1,0),(2,1)"))));
}

TEST_CASE("spectral product bound") {
  CHECK(passed(spectral_product_check(gs("p=17: 0,1,3"), Kind::diff)));
  const Verdict full = spectral_product_check(GSet::full(zp(7)), Kind::diff);
  CHECK(passed(full));
  CHECK(full.lhs.approx() == doctest::Approx(343.0));
  CHECK(full.rhs.approx() == doctest::Approx(343.0));
  std::mt19937_64 rng(251);
  for (int t = 0; t < 20; ++t) CHECK(passed(spectral_product_check(random_set(zp(251), rng, 12), Kind::sum)));
}

TEST_CASE("fast transform matches direct character sums") {
  std::mt19937_64 rng(42);
  for (const auto& orders : std::vector<std::vector<std::uint64_t>>{
           {2}, {5}, {97}, {128}, {211}, {512}, {4, 4}, {3, 5, 7}, {2, 2, 2, 2, 2, 2}, {8, 8, 8}, {23, 22}}) {
    const auto g = grp(orders);
    for (int t = 0; t < 10; ++t) {
      const GSet a = random_set(g, rng);
      const Verdict v = fft_agreement_check(a);
      CHECK(passed(v));
      const Spectrum f = spectrum(a), n = spectrum(a, Backend::naive);
      double worst = 0;
      for (std::size_t i = 0; i < f.coeffs.size(); ++i) worst = std::max(worst, std::abs(f.coeffs[i] - n.coeffs[i]));
      CHECK(worst <= kTransformAgreement * static_cast<double>(a.card()));
      CHECK(f.argmax == n.argmax);
    }
  }
}

TEST_CASE("fourier identities on random sets") {
  std::mt19937_64 rng(77);
  for (const auto& orders : std::vector<std::vector<std::uint64_t>>{{101}, {1009}, {60}, {4, 4}, {3, 5, 7}}) {
    const auto g = grp(orders);
    for (int t = 0; t < 20; ++t) {
      const GSet a = random_set(g, rng, 1 + rng() % std::min<std::uint64_t>(g->size(), 30));
      CHECK(passed(parseval_check(a)));
      CHECK(passed(energy_spectrum_check(a)));
      const Spectrum s = spectrum(a);
      CHECK(s.eta <= 1.0 + 1e-12);
      CHECK(s.coeffs[0].real() == static_cast<double>(a.card()));
      for (Kind k : {Kind::sum, Kind::diff}) CHECK_FALSE(spectral_product_check(a, k).failed());
      CHECK_FALSE(semicircle_check(a).failed());
      CHECK_FALSE(weak_eta_check(a).failed());
    }
  }
}
